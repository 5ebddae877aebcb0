"""Command-line front: inspect, poke, render, replay, serve.

Conventions: `verb` arguments and trace words are hex (no 0x needed);
`beep` takes a decimal divider and milliseconds. Exit codes: 0 success,
1 operational error, 2 usage error. ACCESS_PROFILE sets the default
profile file.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import driver, verbs
from .audio import PcmBuffer, save_wav, timeline_to_pcm
from .errors import BeepReaderError
from .controller import REG_STATESTS
from .machine import DEFAULT_CODEC_ADDRESS, MachineProfile, build_machine, load_machine_profile
from .reader import load_form
from .service import AccessService
from .session import Session, default_form, parse_key_script
from .verbs import VerbCommand, VerbId, default_catalog


def _hex_int(text: str) -> int:
    try:
        return int(text, 16)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not a hex number") from None


def _divider(text: str) -> int:
    value = int(text)
    if not 0 <= value <= 255:
        raise argparse.ArgumentTypeError("divider must be 0..255")
    return value


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("value must be >= 1")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--profile",
        default=os.environ.get("ACCESS_PROFILE"),
        help="machine profile file (default: packaged cx-default, or $ACCESS_PROFILE)",
    )
    common.add_argument(
        "--latency-steps",
        type=_positive_int,
        default=None,
        help="override the controller's command latency in steps",
    )

    parser = argparse.ArgumentParser(
        prog="beepreader",
        description="Simulated HD Audio stack with a tone-based screen reader.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("info", parents=[common], help="print controller and codec identity")
    sub.add_parser("enumerate", parents=[common], help="print the codec topology")

    p_verb = sub.add_parser("verb", parents=[common], help="send one verb (hex args)")
    p_verb.add_argument("cad", type=_hex_int)
    p_verb.add_argument("nid", type=_hex_int)
    p_verb.add_argument("verb", type=_hex_int)
    p_verb.add_argument("payload", type=_hex_int)

    p_beep = sub.add_parser("beep", parents=[common], help="render one beep to WAV")
    p_beep.add_argument("divider", type=_divider)
    p_beep.add_argument("ms", type=_positive_int)
    p_beep.add_argument("--out", required=True, help="output WAV path")
    p_beep.add_argument("--plot", default=None, help="also save a waveform figure")

    p_demo = sub.add_parser(
        "demo", parents=[common], help="replay a key script through the screen reader"
    )
    p_demo.add_argument("--script", required=True, help="key script, one key per line")
    p_demo.add_argument("--out", required=True, help="output WAV path")
    p_demo.add_argument(
        "--transcript", default=None, help="transcript path (default: WAV path with .txt)"
    )
    p_demo.add_argument("--form", default=None, help="form definition file")
    p_demo.add_argument("--plot", default=None, help="also save a waveform figure")

    p_serve = sub.add_parser("serve", parents=[common], help="start the HTTP service")
    p_serve.add_argument("--port", type=int, default=8000)
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--ui", default=None, help="directory of built web UI to serve")
    p_serve.add_argument("--form", default=None, help="form definition file")

    p_trace = sub.add_parser(
        "decode-trace", parents=[common], help="decode a file of hex command words"
    )
    p_trace.add_argument("file")

    return parser


def _load_profile(args: argparse.Namespace) -> MachineProfile:
    try:
        profile = load_machine_profile(args.profile)
    except OSError as exc:
        raise BeepReaderError(f"cannot read profile: {exc}") from None
    if args.latency_steps is not None:
        profile.controller.latency_steps = args.latency_steps
    return profile


def _machine_binding(args: argparse.Namespace):
    bus, controller, codec = build_machine(_load_profile(args))
    return controller, codec, driver.attach(bus)


def cmd_info(args: argparse.Namespace) -> int:
    controller, _, binding = _machine_binding(args)
    print(f"pci address: {binding.address}")
    print(f"vendor id: 0x{controller.pci_config.vendor_id:04X}")
    print(f"device id: 0x{controller.pci_config.device_id:04X}")
    print(f"bar base: 0x{binding.bar_base:08X}")
    statests = controller.mmio_read(REG_STATESTS, 2)
    for cad in range(16):
        if statests & (1 << cad):
            vendor = driver.get_parameter(binding, cad, 0, 0x00)
            revision = driver.get_parameter(binding, cad, 0, 0x02)
            print(f"codec {cad} vendor: 0x{vendor:08X}")
            print(f"codec {cad} revision: 0x{revision:08X}")
    return 0


def cmd_enumerate(args: argparse.Namespace) -> int:
    controller, _, binding = _machine_binding(args)
    statests = controller.mmio_read(REG_STATESTS, 2)
    for cad in range(16):
        if not statests & (1 << cad):
            continue
        topology = driver.discover_topology(binding, cad)
        print(f"cad {cad}")
        for node in topology.nodes:
            print(f"  0x{node.nid:02X} {node.kind} caps=0x{node.caps:08X}")
    return 0


def cmd_verb(args: argparse.Namespace) -> int:
    _, _, binding = _machine_binding(args)
    catalog = default_catalog()
    if args.verb <= 0xF and args.verb in catalog.long_ids:
        verb = VerbId.long4(args.verb)
    else:
        verb = VerbId.short12(args.verb)
    cmd = VerbCommand(args.cad, args.nid, verb, args.payload)
    response = driver.send_verb(binding, cmd)
    print(f"0x{response:08X}")
    return 0


def _write_outputs(
    pcm: PcmBuffer, out: str, plot: str | None, title: str
) -> None:
    size = save_wav(pcm, out)
    print(f"wrote {out} ({size} bytes, {pcm.duration_ms:g} ms)")
    if plot:
        from . import plotting

        plotting.save_waveform(pcm, plot, title=title)
        print(f"wrote {plot}")


def cmd_beep(args: argparse.Namespace) -> int:
    controller, codec, binding = _machine_binding(args)
    topology = driver.discover_topology(binding, DEFAULT_CODEC_ADDRESS)
    beep_nid = driver.find_beep_generator(topology)

    def set_divider(divider: int) -> None:
        cmd = VerbCommand(
            DEFAULT_CODEC_ADDRESS, beep_nid, VerbId.short12(verbs.SET_BEEP_CONTROL), divider
        )
        driver.send_verb(binding, cmd)

    set_divider(args.divider)
    controller.advance_clock(args.ms)
    set_divider(0)
    pcm = timeline_to_pcm(codec.beep_timeline(beep_nid), controller.clock_ms)
    _write_outputs(pcm, args.out, args.plot, f"divider {args.divider}")
    return 0


def cmd_demo(args: argparse.Namespace) -> int:
    try:
        script_text = Path(args.script).read_text(encoding="utf-8")
    except OSError as exc:
        raise BeepReaderError(f"cannot read script: {exc}") from None
    keys = parse_key_script(script_text)
    form = None
    if args.form is not None:
        try:
            form = load_form(Path(args.form).read_text(encoding="utf-8"))
        except OSError as exc:
            raise BeepReaderError(f"cannot read form: {exc}") from None
    session = Session(profile=_load_profile(args), form=form)
    session.run_script(keys)
    wav = session.render_session_wav()
    Path(args.out).write_bytes(wav)
    transcript_path = Path(args.transcript) if args.transcript else Path(args.out).with_suffix(".txt")
    transcript = session.transcript_text()
    transcript_path.write_text(transcript, encoding="utf-8")
    sys.stdout.write(transcript)
    print(f"wrote {args.out} ({len(wav)} bytes)")
    print(f"wrote {transcript_path}")
    if args.plot:
        from . import plotting

        pcm = timeline_to_pcm(
            session.codec.beep_timeline(session.beep_nid), session.controller.clock_ms
        )
        plotting.save_waveform(pcm, args.plot, title=session.form.title)
        print(f"wrote {args.plot}")
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    form = None
    if args.form is not None:
        try:
            form = load_form(Path(args.form).read_text(encoding="utf-8"))
        except OSError as exc:
            raise BeepReaderError(f"cannot read form: {exc}") from None
    session = Session(profile=_load_profile(args), form=form or default_form())
    server = AccessService(session, (args.host, args.port), ui_dir=args.ui)
    print(f"serving on http://{args.host}:{server.port}", flush=True)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.shutdown()
        server.server_close()
    return 0


def cmd_decode_trace(args: argparse.Namespace) -> int:
    try:
        text = Path(args.file).read_text(encoding="utf-8")
    except OSError as exc:
        raise BeepReaderError(f"cannot read trace: {exc}") from None
    catalog = default_catalog()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            word = int(line, 16)
        except ValueError:
            raise BeepReaderError(f"line {lineno}: {line!r} is not a hex word") from None
        if not 0 <= word <= 0xFFFFFFFF:
            raise BeepReaderError(f"line {lineno}: 0x{word:X} is not 32-bit")
        print(verbs.format_decoded(verbs.decode_command(word, catalog), catalog))
    return 0


_COMMANDS = {
    "info": cmd_info,
    "enumerate": cmd_enumerate,
    "verb": cmd_verb,
    "beep": cmd_beep,
    "demo": cmd_demo,
    "serve": cmd_serve,
    "decode-trace": cmd_decode_trace,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except BeepReaderError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
