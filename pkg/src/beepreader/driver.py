"""Driver-side client: find the controller, resolve its BAR, send verbs.

The send path mirrors the firmware prototype this simulates: everything
goes through 32-bit register reads/writes at offsets relative to the BAR,
and commands travel over the immediate-command registers only. Polling is
cooperative: the caller supplies a stepper that advances the simulated
controller once per poll, so tests control interleaving deterministically.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Iterator

from . import codec as codec_mod
from .controller import (
    HDA_CLASS_BASE,
    HDA_CLASS_SUB,
    ICIS_ICB,
    ICIS_IRV,
    REG_ICII,
    REG_ICIS,
    REG_ICOI,
    ControllerModel,
    PciAddress,
    PciBus,
    PciConfigSpace,
)
from .errors import BeepReaderError
from .verbs import GET_PARAMETER, VerbCommand, VerbId, encode_command

BAR_ADDRESS_MASK = 0xFFFFFFF0
DEFAULT_HDA_ADDRESS = PciAddress(0, 27, 0)
DEFAULT_MAX_POLLS = 1000

_Scanner = Iterable[tuple[PciAddress, PciConfigSpace]]


class ControllerNotFoundError(BeepReaderError):
    pass


class BarUnassignedError(BeepReaderError):
    pass


class NoBeepGeneratorError(BeepReaderError):
    pass


class VerbTimeoutError(BeepReaderError):
    """The controller never reached the polled-for state.

    phase is "busy" (ICB never cleared before staging) or "response"
    (IRV never set after arming).
    """

    def __init__(self, phase: str, max_polls: int) -> None:
        super().__init__(f"{phase}-timeout after {max_polls} polls")
        self.phase = phase


@dataclass(frozen=True)
class ControllerBinding:
    address: PciAddress
    bar_base: int
    controller: ControllerModel

    def __post_init__(self) -> None:
        if self.bar_base & 0xF:
            raise ValueError(f"bar_base 0x{self.bar_base:08X} has flag bits set")


@dataclass(frozen=True)
class TopologyNode:
    nid: int
    kind: str
    caps: int  # the raw word the kind was derived from (0 for the root)


@dataclass
class CodecTopology:
    cad: int
    nodes: list[TopologyNode]


def locate_controller(scanner: _Scanner | PciBus) -> PciAddress:
    """First function with the audio class code, else probe 0:27:0."""
    pairs: Iterator[tuple[PciAddress, PciConfigSpace]]
    pairs = scanner.scan() if hasattr(scanner, "scan") else iter(scanner)
    fallback = None
    for addr, config in pairs:
        if (
            config.read(0x0B, 1) == HDA_CLASS_BASE
            and config.read(0x0A, 1) == HDA_CLASS_SUB
        ):
            return addr
        if addr == DEFAULT_HDA_ADDRESS:
            fallback = addr
    if fallback is not None:
        return fallback
    raise ControllerNotFoundError("controller not found")


def resolve_bar(config: PciConfigSpace) -> int:
    """Strip the flag bits from HDBARL, leaving the MMIO base address."""
    hdbarl = config.read(0x10, 4)
    if hdbarl == 0:
        raise BarUnassignedError("BAR unassigned (HDBARL is zero)")
    return hdbarl & BAR_ADDRESS_MASK


def attach(bus: PciBus) -> ControllerBinding:
    """Locate, resolve, and bind the machine's HDA controller."""
    addr = locate_controller(bus)
    device = bus.device_at(addr)
    base = resolve_bar(device.pci_config)
    return ControllerBinding(addr, base, device)


def write_controller_register32(binding: ControllerBinding, offset: int, value: int) -> None:
    binding.controller.mmio_write(offset, 4, value)


def read_controller_register32(binding: ControllerBinding, offset: int) -> int:
    return binding.controller.mmio_read(offset, 4)


def send_verb(
    binding: ControllerBinding,
    cmd: VerbCommand,
    max_polls: int = DEFAULT_MAX_POLLS,
    stepper: Callable[[], object] | None = None,
) -> int:
    """Run one verb over the immediate-command interface; returns ICII.

    Protocol: wait for ICB clear, stage the word in ICOI, arm via ICIS
    (the arming write also clears any stale result flag), poll until IRV,
    read ICII, clear IRV. Each poll phase allows up to max_polls steps,
    so with the default one-step stepper a command of latency L completes
    iff L <= max_polls.
    """
    if max_polls < 1:
        raise ValueError("max_polls must be >= 1")
    step = stepper or (lambda: binding.controller.step(1))

    status = read_controller_register32(binding, REG_ICIS)
    polls = 0
    while status & ICIS_ICB:
        if polls >= max_polls:
            raise VerbTimeoutError("busy", max_polls)
        step()
        polls += 1
        status = read_controller_register32(binding, REG_ICIS)

    write_controller_register32(binding, REG_ICOI, encode_command(cmd))
    write_controller_register32(binding, REG_ICIS, ICIS_ICB | ICIS_IRV)

    for _ in range(max_polls):
        step()
        status = read_controller_register32(binding, REG_ICIS)
        if status & ICIS_IRV:
            break
    else:
        raise VerbTimeoutError("response", max_polls)

    response = read_controller_register32(binding, REG_ICII)
    write_controller_register32(binding, REG_ICIS, ICIS_IRV)
    return response


def get_parameter(
    binding: ControllerBinding,
    cad: int,
    nid: int,
    param: int,
    max_polls: int = DEFAULT_MAX_POLLS,
) -> int:
    cmd = VerbCommand(cad, nid, VerbId.short12(GET_PARAMETER), param)
    return send_verb(binding, cmd, max_polls=max_polls)


_WIDGET_KIND_BY_TYPE = {code: kind for kind, code in codec_mod.WIDGET_TYPE_CODES.items()}


def discover_topology(
    binding: ControllerBinding, cad: int, max_polls: int = DEFAULT_MAX_POLLS
) -> CodecTopology:
    """Walk root -> function groups -> widgets via GetParameter."""

    def param(nid: int, pid: int) -> int:
        return get_parameter(binding, cad, nid, pid, max_polls=max_polls)

    nodes = [TopologyNode(0, codec_mod.ROOT, 0)]
    visited = {0}
    root_sub = param(0, codec_mod.PARAM_SUBORDINATE_COUNT)
    group_start, group_count = (root_sub >> 16) & 0xFF, root_sub & 0xFF
    for group in range(group_start, group_start + group_count):
        if group in visited:
            continue
        visited.add(group)
        group_type = param(group, codec_mod.PARAM_GROUP_TYPE)
        nodes.append(TopologyNode(group, codec_mod.FUNCTION_GROUP, group_type))
        widget_sub = param(group, codec_mod.PARAM_SUBORDINATE_COUNT)
        start, count = (widget_sub >> 16) & 0xFF, widget_sub & 0xFF
        for nid in range(start, start + count):
            if nid in visited:
                continue
            visited.add(nid)
            caps = param(nid, codec_mod.PARAM_WIDGET_CAPS)
            type_code = (caps >> codec_mod.WIDGET_TYPE_SHIFT) & 0xF
            kind = _WIDGET_KIND_BY_TYPE.get(type_code, f"widget-0x{type_code:X}")
            nodes.append(TopologyNode(nid, kind, caps))
    return CodecTopology(cad, nodes)


def find_beep_generator(topology: CodecTopology) -> int:
    """First beep generator in discovery order."""
    for node in topology.nodes:
        if node.kind == codec_mod.BEEP_GENERATOR:
            return node.nid
    raise NoBeepGeneratorError("no beep generator in topology")
