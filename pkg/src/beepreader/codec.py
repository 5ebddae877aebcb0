"""Simulated HDA codec: widget nodes answering verbs, loadable from a profile.

Node parameters answered via GetParameter (payload = parameter id):

    0x00  vendor id word (root only)
    0x02  revision word (root only, stored opaquely)
    0x04  subordinate nodes: (first nid << 16) | count
    0x05  function group type (0x01 = audio)
    0x09  widget capabilities; bits 23:20 carry the widget type

Unknown verbs, parameters, and node ids all answer 0x00000000, which keeps
the transport total the way real codecs do.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from typing import Mapping

from .errors import BeepReaderError
from . import verbs
from .verbs import VerbCommand, VerbForm

PARAM_VENDOR_ID = 0x00
PARAM_REVISION_ID = 0x02
PARAM_SUBORDINATE_COUNT = 0x04
PARAM_GROUP_TYPE = 0x05
PARAM_WIDGET_CAPS = 0x09

WIDGET_TYPE_SHIFT = 20  # widget type sits in capability bits 23:20

ROOT = "root"
FUNCTION_GROUP = "function-group"
AUDIO_OUTPUT = "audio-output"
PIN = "pin"
BEEP_GENERATOR = "beep-generator"

WIDGET_TYPE_CODES = {
    AUDIO_OUTPUT: 0x0,
    PIN: 0x4,
    BEEP_GENERATOR: 0x7,
}
KNOWN_KINDS = {ROOT, FUNCTION_GROUP} | set(WIDGET_TYPE_CODES)

FUNCTION_GROUP_TYPE_AUDIO = 0x01

# Amplifier verb payload layout (set): bits 13/12 select left/right,
# bit 7 mute, bits 6:0 gain. Get selects the channel with bit 13.
_AMP_SET_LEFT = 0x2000
_AMP_SET_RIGHT = 0x1000
_AMP_MUTE = 0x80
_AMP_GAIN_MASK = 0x7F


class ProfileError(BeepReaderError):
    """A profile document is malformed; the message names the offending key."""


@dataclass
class WidgetSpec:
    nid: int
    kind: str
    params: dict[int, int] = field(default_factory=dict)
    subordinates: tuple[int, int] | None = None  # (first nid, count)


@dataclass
class CodecProfile:
    name: str
    vendor_response: int
    revision_response: int
    nodes: list[WidgetSpec]

    def validate(self) -> None:
        seen: set[int] = set()
        for spec in self.nodes:
            if spec.nid in seen:
                raise ProfileError(f"nodes: duplicate nid 0x{spec.nid:02X}")
            seen.add(spec.nid)
            if spec.kind not in KNOWN_KINDS:
                raise ProfileError(
                    f"nodes[0x{spec.nid:02X}].kind: unknown kind {spec.kind!r}"
                )
        if not any(spec.nid == 0 and spec.kind == ROOT for spec in self.nodes):
            raise ProfileError("nodes: a root node with nid 0x00 is required")
        for spec in self.nodes:
            if spec.subordinates is None:
                continue
            start, count = spec.subordinates
            for nid in range(start, start + count):
                if nid not in seen:
                    raise ProfileError(
                        f"nodes[0x{spec.nid:02X}].subordinates: covers "
                        f"undeclared nid 0x{nid:02X}"
                    )


@dataclass
class BeepTimeline:
    """Divider changes over virtual time; timestamps strictly increase.

    A write at the same instant as the last entry replaces it (no audible
    time passed, last writer wins).
    """

    entries: list[tuple[float, int]] = field(default_factory=list)

    def record(self, t_ms: float, divider: int) -> None:
        if self.entries:
            last_t, _ = self.entries[-1]
            if t_ms < last_t:
                raise ValueError(f"timeline time went backwards: {t_ms} < {last_t}")
            if t_ms == last_t:
                self.entries[-1] = (t_ms, divider)
                return
        self.entries.append((t_ms, divider))

    def __len__(self) -> int:
        return len(self.entries)


@dataclass
class WidgetNode:
    nid: int
    kind: str
    params: dict[int, int]
    amp: dict[str, tuple[bool, int]]
    beep_divider: int = 0
    timeline: BeepTimeline | None = None


class CodecModel:
    """Widget-node table answering verbs; owned by the controller."""

    def __init__(self, profile: CodecProfile | None = None) -> None:
        self.profile = profile or default_profile()
        self.profile.validate()
        self.nodes: dict[int, WidgetNode] = {}
        self.reset()

    def reset(self) -> None:
        """Rebuild every node's dynamic state from the profile."""
        self.nodes = {}
        for spec in self.profile.nodes:
            params: dict[int, int] = {}
            if spec.kind == ROOT:
                params[PARAM_VENDOR_ID] = self.profile.vendor_response
                params[PARAM_REVISION_ID] = self.profile.revision_response
            if spec.subordinates is not None:
                start, count = spec.subordinates
                params[PARAM_SUBORDINATE_COUNT] = (start << 16) | count
            if spec.kind == FUNCTION_GROUP:
                params[PARAM_GROUP_TYPE] = FUNCTION_GROUP_TYPE_AUDIO
            if spec.kind in WIDGET_TYPE_CODES:
                params[PARAM_WIDGET_CAPS] = WIDGET_TYPE_CODES[spec.kind] << WIDGET_TYPE_SHIFT
            params.update(spec.params)  # explicit profile values win
            self.nodes[spec.nid] = WidgetNode(
                nid=spec.nid,
                kind=spec.kind,
                params=params,
                amp={"left": (False, 0), "right": (False, 0)},
                timeline=BeepTimeline() if spec.kind == BEEP_GENERATOR else None,
            )

    def execute_verb(self, cmd: VerbCommand, at_ms: float = 0.0) -> int:
        """Answer one verb; always returns a 32-bit word."""
        node = self.nodes.get(cmd.nid)
        if node is None:
            return 0x00000000
        form, vid = cmd.verb.form, cmd.verb.id
        if form is VerbForm.SHORT12:
            if vid == verbs.GET_PARAMETER:
                return node.params.get(cmd.payload, 0) & 0xFFFFFFFF
            if vid == verbs.SET_BEEP_CONTROL:
                if node.kind != BEEP_GENERATOR:
                    return 0x00000000
                node.beep_divider = cmd.payload & 0xFF
                node.timeline.record(at_ms, node.beep_divider)
                return 0x00000000
            if vid == verbs.GET_BEEP_CONTROL:
                return node.beep_divider if node.kind == BEEP_GENERATOR else 0
        else:
            if vid == verbs.SET_AMP_GAIN_MUTE:
                return self._amp_set(node, cmd.payload)
            if vid == verbs.GET_AMP_GAIN_MUTE:
                return self._amp_get(node, cmd.payload)
        return 0x00000000

    @staticmethod
    def _amp_set(node: WidgetNode, payload: int) -> int:
        setting = (bool(payload & _AMP_MUTE), payload & _AMP_GAIN_MASK)
        if payload & _AMP_SET_LEFT:
            node.amp["left"] = setting
        if payload & _AMP_SET_RIGHT:
            node.amp["right"] = setting
        return 0x00000000

    @staticmethod
    def _amp_get(node: WidgetNode, payload: int) -> int:
        channel = "left" if payload & _AMP_SET_LEFT else "right"
        mute, gain = node.amp[channel]
        return (int(mute) << 7) | gain

    def get_parameter(self, nid: int, param: int) -> int:
        cmd = VerbCommand(0, nid, verbs.VerbId.short12(verbs.GET_PARAMETER), param)
        return self.execute_verb(cmd)

    def beep_timeline(self, nid: int) -> BeepTimeline:
        node = self.nodes.get(nid)
        if node is None or node.kind != BEEP_GENERATOR:
            raise ValueError(f"node 0x{nid:02X} is not a beep generator")
        return node.timeline


# -- profile documents ------------------------------------------------------


def _parse_word(value: object, where: str, limit: int = 0xFFFFFFFF) -> int:
    if isinstance(value, bool) or not isinstance(value, (int, str)):
        raise ProfileError(f"{where}: expected an integer or hex string")
    try:
        number = value if isinstance(value, int) else int(value, 0)
    except ValueError:
        raise ProfileError(f"{where}: {value!r} is not a number") from None
    if not 0 <= number <= limit:
        raise ProfileError(f"{where}: 0x{number:X} out of range")
    return number


def profile_from_dict(doc: Mapping, name: str | None = None) -> CodecProfile:
    identity = doc.get("identity")
    if not isinstance(identity, Mapping):
        raise ProfileError("identity: section missing or not a mapping")
    vendor = _parse_word(identity.get("vendor_response"), "identity.vendor_response")
    revision = _parse_word(identity.get("revision_response"), "identity.revision_response")
    raw_nodes = doc.get("nodes")
    if not isinstance(raw_nodes, list) or not raw_nodes:
        raise ProfileError("nodes: section missing or empty")
    nodes = []
    for i, raw in enumerate(raw_nodes):
        where = f"nodes[{i}]"
        if not isinstance(raw, Mapping):
            raise ProfileError(f"{where}: expected a mapping")
        nid = _parse_word(raw.get("nid"), f"{where}.nid", limit=0xFF)
        kind = raw.get("kind")
        if kind not in KNOWN_KINDS:
            raise ProfileError(f"{where}.kind: unknown kind {kind!r}")
        params = {}
        for key, value in (raw.get("params") or {}).items():
            pid = _parse_word(key, f"{where}.params key", limit=0xFF)
            params[pid] = _parse_word(value, f"{where}.params[{key}]")
        subordinates = None
        if "subordinates" in raw:
            sub = raw["subordinates"]
            if not isinstance(sub, Mapping):
                raise ProfileError(f"{where}.subordinates: expected a mapping")
            start = _parse_word(sub.get("start"), f"{where}.subordinates.start", 0xFF)
            count = _parse_word(sub.get("count"), f"{where}.subordinates.count", 0xFF)
            subordinates = (start, count)
        nodes.append(WidgetSpec(nid, kind, params, subordinates))
    profile = CodecProfile(
        name=name or str(doc.get("name", "unnamed")),
        vendor_response=vendor,
        revision_response=revision,
        nodes=nodes,
    )
    profile.validate()
    return profile


def load_profile(text: str) -> CodecProfile:
    """Parse the codec sections of a profile document (JSON)."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProfileError(f"profile is not valid JSON: {exc}") from None
    if not isinstance(doc, Mapping):
        raise ProfileError("profile document must be a JSON object")
    return profile_from_dict(doc)


def default_profile() -> CodecProfile:
    """The shipped cx-default profile."""
    text = resources.files(__package__).joinpath("profiles/cx-default.json").read_text(
        encoding="utf-8"
    )
    return load_profile(text)
