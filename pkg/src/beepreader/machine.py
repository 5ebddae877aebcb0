"""Machine profiles: one JSON document describing controller and codec.

Document layout (all numbers accept ints or "0x" strings):

    {
      "name": "cx-default",
      "controller": {"pci": "0:27:0", "vendor_id": ..., "device_id": ...,
                     "bar_base": ..., "latency_steps": 1},
      "identity": {"vendor_response": ..., "revision_response": ...},
      "nodes": [{"nid": ..., "kind": ..., "params": {hex: hex},
                 "subordinates": {"start": ..., "count": ...}}, ...]
    }
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Mapping

from . import codec as codec_mod
from .codec import CodecModel, CodecProfile, ProfileError, _parse_word
from .controller import (
    GCTL_CRST,
    REG_GCTL,
    ControllerConfig,
    ControllerModel,
    PciAddress,
    PciBus,
)

DEFAULT_CODEC_ADDRESS = 0


@dataclass
class MachineProfile:
    name: str
    controller: ControllerConfig
    codec: CodecProfile


def _controller_config(doc: Mapping) -> ControllerConfig:
    section = doc.get("controller") or {}
    if not isinstance(section, Mapping):
        raise ProfileError("controller: expected a mapping")
    defaults = ControllerConfig()
    try:
        address = PciAddress.parse(str(section.get("pci", str(defaults.address))))
    except ValueError as exc:
        raise ProfileError(f"controller.pci: {exc}") from None
    config = dict(
        address=address,
        vendor_id=_parse_word(
            section.get("vendor_id", defaults.vendor_id), "controller.vendor_id", 0xFFFF
        ),
        device_id=_parse_word(
            section.get("device_id", defaults.device_id), "controller.device_id", 0xFFFF
        ),
        bar_base=_parse_word(
            section.get("bar_base", defaults.bar_base), "controller.bar_base"
        ),
        latency_steps=_parse_word(
            section.get("latency_steps", defaults.latency_steps),
            "controller.latency_steps",
            0xFFFF,
        ),
    )
    try:
        return ControllerConfig(**config)
    except ValueError as exc:
        raise ProfileError(f"controller: {exc}") from None


def parse_machine_profile(text: str) -> MachineProfile:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProfileError(f"profile is not valid JSON: {exc}") from None
    if not isinstance(doc, Mapping):
        raise ProfileError("profile document must be a JSON object")
    name = str(doc.get("name", "unnamed"))
    return MachineProfile(
        name=name,
        controller=_controller_config(doc),
        codec=codec_mod.profile_from_dict(doc, name=name),
    )


def default_profile_text() -> str:
    return resources.files(__package__).joinpath("profiles/cx-default.json").read_text(
        encoding="utf-8"
    )


def load_machine_profile(path: str | Path | None = None) -> MachineProfile:
    """Load a profile file; None loads the packaged cx-default."""
    text = default_profile_text() if path is None else Path(path).read_text(encoding="utf-8")
    return parse_machine_profile(text)


def build_machine(
    profile: MachineProfile | None = None,
) -> tuple[PciBus, ControllerModel, CodecModel]:
    """Assemble bus + controller + codec and release controller reset."""
    profile = profile or load_machine_profile(None)
    controller = ControllerModel(profile.controller)
    codec = CodecModel(profile.codec)
    controller.attach_codec(DEFAULT_CODEC_ADDRESS, codec)
    bus = PciBus()
    bus.add(controller)
    controller.mmio_write(REG_GCTL, 4, GCTL_CRST)
    return bus, controller, codec
