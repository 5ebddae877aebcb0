"""Machine profile documents and machine assembly."""

import json

import pytest

from beepreader.codec import ProfileError
from beepreader.controller import PciAddress, REG_STATESTS
from beepreader.machine import (
    build_machine,
    default_profile_text,
    load_machine_profile,
    parse_machine_profile,
)


def doc_with(controller=None):
    doc = json.loads(default_profile_text())
    if controller is not None:
        doc["controller"] = controller
    return json.dumps(doc)


class TestParse:
    def test_packaged_default(self):
        profile = parse_machine_profile(default_profile_text())
        assert profile.name == "cx-default"
        assert profile.controller.address == PciAddress(0, 27, 0)
        assert profile.controller.bar_base == 0xFEB00000
        assert profile.controller.latency_steps == 1
        assert profile.codec.vendor_response == 0x14F1510F

    def test_controller_section_is_optional(self):
        doc = json.loads(default_profile_text())
        del doc["controller"]
        profile = parse_machine_profile(json.dumps(doc))
        assert profile.controller.address == PciAddress(0, 27, 0)

    def test_bad_pci_address(self):
        with pytest.raises(ProfileError, match="controller.pci"):
            parse_machine_profile(doc_with({"pci": "nope"}))

    def test_bad_latency(self):
        with pytest.raises(ProfileError, match="latency"):
            parse_machine_profile(doc_with({"latency_steps": 0}))

    def test_misaligned_bar(self):
        with pytest.raises(ProfileError, match="bar_base"):
            parse_machine_profile(doc_with({"bar_base": "0xFEB00004"}))

    def test_file_loading(self, tmp_path):
        path = tmp_path / "p.json"
        path.write_text(default_profile_text())
        assert load_machine_profile(path).name == "cx-default"


class TestBuild:
    def test_presence_bit_after_build(self):
        _, controller, _ = build_machine()
        assert controller.mmio_read(REG_STATESTS, 2) == 0x0001

    def test_custom_latency_flows_through(self):
        profile = load_machine_profile(None)
        profile.controller.latency_steps = 4
        _, controller, _ = build_machine(profile)
        assert controller.latency_steps == 4
