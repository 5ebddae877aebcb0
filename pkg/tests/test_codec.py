"""Codec model: profiles, verb dispatch, parameters, beep timeline, amp state."""

import json

import pytest
from hypothesis import given, strategies as st

from beepreader.codec import (
    BEEP_GENERATOR,
    BeepTimeline,
    CodecModel,
    CodecProfile,
    ProfileError,
    WidgetSpec,
    default_profile,
    load_profile,
)
from beepreader.verbs import (
    GET_AMP_GAIN_MUTE,
    GET_BEEP_CONTROL,
    SET_AMP_GAIN_MUTE,
    SET_BEEP_CONTROL,
    VerbCommand,
    VerbId,
    decode_command,
    default_catalog,
)


def beep_cmd(divider, nid=0x12):
    return VerbCommand(0, nid, VerbId.short12(SET_BEEP_CONTROL), divider)


class TestProfile:
    def test_default_identity(self):
        profile = default_profile()
        assert profile.vendor_response == 0x14F1510F
        assert profile.revision_response == 0x00100100

    def test_default_has_beep_at_0x12(self):
        profile = default_profile()
        kinds = {spec.nid: spec.kind for spec in profile.nodes}
        assert kinds[0x12] == BEEP_GENERATOR

    def test_duplicate_nid_is_a_parse_error(self):
        doc = {
            "identity": {"vendor_response": 1, "revision_response": 2},
            "nodes": [
                {"nid": 0, "kind": "root"},
                {"nid": "0x12", "kind": "beep-generator"},
                {"nid": "0x12", "kind": "pin"},
            ],
        }
        with pytest.raises(ProfileError, match="0x12"):
            load_profile(json.dumps(doc))

    def test_malformed_field_names_the_key(self):
        doc = {
            "identity": {"vendor_response": "zzz", "revision_response": 2},
            "nodes": [{"nid": 0, "kind": "root"}],
        }
        with pytest.raises(ProfileError, match="identity.vendor_response"):
            load_profile(json.dumps(doc))

    def test_unknown_kind_rejected(self):
        doc = {
            "identity": {"vendor_response": 1, "revision_response": 2},
            "nodes": [{"nid": 0, "kind": "root"}, {"nid": 1, "kind": "subwoofer"}],
        }
        with pytest.raises(ProfileError, match="kind"):
            load_profile(json.dumps(doc))

    def test_subordinates_must_cover_declared_nodes(self):
        doc = {
            "identity": {"vendor_response": 1, "revision_response": 2},
            "nodes": [
                {"nid": 0, "kind": "root", "subordinates": {"start": 1, "count": 2}},
                {"nid": 1, "kind": "function-group"},
            ],
        }
        with pytest.raises(ProfileError, match="undeclared nid 0x02"):
            load_profile(json.dumps(doc))

    def test_root_required(self):
        doc = {
            "identity": {"vendor_response": 1, "revision_response": 2},
            "nodes": [{"nid": 1, "kind": "pin"}],
        }
        with pytest.raises(ProfileError, match="root"):
            load_profile(json.dumps(doc))

    def test_not_json(self):
        with pytest.raises(ProfileError, match="JSON"):
            load_profile("{nope")


class TestExecuteVerb:
    def test_vendor_id(self):
        codec = CodecModel()
        cmd = VerbCommand(0, 0, VerbId.short12(0xF00), 0x00)
        assert codec.execute_verb(cmd) == 0x14F1510F

    def test_root_subordinates_word(self):
        codec = CodecModel()
        cmd = VerbCommand(0, 0, VerbId.short12(0xF00), 0x04)
        assert codec.execute_verb(cmd) == 0x00010001  # start 1, count 1

    def test_beep_off(self):
        codec = CodecModel()
        assert codec.execute_verb(beep_cmd(0x00)) == 0x00000000
        assert codec.nodes[0x12].beep_divider == 0

    def test_unknown_nid_answers_zero(self):
        codec = CodecModel()
        assert codec.execute_verb(VerbCommand(0, 0x42, VerbId.short12(0xF00), 0)) == 0

    def test_unknown_verb_answers_zero(self):
        codec = CodecModel()
        assert codec.execute_verb(VerbCommand(0, 0, VerbId.short12(0x7FF), 0)) == 0

    def test_beep_verb_on_non_beep_node_is_ignored(self):
        codec = CodecModel()
        assert codec.execute_verb(beep_cmd(100, nid=0x10)) == 0
        assert codec.nodes[0x10].beep_divider == 0


class TestGetParameter:
    def test_revision(self):
        assert CodecModel().get_parameter(0, 0x02) == 0x00100100

    def test_function_group_type_is_audio(self):
        assert CodecModel().get_parameter(1, 0x05) == 0x00000001

    def test_beep_widget_type_field(self):
        caps = CodecModel().get_parameter(0x12, 0x09)
        assert (caps >> 20) & 0xF == 0x7

    def test_pin_widget_type_field(self):
        caps = CodecModel().get_parameter(0x19, 0x09)
        assert (caps >> 20) & 0xF == 0x4


class TestBeepTimeline:
    def test_no_beeps_no_entries(self):
        assert CodecModel().beep_timeline(0x12).entries == []

    def test_records_clocked_events(self):
        codec = CodecModel()
        codec.execute_verb(beep_cmd(100), at_ms=0)
        codec.execute_verb(beep_cmd(0), at_ms=500)
        assert codec.beep_timeline(0x12).entries == [(0, 100), (500, 0)]

    def test_non_beep_node_errors(self):
        with pytest.raises(ValueError):
            CodecModel().beep_timeline(0x10)

    def test_same_instant_write_replaces(self):
        timeline = BeepTimeline()
        timeline.record(10, 5)
        timeline.record(10, 9)
        assert timeline.entries == [(10, 9)]

    def test_backwards_time_rejected(self):
        timeline = BeepTimeline()
        timeline.record(10, 5)
        with pytest.raises(ValueError):
            timeline.record(9, 1)


class TestAmp:
    def test_set_then_get_left(self):
        codec = CodecModel()
        set_cmd = VerbCommand(0, 0x10, VerbId.long4(SET_AMP_GAIN_MUTE), 0xB03F)
        assert codec.execute_verb(set_cmd) == 0
        get_left = VerbCommand(0, 0x10, VerbId.long4(GET_AMP_GAIN_MUTE), 0x2000)
        assert codec.execute_verb(get_left) == 0x3F

    def test_mute_bit_round_trips(self):
        codec = CodecModel()
        payload = 0x3000 | 0x80 | 0x10  # both channels, muted, gain 0x10
        codec.execute_verb(VerbCommand(0, 0x10, VerbId.long4(SET_AMP_GAIN_MUTE), payload))
        right = codec.execute_verb(
            VerbCommand(0, 0x10, VerbId.long4(GET_AMP_GAIN_MUTE), 0x0000)
        )
        assert right == 0x90

    def test_channel_select_is_independent(self):
        codec = CodecModel()
        codec.execute_verb(VerbCommand(0, 0x10, VerbId.long4(SET_AMP_GAIN_MUTE), 0x2000 | 10))
        codec.execute_verb(VerbCommand(0, 0x10, VerbId.long4(SET_AMP_GAIN_MUTE), 0x1000 | 20))
        left = codec.execute_verb(VerbCommand(0, 0x10, VerbId.long4(GET_AMP_GAIN_MUTE), 0x2000))
        right = codec.execute_verb(VerbCommand(0, 0x10, VerbId.long4(GET_AMP_GAIN_MUTE), 0x0000))
        assert (left, right) == (10, 20)


class TestProperties:
    @given(st.integers(0, 0xFFFFFFFF))
    def test_response_totality(self, word):
        codec = CodecModel()
        cmd = decode_command(word, default_catalog())
        response = codec.execute_verb(cmd)
        assert 0 <= response <= 0xFFFFFFFF

    @given(st.integers(0, 255))
    def test_beep_set_get_coherence(self, divider):
        codec = CodecModel()
        codec.execute_verb(beep_cmd(divider), at_ms=1)
        get = VerbCommand(0, 0x12, VerbId.short12(GET_BEEP_CONTROL), 0)
        assert codec.execute_verb(get) == divider

    @given(st.integers(0, 0xFFFF))
    def test_amp_set_get_coherence(self, payload):
        codec = CodecModel()
        codec.execute_verb(VerbCommand(0, 0x10, VerbId.long4(SET_AMP_GAIN_MUTE), payload))
        expected = payload & 0xFF
        if payload & 0x2000:
            got = codec.execute_verb(
                VerbCommand(0, 0x10, VerbId.long4(GET_AMP_GAIN_MUTE), 0x2000)
            )
            assert got == expected
        if payload & 0x1000:
            got = codec.execute_verb(
                VerbCommand(0, 0x10, VerbId.long4(GET_AMP_GAIN_MUTE), 0x0000)
            )
            assert got == expected

    @given(st.lists(st.tuples(st.integers(1, 10_000), st.integers(0, 255)), max_size=20))
    def test_timeline_monotonic_under_increasing_clock(self, deltas):
        codec = CodecModel()
        t = 0.0
        for delta, divider in deltas:
            t += delta
            codec.execute_verb(beep_cmd(divider), at_ms=t)
        entries = codec.beep_timeline(0x12).entries
        assert all(a[0] < b[0] for a, b in zip(entries, entries[1:]))

    def test_profile_fidelity_for_declared_params(self):
        profile = CodecProfile(
            name="fidelity",
            vendor_response=0x11112222,
            revision_response=0x33334444,
            nodes=[
                WidgetSpec(0, "root", params={0x04: 0xABCD0001}, subordinates=(1, 1)),
                WidgetSpec(1, "function-group", params={0x05: 0x00000081}),
                WidgetSpec(2, "beep-generator", params={0x09: 0x00700123}),
            ],
        )
        # nid 2 is not inside a declared subordinate range on purpose: range
        # checks constrain grouping nodes, not widget declarations
        profile.nodes[1].subordinates = (2, 1)
        codec = CodecModel(profile)
        for spec in profile.nodes:
            for param, expected in spec.params.items():
                assert codec.get_parameter(spec.nid, param) == expected
        assert codec.get_parameter(0, 0x00) == 0x11112222
        assert codec.get_parameter(0, 0x02) == 0x33334444


class TestReset:
    def test_reset_restores_profile_state(self):
        codec = CodecModel()
        codec.execute_verb(beep_cmd(77), at_ms=3)
        codec.execute_verb(VerbCommand(0, 0x10, VerbId.long4(SET_AMP_GAIN_MUTE), 0x303F))
        codec.reset()
        assert codec.beep_timeline(0x12).entries == []
        assert codec.nodes[0x12].beep_divider == 0
        assert codec.nodes[0x10].amp["left"] == (False, 0)
