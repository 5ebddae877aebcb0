"""Audio rendering: square-wave synthesis, WAV bytes, frequency measurement.

The WAV checks parse the produced bytes with the stdlib wave module so the
byte layout is validated by an independent reader, and the zero-crossing
counts below are recomputed with a plain loop, independent of
measure_frequency.
"""

import io
import wave

import pytest
from hypothesis import given, settings, strategies as st

from beepreader.audio import (
    BEEP_BASE_HZ,
    SAMPLE_RATE,
    PcmBuffer,
    RenderConfig,
    frequency_for_divider,
    measure_frequency,
    timeline_to_pcm,
    write_wav,
)


def crossings_by_loop(samples):
    count = 0
    for a, b in zip(samples, samples[1:]):
        if (a > 0 and b < 0) or (a < 0 and b > 0):
            count += 1
    return count


class TestTimelineToPcm:
    def test_silence(self):
        pcm = timeline_to_pcm([(0, 0)], 1000)
        assert len(pcm) == 48000
        assert set(pcm.samples) == {0}

    def test_120hz_square_wave_crossing_count(self):
        pcm = timeline_to_pcm([(0, 100), (1000, 0)], 1000)
        assert abs(crossings_by_loop(pcm.samples) - 240) <= 2

    def test_12khz_alternates_in_blocks_of_two(self):
        pcm = timeline_to_pcm([(0, 1)], 1)
        assert len(pcm) == 48
        s = pcm.samples
        for i in range(0, 48, 4):
            assert s[i] == s[i + 1] > 0
            assert s[i + 2] == s[i + 3] < 0

    def test_phase_resets_at_each_entry(self):
        pcm = timeline_to_pcm([(0, 2), (0.5, 2)], 1)
        # entry at 0.5 ms = sample 24; a fresh segment starts high again
        assert pcm.samples[24] > 0
        assert pcm.samples[23] < 0  # previous segment had flipped by then

    def test_silence_before_first_entry(self):
        pcm = timeline_to_pcm([(10, 1)], 20)
        assert set(pcm.samples[:480]) == {0}
        assert pcm.samples[480] != 0

    def test_end_before_last_entry_rejected(self):
        with pytest.raises(ValueError):
            timeline_to_pcm([(0, 1), (100, 0)], 50)

    def test_accepts_codec_timeline_objects(self, sim):
        _, _, codec = sim
        pcm = timeline_to_pcm(codec.beep_timeline(0x12), 10)
        assert len(pcm) == 480

    def test_empty_timeline_is_silence(self):
        pcm = timeline_to_pcm([], 100)
        assert len(pcm) == 4800
        assert set(pcm.samples) == {0}

    def test_amplitude_config(self):
        pcm = timeline_to_pcm([(0, 10)], 10, RenderConfig(amplitude=1.0))
        assert max(pcm.samples) == 32767

    def test_bad_amplitude_rejected(self):
        with pytest.raises(ValueError):
            RenderConfig(amplitude=0.0)
        with pytest.raises(ValueError):
            RenderConfig(amplitude=1.5)


class TestWriteWav:
    def test_empty_buffer_is_bare_header(self):
        data = write_wav(PcmBuffer())
        assert len(data) == 44
        assert data[40:44] == (0).to_bytes(4, "little")

    def test_one_second_buffer_size(self):
        data = write_wav(timeline_to_pcm([(0, 100)], 1000))
        assert len(data) == 96044

    def test_riff_wave_magic(self):
        data = write_wav(PcmBuffer())
        assert data[0:4] == b"RIFF"
        assert data[8:12] == b"WAVE"

    def test_stdlib_wave_parses_it_back(self):
        pcm = timeline_to_pcm([(0, 50)], 100)
        data = write_wav(pcm)
        with wave.open(io.BytesIO(data)) as reader:
            assert reader.getnchannels() == 1
            assert reader.getsampwidth() == 2
            assert reader.getframerate() == SAMPLE_RATE
            assert reader.getnframes() == len(pcm)
            frames = reader.readframes(len(pcm))
        assert frames == pcm.samples.tobytes()

    def test_deterministic_bytes(self):
        a = write_wav(timeline_to_pcm([(0, 7), (50, 0)], 80))
        b = write_wav(timeline_to_pcm([(0, 7), (50, 0)], 80))
        assert a == b


class TestMeasureFrequency:
    def test_120hz(self):
        pcm = timeline_to_pcm([(0, 100)], 1000)
        assert abs(measure_frequency(pcm, 1000) - 120) <= 1

    def test_silence_is_zero(self):
        assert measure_frequency(timeline_to_pcm([(0, 0)], 1000), 1000) == 0.0

    def test_50hz(self):
        pcm = timeline_to_pcm([(0, 240)], 1000)
        assert abs(measure_frequency(pcm, 1000) - 50) <= 1

    def test_window_longer_than_buffer(self):
        with pytest.raises(ValueError):
            measure_frequency(timeline_to_pcm([(0, 1)], 10), 20)

    def test_window_must_be_positive(self):
        with pytest.raises(ValueError):
            measure_frequency(timeline_to_pcm([(0, 1)], 10), 0)


class TestProperties:
    @given(st.integers(0, 5000), st.lists(st.integers(0, 255), max_size=4))
    def test_sample_count_is_a_pure_function_of_end_ms(self, end_ms, dividers):
        entries = [(i * (end_ms / 4 if end_ms else 1), d) for i, d in enumerate(dividers)]
        entries = [(t, d) for i, (t, d) in enumerate(entries) if i == 0 or t > entries[i - 1][0]]
        if entries and entries[-1][0] > end_ms:
            entries = [e for e in entries if e[0] <= end_ms]
        pcm = timeline_to_pcm(entries, end_ms)
        assert len(pcm) == round(end_ms * 48)

    @settings(max_examples=40, deadline=None)
    @given(st.integers(1, 255))
    def test_divider_frequency_law(self, divider):
        pcm = timeline_to_pcm([(0, divider)], 1000)
        measured = measure_frequency(pcm, 1000)
        assert abs(measured - BEEP_BASE_HZ / divider) <= 1

    def test_divider_law_at_boundaries(self):
        for divider in (1, 2, 254, 255):
            pcm = timeline_to_pcm([(0, divider)], 1000)
            assert abs(measure_frequency(pcm, 1000) - BEEP_BASE_HZ / divider) <= 1


class TestFrequencyForDivider:
    def test_values(self):
        assert frequency_for_divider(0) == 0.0
        assert frequency_for_divider(1) == 12000
        assert frequency_for_divider(100) == 120

    def test_range_checked(self):
        with pytest.raises(ValueError):
            frequency_for_divider(256)
