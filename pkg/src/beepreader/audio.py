"""Square-wave rendering of beep timelines, WAV bytes, frequency measurement.

A divider d in 1..255 sounds at 12000/d Hz; divider 0 is silence. At the
fixed 48 kHz rate one period is exactly 4*d samples, so segments are built
from alternating blocks of 2*d samples and rendering is sample-exact.
"""

from __future__ import annotations

import struct
import sys
from array import array
from dataclasses import dataclass, field
from pathlib import Path
from typing import TYPE_CHECKING, Sequence, Union

import numpy as np

if TYPE_CHECKING:
    from .codec import BeepTimeline

SAMPLE_RATE = 48_000
SAMPLES_PER_MS = 48
BEEP_BASE_HZ = 12_000
FULL_SCALE = 32_767
WAV_HEADER_BYTES = 44

Timeline = Union["BeepTimeline", Sequence[tuple[float, int]]]


@dataclass(frozen=True)
class RenderConfig:
    amplitude: float = 0.5  # fraction of 16-bit full scale

    def __post_init__(self) -> None:
        if not 0.0 < self.amplitude <= 1.0:
            raise ValueError(f"amplitude must be in (0, 1], got {self.amplitude}")


@dataclass
class PcmBuffer:
    """Mono signed 16-bit samples at the fixed 48 kHz rate."""

    samples: array = field(default_factory=lambda: array("h"))
    sample_rate: int = SAMPLE_RATE

    def __post_init__(self) -> None:
        if self.sample_rate != SAMPLE_RATE:
            raise ValueError(f"sample rate is fixed at {SAMPLE_RATE}")
        if not isinstance(self.samples, array) or self.samples.typecode != "h":
            self.samples = array("h", self.samples)

    def __len__(self) -> int:
        return len(self.samples)

    @property
    def duration_ms(self) -> float:
        return len(self.samples) / SAMPLES_PER_MS


def frequency_for_divider(divider: int) -> float:
    if not 0 <= divider <= 255:
        raise ValueError(f"divider {divider} out of range 0..255")
    return 0.0 if divider == 0 else BEEP_BASE_HZ / divider


def _square_block(divider: int, count: int, amp: int) -> array:
    if divider == 0 or amp == 0:
        return array("h", [0]) * count
    half = 2 * divider
    period = array("h", [amp]) * half + array("h", [-amp]) * half
    repeats = -(-count // len(period))
    return (period * repeats)[:count]


def _entries(timeline: Timeline) -> list[tuple[float, int]]:
    raw = getattr(timeline, "entries", timeline)
    entries = [(float(t), int(d)) for t, d in raw]
    previous = -1.0
    for t, d in entries:
        if t < 0:
            raise ValueError(f"timeline timestamp {t} is negative")
        if t <= previous:
            raise ValueError("timeline timestamps must strictly increase")
        if not 0 <= d <= 255:
            raise ValueError(f"divider {d} out of range 0..255")
        previous = t
    return entries


def timeline_to_pcm(
    timeline: Timeline, end_ms: float, config: RenderConfig | None = None
) -> PcmBuffer:
    """Render a divider timeline from t=0 to end_ms.

    Output is silent before the first entry; between entries it is a square
    wave at 12000/divider Hz (or silence for divider 0) whose phase resets
    at each entry. Sample count is always round(end_ms * 48).
    """
    config = config or RenderConfig()
    entries = _entries(timeline)
    if end_ms < 0:
        raise ValueError("end_ms must be non-negative")
    if entries and end_ms < entries[-1][0]:
        raise ValueError(
            f"end_ms {end_ms} precedes the last timeline entry at {entries[-1][0]}"
        )
    total = round(end_ms * SAMPLES_PER_MS)
    amp = round(config.amplitude * FULL_SCALE)
    boundaries = [round(t * SAMPLES_PER_MS) for t, _ in entries] + [total]
    out = array("h")
    if entries:
        out += array("h", [0]) * boundaries[0]
        for i, (_, divider) in enumerate(entries):
            count = boundaries[i + 1] - boundaries[i]
            if count > 0:
                out += _square_block(divider, count, amp)
    else:
        out += array("h", [0]) * total
    return PcmBuffer(out)


def write_wav(pcm: PcmBuffer) -> bytes:
    """Canonical 44-byte RIFF/WAVE header + little-endian 16-bit samples."""
    samples = pcm.samples
    if sys.byteorder == "big":
        samples = array("h", samples)
        samples.byteswap()
    data = samples.tobytes()
    header = struct.pack(
        "<4sI4s4sIHHIIHH4sI",
        b"RIFF",
        36 + len(data),
        b"WAVE",
        b"fmt ",
        16,
        1,  # PCM
        1,  # mono
        SAMPLE_RATE,
        SAMPLE_RATE * 2,
        2,
        16,
        b"data",
        len(data),
    )
    return header + data


def save_wav(pcm: PcmBuffer, path: str | Path) -> int:
    payload = write_wav(pcm)
    Path(path).write_bytes(payload)
    return len(payload)


def measure_frequency(pcm: PcmBuffer, window_ms: float) -> float:
    """Zero-crossing frequency estimate over the buffer's first window_ms."""
    if window_ms <= 0:
        raise ValueError("window_ms must be positive")
    count = round(window_ms * SAMPLES_PER_MS)
    if count > len(pcm.samples):
        raise ValueError("window longer than buffer")
    if count < 2:
        return 0.0
    s = np.frombuffer(pcm.samples, dtype=np.int16)[:count]
    a, b = s[:-1], s[1:]
    crossings = int(np.count_nonzero(((a > 0) & (b < 0)) | ((a < 0) & (b > 0))))
    return crossings * 500.0 / window_ms
