"""Waveform figures saved next to rendered audio."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .audio import SAMPLES_PER_MS, PcmBuffer

_MAX_POINTS = 20_000


def save_waveform(pcm: PcmBuffer, path: str | Path, title: str | None = None) -> None:
    """Plot the buffer (decimated for long clips) and save the figure."""
    data = np.frombuffer(pcm.samples, dtype=np.int16)
    stride = max(1, len(data) // _MAX_POINTS)
    t_ms = np.arange(0, len(data), stride) / SAMPLES_PER_MS
    fig, ax = plt.subplots(figsize=(10, 3))
    ax.plot(t_ms, data[::stride], linewidth=0.5)
    ax.set_xlabel("time (ms)")
    ax.set_ylabel("amplitude")
    ax.set_ylim(-34000, 34000)
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=100)
    plt.close(fig)
