"""Simulated HD Audio stack with a tone-based screen reader on top.

Layers, bottom up: verb wire format (`verbs`), simulated controller and PCI
plumbing (`controller`), simulated codec (`codec`), driver-side client
(`driver`), PCM/WAV rendering (`audio`), screen-reader core (`reader`), and
the CLI/HTTP front (`cli`, `service`, `session`).
"""

__version__ = "0.1.0"
