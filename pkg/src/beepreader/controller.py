"""Simulated HDA controller: PCI config space, MMIO registers, command FSM.

Register map (offsets per the public HDA register layout):

    0x00  GCAP      16-bit  global capabilities (zero here)
    0x02  VMIN       8-bit  minor version
    0x03  VMAJ       8-bit  major version
    0x08  GCTL      32-bit  bit 0 releases controller reset (CRST)
    0x0E  STATESTS  16-bit  bit k set when codec k is present; write-one-to-clear
    0x40  ..0x5F            CORB/RIRB ring-buffer block, stubbed to read zero
    0x60  ICOI      32-bit  immediate command output (the staged verb word)
    0x64  ICII      32-bit  immediate response input
    0x68  ICIS      16-bit  bit 0 ICB (command busy), bit 1 IRV (result valid)

Writing ICIS with bit 0 set arms whatever word is staged in ICOI; after
`latency_steps` calls to step() the word is decoded, routed to the codec
at its cad, and the response lands in ICII with IRV set and ICB clear.
Protocol violations (overwriting ICOI mid-command, re-arming while busy)
are logged to fault_log but still take effect, last writer wins, the way
permissive silicon behaves.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator

from .errors import BeepReaderError
from .verbs import VerbCatalog, decode_command, default_catalog

REG_GCAP = 0x00
REG_VMIN = 0x02
REG_VMAJ = 0x03
REG_GCTL = 0x08
REG_STATESTS = 0x0E
REG_ICOI = 0x60
REG_ICII = 0x64
REG_ICIS = 0x68

ICIS_ICB = 0x1
ICIS_IRV = 0x2
GCTL_CRST = 0x1

MMIO_WINDOW = 0x100
_RING_BUFFER_START = 0x40
_RING_BUFFER_END = 0x60

# HDBARL low nibble carries flag bits (space/type), not address bits.
BAR_FLAG_BITS = 0x4
HDA_CLASS_BASE = 0x04  # multimedia device
HDA_CLASS_SUB = 0x03  # audio device


class NoSuchDeviceError(BeepReaderError):
    """Config access to a PCI address with no device behind it."""


@dataclass(frozen=True, order=True)
class PciAddress:
    bus: int
    device: int
    function: int

    def __post_init__(self) -> None:
        if not 0 <= self.bus <= 255:
            raise ValueError(f"bus {self.bus} out of range 0..255")
        if not 0 <= self.device <= 31:
            raise ValueError(f"device {self.device} out of range 0..31")
        if not 0 <= self.function <= 7:
            raise ValueError(f"function {self.function} out of range 0..7")

    @classmethod
    def parse(cls, text: str) -> "PciAddress":
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError(f"PCI address must be bus:device:function, got {text!r}")
        return cls(*(int(p, 0) for p in parts))

    def __str__(self) -> str:
        return f"{self.bus}:{self.device}:{self.function}"


class PciConfigSpace:
    """256 bytes of PCI configuration data with little-endian accessors."""

    SIZE = 256

    def __init__(self) -> None:
        self.raw = bytearray(self.SIZE)

    def read(self, offset: int, width: int) -> int:
        self._check(offset, width)
        return int.from_bytes(self.raw[offset : offset + width], "little")

    def write(self, offset: int, width: int, value: int) -> None:
        self._check(offset, width)
        self.raw[offset : offset + width] = (value & ((1 << (8 * width)) - 1)).to_bytes(
            width, "little"
        )

    def _check(self, offset: int, width: int) -> None:
        if width not in (1, 2, 4):
            raise ValueError(f"width must be 1, 2 or 4, got {width}")
        if offset < 0 or offset + width > self.SIZE:
            raise ValueError(f"config access at 0x{offset:02X}+{width} out of range")

    @property
    def vendor_id(self) -> int:
        return self.read(0x00, 2)

    @property
    def device_id(self) -> int:
        return self.read(0x02, 2)

    @property
    def class_code(self) -> int:
        """24-bit class code: base << 16 | subclass << 8 | prog-if."""
        return self.read(0x0B, 1) << 16 | self.read(0x0A, 1) << 8 | self.read(0x09, 1)

    @property
    def hdbarl(self) -> int:
        return self.read(0x10, 4)

    @property
    def hdbaru(self) -> int:
        return self.read(0x14, 4)

    @classmethod
    def for_hda(cls, vendor_id: int, device_id: int, bar_base: int) -> "PciConfigSpace":
        if bar_base & 0xF:
            raise ValueError(f"BAR base 0x{bar_base:08X} has flag bits set")
        config = cls()
        config.write(0x00, 2, vendor_id)
        config.write(0x02, 2, device_id)
        config.write(0x09, 1, 0x00)
        config.write(0x0A, 1, HDA_CLASS_SUB)
        config.write(0x0B, 1, HDA_CLASS_BASE)
        config.write(0x10, 4, bar_base | BAR_FLAG_BITS)
        config.write(0x14, 4, 0x00000000)
        return config


class PciBus:
    """The machine's view of config space: devices keyed by PCI address."""

    def __init__(self) -> None:
        self._devices: dict[PciAddress, object] = {}

    def add(self, device: object) -> None:
        addr = device.address
        if addr in self._devices:
            raise ValueError(f"device already present at {addr}")
        self._devices[addr] = device

    def device_at(self, addr: PciAddress) -> object | None:
        return self._devices.get(addr)

    def config_read(self, addr: PciAddress, offset: int, width: int) -> int:
        device = self._devices.get(addr)
        if device is None:
            raise NoSuchDeviceError(f"no device at {addr}")
        return device.pci_config.read(offset, width)

    def scan(self) -> Iterator[tuple[PciAddress, PciConfigSpace]]:
        for addr in sorted(self._devices):
            yield addr, self._devices[addr].pci_config


@dataclass(frozen=True)
class MmioAccess:
    op: str  # "read" | "write"
    offset: int
    width: int
    value: int


@dataclass(frozen=True)
class FaultRecord:
    kind: str
    detail: str
    clock_ms: float


@dataclass
class ControllerConfig:
    address: PciAddress = field(default_factory=lambda: PciAddress(0, 27, 0))
    vendor_id: int = 0x8086
    device_id: int = 0x1D20
    bar_base: int = 0xFEB00000
    latency_steps: int = 1

    def __post_init__(self) -> None:
        if self.bar_base & 0xF:
            raise ValueError(f"bar_base 0x{self.bar_base:08X} low 4 bits must be zero")
        if self.latency_steps < 1:
            raise ValueError("latency_steps must be >= 1")


class ControllerModel:
    """Single-owner state machine; callers must serialize access themselves."""

    def __init__(
        self,
        config: ControllerConfig | None = None,
        catalog: VerbCatalog | None = None,
    ) -> None:
        self.config = config or ControllerConfig()
        self.address = self.config.address
        self.pci_config = PciConfigSpace.for_hda(
            self.config.vendor_id, self.config.device_id, self.config.bar_base
        )
        self.latency_steps = self.config.latency_steps
        self.catalog = catalog or default_catalog()
        self.codecs: dict[int, object] = {}
        self.mmio_trace: list[MmioAccess] = []
        self.fault_log: list[FaultRecord] = []
        self._regs = bytearray(MMIO_WINDOW)
        self._pending: int | None = None
        self._irv = False
        self.clock_ms: float = 0.0
        self.commands_armed = 0
        self.commands_completed = 0
        self.responses_codec = 0
        self.responses_absent = 0
        self._init_regs()

    def _init_regs(self) -> None:
        self._regs[:] = bytes(MMIO_WINDOW)
        self._regs[REG_VMAJ] = 0x01  # HDA 1.0

    # -- register access ---------------------------------------------------

    def mmio_read(self, offset: int, width: int) -> int:
        self._check_mmio(offset, width)
        value = 0
        for k in range(width):
            i = offset + k
            if i == REG_ICIS:
                b = self._icis_flags()
            elif i == REG_ICIS + 1:
                b = 0
            else:
                b = self._regs[i]
            value |= b << (8 * k)
        self.mmio_trace.append(MmioAccess("read", offset, width, value))
        return value

    def mmio_write(self, offset: int, width: int, value: int) -> None:
        self._check_mmio(offset, width)
        value &= (1 << (8 * width)) - 1
        self.mmio_trace.append(MmioAccess("write", offset, width, value))
        if _RING_BUFFER_START <= offset < _RING_BUFFER_END:
            return  # ring-buffer block is a zero-read stub; writes are dropped
        if offset == REG_ICIS:
            if value & ICIS_IRV:
                self._irv = False
            if value & ICIS_ICB:
                self._arm()
            return
        if offset == REG_ICOI:
            if self._pending is not None:
                self._fault("icoi-overwrite", "ICOI written while a command is pending")
            self._store(offset, width, value)
            return
        if offset == REG_GCTL:
            self._store(offset, width, value)
            if value & GCTL_CRST:
                self._latch_presence()
            else:
                self._link_reset()
            return
        if offset == REG_STATESTS:
            current = int.from_bytes(self._regs[REG_STATESTS : REG_STATESTS + 2], "little")
            current &= ~value  # write-one-to-clear
            self._regs[REG_STATESTS : REG_STATESTS + 2] = current.to_bytes(2, "little")
            return
        self._store(offset, width, value)

    def _store(self, offset: int, width: int, value: int) -> None:
        self._regs[offset : offset + width] = value.to_bytes(width, "little")

    def _check_mmio(self, offset: int, width: int) -> None:
        if width not in (1, 2, 4):
            raise ValueError(f"width must be 1, 2 or 4, got {width}")
        if offset < 0 or offset + width > MMIO_WINDOW:
            raise ValueError(f"MMIO access at 0x{offset:02X}+{width} outside window")

    def _icis_flags(self) -> int:
        return (ICIS_ICB if self._pending is not None else 0) | (
            ICIS_IRV if self._irv else 0
        )

    # -- command state machine ---------------------------------------------

    def _arm(self) -> None:
        if self._pending is not None:
            self._fault("arm-while-busy", "ICB set while a command is pending")
        self._pending = self.latency_steps
        self.commands_armed += 1

    def step(self, n: int = 1) -> int:
        """Advance the FSM n steps; returns how many commands completed."""
        if n < 1:
            raise ValueError("step count must be positive")
        completed = 0
        for _ in range(n):
            if self._pending is None:
                break
            self._pending -= 1
            if self._pending == 0:
                self._pending = None
                self._complete()
                completed += 1
        return completed

    def _complete(self) -> None:
        word = int.from_bytes(self._regs[REG_ICOI : REG_ICOI + 4], "little")
        cmd = decode_command(word, self.catalog)
        codec = self.codecs.get(cmd.cad)
        if codec is None:
            response = 0x00000000
            self.responses_absent += 1
            self._fault("absent-codec", f"command 0x{word:08X} addressed to cad {cmd.cad}")
        else:
            response = codec.execute_verb(cmd, at_ms=self.clock_ms) & 0xFFFFFFFF
            self.responses_codec += 1
        self._regs[REG_ICII : REG_ICII + 4] = response.to_bytes(4, "little")
        self._irv = True
        self.commands_completed += 1

    # -- clock, codecs, reset ------------------------------------------------

    def advance_clock(self, delta_ms: float) -> None:
        if delta_ms <= 0:
            raise ValueError(f"clock delta must be positive, got {delta_ms}")
        self.clock_ms = self.clock_ms + delta_ms

    def attach_codec(self, cad: int, codec: object) -> None:
        if not 0 <= cad <= 15:
            raise ValueError(f"codec address {cad} out of range 0..15")
        if cad in self.codecs:
            raise ValueError(f"codec already attached at cad {cad}")
        self.codecs[cad] = codec
        if self._regs[REG_GCTL] & GCTL_CRST:
            self._latch_presence()

    def _latch_presence(self) -> None:
        bits = 0
        for cad in self.codecs:
            bits |= 1 << cad
        self._regs[REG_STATESTS : REG_STATESTS + 2] = bits.to_bytes(2, "little")

    def _link_reset(self) -> None:
        # CRST written 0: drop in-flight state and presence, keep sim logs.
        self._pending = None
        self._irv = False
        self._regs[REG_STATESTS : REG_STATESTS + 2] = b"\x00\x00"
        self._regs[REG_ICOI : REG_ICOI + 4] = b"\x00\x00\x00\x00"
        self._regs[REG_ICII : REG_ICII + 4] = b"\x00\x00\x00\x00"

    def reset(self) -> None:
        """Power-on reset: registers, FSM, clock, logs; codecs stay attached."""
        self._init_regs()
        self._pending = None
        self._irv = False
        self.clock_ms = 0.0
        self.fault_log.clear()
        self.mmio_trace.clear()
        self.commands_armed = 0
        self.commands_completed = 0
        self.responses_codec = 0
        self.responses_absent = 0
        for codec in self.codecs.values():
            reset = getattr(codec, "reset", None)
            if callable(reset):
                reset()

    def _fault(self, kind: str, detail: str) -> None:
        self.fault_log.append(FaultRecord(kind, detail, self.clock_ms))
