"""HD Audio verb wire format: command words, decoding, and the verb catalog.

A verb command is a single 32-bit word:

    bits 31:28  codec address (cad)
    bits 27:20  node id (nid)
    bits 19:0   verb id and payload, in one of two forms

    short form: 12-bit verb id in bits 19:8, 8-bit payload in bits 7:0
    long form:   4-bit verb id in bits 19:16, 16-bit payload in bits 15:0

Nothing in the word marks which form it uses. Decoding is catalog-driven:
if bits 19:16 match a long-form id known to the catalog, the word decodes
as long form, otherwise as short form. A short-form id whose top nibble
collides with a long-form id therefore cannot round-trip; the standard id
assignment keeps the two spaces disjoint, so this only bites hand-built
commands.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Iterator

from .errors import BeepReaderError


class EncodeError(BeepReaderError):
    """A command or verb id violates the wire format."""


class VerbForm(Enum):
    SHORT12 = "short12"
    LONG4 = "long4"


# Canonical verb ids. The long-form set/get pair for amplifier state uses
# 4-bit ids; everything else here is short form.
GET_PARAMETER = 0xF00
SET_BEEP_CONTROL = 0x70A
GET_BEEP_CONTROL = 0xF0A
SET_AMP_GAIN_MUTE = 0x3
GET_AMP_GAIN_MUTE = 0xB
SET_CONVERTER_FORMAT = 0x2
GET_CONVERTER_FORMAT = 0xA


@dataclass(frozen=True)
class VerbId:
    """A verb id together with its wire form."""

    form: VerbForm
    id: int

    def __post_init__(self) -> None:
        limit = 0xFFF if self.form is VerbForm.SHORT12 else 0xF
        if not 0 <= self.id <= limit:
            raise EncodeError(
                f"verb id 0x{self.id:X} out of range for {self.form.value}"
            )

    @classmethod
    def short12(cls, id: int) -> "VerbId":
        return cls(VerbForm.SHORT12, id)

    @classmethod
    def long4(cls, id: int) -> "VerbId":
        return cls(VerbForm.LONG4, id)

    @property
    def payload_bits(self) -> int:
        return 8 if self.form is VerbForm.SHORT12 else 16


@dataclass(frozen=True)
class VerbCommand:
    """A fully addressed verb: codec address, node id, verb, payload."""

    cad: int
    nid: int
    verb: VerbId
    payload: int = 0

    def __post_init__(self) -> None:
        if not 0 <= self.cad <= 0xF:
            raise EncodeError(f"codec address {self.cad} out of range 0..15")
        if not 0 <= self.nid <= 0xFF:
            raise EncodeError(f"node id {self.nid} out of range 0..255")
        if not 0 <= self.payload < (1 << self.verb.payload_bits):
            raise EncodeError(
                f"payload 0x{self.payload:X} does not fit "
                f"{self.verb.payload_bits} bits"
            )


def encode_command(cmd: VerbCommand) -> int:
    """Pack a command into its 32-bit wire word."""
    word = (cmd.cad << 28) | (cmd.nid << 20)
    if cmd.verb.form is VerbForm.SHORT12:
        word |= (cmd.verb.id << 8) | cmd.payload
    else:
        word |= (cmd.verb.id << 16) | cmd.payload
    return word


def decode_command(word: int, catalog: "VerbCatalog") -> VerbCommand:
    """Decode a 32-bit wire word; the catalog supplies the long-form ids.

    Total: every 32-bit word decodes to some command under the
    catalog-driven form disambiguation.
    """
    if not 0 <= word <= 0xFFFFFFFF:
        raise EncodeError(f"command word 0x{word:X} is not 32-bit")
    cad = (word >> 28) & 0xF
    nid = (word >> 20) & 0xFF
    nibble = (word >> 16) & 0xF
    if nibble in catalog.long_ids:
        return VerbCommand(cad, nid, VerbId.long4(nibble), word & 0xFFFF)
    return VerbCommand(cad, nid, VerbId.short12((word >> 8) & 0xFFF), word & 0xFF)


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    verb: VerbId
    direction: str  # "get" | "set"
    pair: str | None = None


class VerbCatalog:
    """Named verbs with their ids, directions, and get/set pairing.

    Extensible at runtime so codec profiles can register vendor verbs;
    `check_pairs` validates pairing symmetry once a catalog is complete.
    """

    def __init__(self, entries: Iterable[CatalogEntry] = ()) -> None:
        self._by_name: dict[str, CatalogEntry] = {}
        self._by_verb: dict[VerbId, CatalogEntry] = {}
        for entry in entries:
            self.add(entry)

    def add(self, entry: CatalogEntry) -> None:
        if entry.direction not in ("get", "set"):
            raise ValueError(f"direction must be get or set, not {entry.direction!r}")
        if entry.name in self._by_name:
            raise ValueError(f"duplicate verb name {entry.name!r}")
        if entry.verb in self._by_verb:
            raise ValueError(f"duplicate verb id {entry.verb}")
        self._by_name[entry.name] = entry
        self._by_verb[entry.verb] = entry

    def lookup(self, name: str) -> VerbId:
        return self._by_name[name].verb

    def entry_for(self, verb: VerbId) -> CatalogEntry | None:
        return self._by_verb.get(verb)

    def name_of(self, verb: VerbId) -> str | None:
        entry = self._by_verb.get(verb)
        return entry.name if entry else None

    def pair_of(self, entry: CatalogEntry | str) -> CatalogEntry | None:
        if isinstance(entry, str):
            entry = self._by_name[entry]
        return self._by_name.get(entry.pair) if entry.pair else None

    @property
    def long_ids(self) -> frozenset[int]:
        return frozenset(
            e.verb.id for e in self._by_verb.values() if e.verb.form is VerbForm.LONG4
        )

    def check_pairs(self) -> None:
        """Require get/set pairs to reference each other symmetrically."""
        for entry in self:
            if entry.pair is None:
                continue
            partner = self._by_name.get(entry.pair)
            if partner is None:
                raise ValueError(f"{entry.name} pairs with unknown {entry.pair!r}")
            if partner.pair != entry.name:
                raise ValueError(
                    f"{entry.name} / {partner.name} pairing is not symmetric"
                )
            if partner.direction == entry.direction:
                raise ValueError(
                    f"{entry.name} and {partner.name} share direction {entry.direction}"
                )

    def __iter__(self) -> Iterator[CatalogEntry]:
        return iter(self._by_name.values())

    def __len__(self) -> int:
        return len(self._by_name)


def default_catalog() -> VerbCatalog:
    """The standard verbs this stack speaks, long ids {0x2, 0x3, 0xA, 0xB}."""
    catalog = VerbCatalog(
        [
            CatalogEntry("GetParameter", VerbId.short12(GET_PARAMETER), "get"),
            CatalogEntry(
                "SetBeepControl",
                VerbId.short12(SET_BEEP_CONTROL),
                "set",
                pair="GetBeepControl",
            ),
            CatalogEntry(
                "GetBeepControl",
                VerbId.short12(GET_BEEP_CONTROL),
                "get",
                pair="SetBeepControl",
            ),
            CatalogEntry(
                "SetAmpGainMute",
                VerbId.long4(SET_AMP_GAIN_MUTE),
                "set",
                pair="GetAmpGainMute",
            ),
            CatalogEntry(
                "GetAmpGainMute",
                VerbId.long4(GET_AMP_GAIN_MUTE),
                "get",
                pair="SetAmpGainMute",
            ),
            CatalogEntry(
                "SetConverterFormat",
                VerbId.long4(SET_CONVERTER_FORMAT),
                "set",
                pair="GetConverterFormat",
            ),
            CatalogEntry(
                "GetConverterFormat",
                VerbId.long4(GET_CONVERTER_FORMAT),
                "get",
                pair="SetConverterFormat",
            ),
        ]
    )
    catalog.check_pairs()
    return catalog


def format_decoded(cmd: VerbCommand, catalog: VerbCatalog) -> str:
    """One trace line: `cad nid verb-name payload`."""
    name = catalog.name_of(cmd.verb)
    if name is None:
        digits = 3 if cmd.verb.form is VerbForm.SHORT12 else 1
        name = f"0x{cmd.verb.id:0{digits}X}"
    payload_digits = cmd.verb.payload_bits // 4
    return f"{cmd.cad} 0x{cmd.nid:02X} {name} 0x{cmd.payload:0{payload_digits}X}"
