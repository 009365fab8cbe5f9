"""SGTIN-96 tag codec: 96-bit values <-> field structs <-> EPC URIs.

Field layout (most significant bit first):

    header(8) | filter(3) | partition(3) | company prefix | item reference | serial(38)

The partition value selects how the middle 44 bits are split between
company prefix and item reference.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

HEADER_SGTIN96 = 0b00110000
TAG_BITS = 96
SERIAL_BITS = 38
URI_SCHEME = "urn:epc:id:sgtin"

_URI_RE = re.compile(r"^urn:epc:id:sgtin:(\d+)\.(\d+)\.(\d+)$")


class EpcCodecError(ValueError):
    """Base error for tag encode/decode and URI parsing."""


class UnsupportedSchemeError(EpcCodecError):
    """Header byte does not identify an SGTIN-96 tag."""


class MalformedTagError(EpcCodecError):
    """Tag fields violate the partition layout."""


class FieldOverflowError(EpcCodecError):
    """A field value does not fit its allotted bit or digit width."""


class UriFormatError(EpcCodecError):
    """Text is not a well-formed sgtin URN."""


@dataclass(frozen=True)
class PartitionRow:
    partition: int
    cp_bits: int
    cp_digits: int
    ir_bits: int
    ir_digits: int


# Company prefix shrinks from 40 bits (12 digits) to 20 bits (6 digits) as the
# partition value grows; the item reference takes the rest of the 44-bit block.
_PARTITION_TABLE = (
    PartitionRow(0, 40, 12, 4, 1),
    PartitionRow(1, 37, 11, 7, 2),
    PartitionRow(2, 34, 10, 10, 3),
    PartitionRow(3, 30, 9, 14, 4),
    PartitionRow(4, 27, 8, 17, 5),
    PartitionRow(5, 24, 7, 20, 6),
    PartitionRow(6, 20, 6, 24, 7),
)

_PARTITION_BY_CP_DIGITS = {row.cp_digits: row for row in _PARTITION_TABLE}


def partition_lookup(partition: int) -> PartitionRow:
    """Return the bit/digit widths for a partition value in [0, 6]."""
    if not 0 <= partition <= 6:
        raise MalformedTagError(f"partition {partition} outside [0, 6]")
    return _PARTITION_TABLE[partition]


@dataclass(frozen=True)
class Sgtin96Fields:
    """Decoded SGTIN-96 tag fields."""

    filter_value: int
    partition: int
    company_prefix: int
    item_reference: int
    serial: int
    header: int = field(default=HEADER_SGTIN96)

    def __post_init__(self) -> None:
        if self.header != HEADER_SGTIN96:
            raise UnsupportedSchemeError(f"header {self.header:#04x} is not SGTIN-96")
        row = partition_lookup(self.partition)
        if not 0 <= self.filter_value < 8:
            raise FieldOverflowError(f"filter {self.filter_value} exceeds 3 bits")
        _check_field("company prefix", self.company_prefix, row.cp_bits, row.cp_digits)
        _check_field("item reference", self.item_reference, row.ir_bits, row.ir_digits)
        if not 0 <= self.serial < (1 << SERIAL_BITS):
            raise FieldOverflowError(f"serial {self.serial} exceeds {SERIAL_BITS} bits")

    @property
    def partition_row(self) -> PartitionRow:
        return partition_lookup(self.partition)


def _check_field(name: str, value: int, bits: int, digits: int) -> None:
    if value < 0 or value >= (1 << bits):
        raise FieldOverflowError(f"{name} {value} exceeds {bits} bits")
    if value >= 10**digits:
        raise FieldOverflowError(f"{name} {value} exceeds {digits} decimal digits")


def decode_sgtin96(raw: int) -> Sgtin96Fields:
    """Extract tag fields from a 96-bit value (bit 0 = most significant)."""
    if raw < 0 or raw >= (1 << TAG_BITS):
        raise MalformedTagError(f"value does not fit in {TAG_BITS} bits")
    header = raw >> 88
    if header != HEADER_SGTIN96:
        raise UnsupportedSchemeError(f"header {header:#04x} is not SGTIN-96")
    filter_value = (raw >> 85) & 0b111
    partition = (raw >> 82) & 0b111
    row = partition_lookup(partition)
    company_prefix = (raw >> (82 - row.cp_bits)) & ((1 << row.cp_bits) - 1)
    item_reference = (raw >> SERIAL_BITS) & ((1 << row.ir_bits) - 1)
    serial = raw & ((1 << SERIAL_BITS) - 1)
    try:
        return Sgtin96Fields(filter_value, partition, company_prefix, item_reference, serial)
    except FieldOverflowError as exc:
        # Bit pattern is decodable but a field exceeds its decimal capacity.
        raise MalformedTagError(str(exc)) from exc


def encode_sgtin96(fields: Sgtin96Fields) -> int:
    """Pack tag fields into a 96-bit value; exact inverse of decode_sgtin96."""
    row = fields.partition_row
    raw = fields.header << 88
    raw |= fields.filter_value << 85
    raw |= fields.partition << 82
    raw |= fields.company_prefix << (82 - row.cp_bits)
    raw |= fields.item_reference << SERIAL_BITS
    raw |= fields.serial
    return raw


@dataclass(frozen=True)
class EpcUri:
    """Pure-identity URI form of an SGTIN-96 tag (serial unpadded)."""

    company_prefix_text: str
    item_reference_text: str
    serial_text: str

    scheme = URI_SCHEME

    def __str__(self) -> str:
        return (
            f"{self.scheme}:{self.company_prefix_text}"
            f".{self.item_reference_text}.{self.serial_text}"
        )


def fields_to_uri(fields: Sgtin96Fields) -> EpcUri:
    """Render fields as a sgtin URN, zero-padding to the partition digit counts."""
    row = fields.partition_row
    return EpcUri(
        company_prefix_text=f"{fields.company_prefix:0{row.cp_digits}d}",
        item_reference_text=f"{fields.item_reference:0{row.ir_digits}d}",
        serial_text=str(fields.serial),
    )


def parse_uri(text: str) -> Sgtin96Fields:
    """Parse a sgtin URN; the partition is inferred from the prefix digit count."""
    match = _URI_RE.match(text.strip())
    if match is None:
        raise UriFormatError(f"not a sgtin URN: {text!r}")
    cp_text, ir_text, serial_text = match.groups()
    row = _PARTITION_BY_CP_DIGITS.get(len(cp_text))
    if row is None:
        raise UriFormatError(
            f"company prefix of {len(cp_text)} digits matches no partition (6..12 expected)"
        )
    if len(ir_text) != row.ir_digits:
        raise UriFormatError(
            f"item reference has {len(ir_text)} digits, partition {row.partition} "
            f"requires {row.ir_digits}"
        )
    serial = int(serial_text)
    if serial >= (1 << SERIAL_BITS):
        raise UriFormatError(f"serial {serial} exceeds {SERIAL_BITS} bits")
    return Sgtin96Fields(
        filter_value=0,
        partition=row.partition,
        company_prefix=int(cp_text),
        item_reference=int(ir_text),
        serial=serial,
    )


def parse_hex(text: str) -> int:
    """Parse a 0x-prefixed 24-hex-digit tag literal into its 96-bit value."""
    t = text.strip()
    if not t.lower().startswith("0x"):
        raise MalformedTagError(f"hex tag must be 0x-prefixed: {text!r}")
    digits = t[2:]
    if len(digits) != 24 or any(c not in "0123456789abcdefABCDEF" for c in digits):
        raise MalformedTagError(f"hex tag must have exactly 24 hex digits: {text!r}")
    return int(digits, 16)


def to_hex(raw: int) -> str:
    """Render a 96-bit tag value as an 0x-prefixed 24-digit literal."""
    return f"0x{raw:024X}"
