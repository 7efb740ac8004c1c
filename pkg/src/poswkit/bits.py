"""Bitstring primitives shared across the toolkit.

A bitstring is a plain ``str`` of ``'0'``/``'1'`` characters, possibly empty.
All packing is big-endian / MSB-first: the first character of the string is
the most significant bit of the first byte.  Byte-level padding, when a
bitstring does not end on a byte boundary, is always with zero bits at the
end; readers must know the bit length from context.
"""

from __future__ import annotations


_BIT_CHARS = frozenset("01")


def check_bits(s: str, width: int | None = None) -> str:
    """Validate a bitstring, optionally enforcing an exact width."""
    if not isinstance(s, str) or not _BIT_CHARS.issuperset(s):
        raise ValueError(f"not a bitstring: {s!r}")
    if width is not None and len(s) != width:
        raise ValueError(f"expected {width} bits, got {len(s)}: {s!r}")
    return s


def bits_from_int(value: int, width: int) -> str:
    if value < 0 or value >= (1 << width):
        raise ValueError(f"{value} does not fit in {width} bits")
    return format(value, f"0{width}b") if width else ""


def int_from_bits(bits: str) -> int:
    check_bits(bits)
    return int(bits, 2) if bits else 0


def pack_bits(bits: str) -> bytes:
    """Pack MSB-first into bytes, zero-padding the final partial byte."""
    check_bits(bits)
    nbytes = (len(bits) + 7) // 8
    if not nbytes:
        return b""
    value = int(bits, 2) << (-len(bits) % 8)
    return value.to_bytes(nbytes, "big")


def unpack_bits(data: bytes, nbits: int) -> str:
    if nbits > 8 * len(data):
        raise ValueError("not enough bytes")
    if not data:
        return ""
    return format(int.from_bytes(data, "big"), f"0{8 * len(data)}b")[:nbits]


def hex_from_bits(bits: str) -> str:
    """Hex form of a bitstring: packed bytes, trailing zero padding."""
    return pack_bits(bits).hex()


def bits_from_hex(hexstr: str, width: int) -> str:
    """Inverse of :func:`hex_from_bits`; padding bits must be zero."""
    try:
        data = bytes.fromhex(hexstr)
    except ValueError as exc:
        raise ValueError(f"bad hex string: {hexstr!r}") from exc
    if len(data) != (width + 7) // 8:
        raise ValueError(
            f"expected {(width + 7) // 8} bytes of hex for {width} bits, got {len(data)}"
        )
    all_bits = "".join(format(b, "08b") for b in data)
    if any(c == "1" for c in all_bits[width:]):
        raise ValueError("nonzero padding bits")
    return all_bits[:width]


def all_bitstrings(length: int):
    """All bitstrings of the given exact length, in lexicographic order."""
    for v in range(1 << length):
        yield bits_from_int(v, length)


def windows(bits: str, width: int) -> list[str]:
    """All contiguous substrings of the given width, left to right."""
    return [bits[i : i + width] for i in range(len(bits) - width + 1)]


class BitWriter:
    """Accumulates bits MSB-first; final bytes are zero-padded."""

    def __init__(self) -> None:
        self._parts: list[str] = []

    def write(self, bits: str) -> None:
        self._parts.append(check_bits(bits))

    def write_int(self, value: int, width: int) -> None:
        self.write(bits_from_int(value, width))

    def getvalue(self) -> bytes:
        return pack_bits("".join(self._parts))


class BitReader:
    """Reads bits MSB-first from a byte buffer."""

    def __init__(self, data: bytes) -> None:
        self._bits = "".join(format(b, "08b") for b in data)
        self._pos = 0

    def read(self, nbits: int) -> str:
        if self._pos + nbits > len(self._bits):
            raise ValueError("read past end of buffer")
        out = self._bits[self._pos : self._pos + nbits]
        self._pos += nbits
        return out

    def read_int(self, nbits: int) -> int:
        return int_from_bits(self.read(nbits))

    def remaining(self) -> int:
        return len(self._bits) - self._pos

    def padding_is_zero(self) -> bool:
        return all(c == "0" for c in self._bits[self._pos :])
