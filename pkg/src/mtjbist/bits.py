"""Small helpers for bit vectors packed into Python ints.

Convention used across the package: bit i of a value is ``(value >> i) & 1``,
so bit 0 is the least significant bit of the last hex digit when the value is
printed big-endian. All widths are explicit at call sites.
"""

from __future__ import annotations


def bit(value: int, i: int) -> int:
    return (value >> i) & 1


def parity(value: int) -> int:
    """XOR reduction of all bits of ``value``."""
    return value.bit_count() & 1


def int_to_bits(value: int, width: int) -> list[int]:
    """LSB-first bit list of ``value``; bit index equals list index."""
    if value < 0 or value >> width:
        raise ValueError(f"value {value:#x} does not fit in {width} bits")
    return [(value >> i) & 1 for i in range(width)]


def bits_to_int(bits) -> int:
    """Inverse of int_to_bits: bits[i] becomes bit i."""
    out = 0
    for i, b in enumerate(bits):
        if b not in (0, 1):
            raise ValueError(f"bit {i} is {b!r}, expected 0 or 1")
        out |= b << i
    return out


def parse_hex(text: str, width: int) -> int:
    """Parse a big-endian hex string into a ``width``-bit value.

    Bit 0 of the result is the least significant bit of the last hex digit.
    """
    value = int(text, 16)
    if value < 0 or value >> width:
        raise ValueError(f"{text!r} does not fit in {width} bits")
    return value


def to_hex(value: int, width: int) -> str:
    """Fixed-width big-endian hex rendering, the inverse of parse_hex."""
    if value < 0 or value >> width:
        raise ValueError(f"value {value:#x} does not fit in {width} bits")
    return f"{value:0{(width + 3) // 4}x}"
