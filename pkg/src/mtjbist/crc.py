"""CRC encoder / decoder over GF(2).

The check value of a data word D of d bits is the remainder of D(x) * x^g
divided by the generator polynomial, computed with a zero-initialized
register. Appending the check to the data gives a codeword divisible by the
generator, so the receiver recomputes the remainder over data||check and
raises the error flag on any nonzero result.

Polynomials are stored without the implicit leading x^g term: the default
x^8 + x^2 + x + 1 is poly=0x07 with check_width=8.
"""

from __future__ import annotations

from dataclasses import dataclass

from .bits import to_hex


@dataclass(frozen=True)
class CrcConfig:
    # generator polynomial low bits, implicit leading term x^check_width
    poly: int = 0x07
    check_width: int = 8
    data_width: int = 8
    # receiver remainder register state during reset, before decode starts;
    # hardware holds the flip-flops at logic one (None means all-ones)
    receiver_init: int | None = None

    def __post_init__(self):
        g, d = self.check_width, self.data_width
        if g < 1 or d < 1:
            raise ValueError("check_width and data_width must be >= 1")
        if not 0 < self.poly < (1 << g):
            raise ValueError(f"poly {self.poly:#x} must fit in {g} bits and be nonzero")
        if self.receiver_init is not None and not 0 <= self.receiver_init < (1 << g):
            raise ValueError("receiver_init must fit in check_width bits")

    @property
    def reset_state(self) -> int:
        init = self.receiver_init
        return ((1 << self.check_width) - 1) if init is None else init

    @property
    def poly_hex(self) -> str:
        return to_hex(self.poly, self.check_width)

    @classmethod
    def from_hex(cls, poly_hex: str, check_width: int = 8, data_width: int = 8, receiver_init=None):
        return cls(int(poly_hex, 16), check_width, data_width, receiver_init)


@dataclass(frozen=True)
class Message:
    """A data word plus its transmitted check value."""

    data: int
    check: int

    def packed(self, config: CrcConfig) -> int:
        # data occupies the high bits: data || check, data MSB first on the wire
        return (self.data << config.check_width) | self.check


def _validate(value: int, nbits: int) -> None:
    if nbits < 0:
        raise ValueError("nbits must be >= 0")
    if value < 0 or value >> nbits:
        raise ValueError(f"value {value:#x} does not fit in {nbits} bits")


def crc_remainder(value: int, nbits: int, config: CrcConfig) -> int:
    """Remainder of value(x) * x^g mod the generator, MSB-first division."""
    _validate(value, nbits)
    g = config.check_width
    mask = (1 << g) - 1
    reg = 0
    for i in range(nbits - 1, -1, -1):
        fb = ((reg >> (g - 1)) ^ (value >> i)) & 1
        reg = ((reg << 1) & mask) ^ (config.poly if fb else 0)
    return reg


def encode(pattern: int, config: CrcConfig) -> Message:
    """Attach the check value to a data pattern."""
    _validate(pattern, config.data_width)
    return Message(data=pattern, check=crc_remainder(pattern, config.data_width, config))


def verify(message: Message, config: CrcConfig) -> int:
    """Receiver check: 1 (error) iff the remainder over data||check is nonzero."""
    _validate(message.data, config.data_width)
    _validate(message.check, config.check_width)
    nbits = config.data_width + config.check_width
    return 1 if crc_remainder(message.packed(config), nbits, config) else 0


def decoder_register_states(message_bits: int, nbits: int, config: CrcConfig, init: int | None = None) -> list[int]:
    """Register timeline of the serial receiver while shifting a message in.

    Starts from the hardware reset state (config.reset_state unless ``init``
    overrides it) and returns nbits+1 states including the initial one. This
    models switching activity; the error decision itself uses the zero-init
    arithmetic of crc_remainder.
    """
    _validate(message_bits, nbits)
    g = config.check_width
    mask = (1 << g) - 1
    reg = config.reset_state if init is None else init
    if not 0 <= reg <= mask:
        raise ValueError("init must fit in check_width bits")
    states = [reg]
    for i in range(nbits - 1, -1, -1):
        fb = ((reg >> (g - 1)) ^ (message_bits >> i)) & 1
        reg = ((reg << 1) & mask) ^ (config.poly if fb else 0)
        states.append(reg)
    return states
