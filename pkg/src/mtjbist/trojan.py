"""Parametric hardware Trojan models for the CRC decoder and KATAN-32.

Both Trojans share the shape rare trigger -> small payload:

  CRC decoder   trigger = XOR-reduce(data) AND XOR-reduce(check) over the
                receiver input message; payload inverts the error flag.
  KATAN-32      trigger = XOR-reduce(selected key bits) AND XOR-reduce
                (selected plaintext bits); payload flips the first and last
                ciphertext bits (bit 31 and bit 0).

Over the uniform message space both parities are balanced and independent,
so each trigger fires on exactly one quarter of its input space.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .bits import parity
from .crc import CrcConfig, Message, verify
from .katan import BLOCK_BITS, KEY_BITS, encrypt32


class TrojanTarget(Enum):
    CRC_DECODER = "crc_decoder"
    KATAN32 = "katan32"


class TrojanPayload(Enum):
    INVERT_ERROR_FLAG = "invert_error_flag"
    FLIP_FIRST_LAST_CIPHER_BITS = "flip_first_last_cipher_bits"


# ciphertext bit 31 ("first" in big-endian reading) and bit 0 ("last")
PAYLOAD_MASK_32 = 0x8000_0001


@dataclass(frozen=True)
class TrojanSpec:
    target: TrojanTarget
    payload: TrojanPayload
    # tap positions for the KATAN trigger parities; unused for the CRC
    # decoder, whose trigger taps the whole data and check words
    trigger_key_bits: tuple[int, ...] = tuple(range(8))
    trigger_pt_bits: tuple[int, ...] = tuple(range(8))

    def __post_init__(self):
        pairs = {
            TrojanTarget.CRC_DECODER: TrojanPayload.INVERT_ERROR_FLAG,
            TrojanTarget.KATAN32: TrojanPayload.FLIP_FIRST_LAST_CIPHER_BITS,
        }
        if pairs[self.target] is not self.payload:
            raise ValueError(f"payload {self.payload} does not match target {self.target}")
        if self.target is TrojanTarget.KATAN32:
            for name, taps, width in (
                ("trigger_key_bits", self.trigger_key_bits, KEY_BITS),
                ("trigger_pt_bits", self.trigger_pt_bits, BLOCK_BITS),
            ):
                if not taps:
                    raise ValueError(f"{name} must not be empty")
                if len(set(taps)) != len(taps):
                    raise ValueError(f"{name} has duplicate positions")
                if any(not 0 <= t < width for t in taps):
                    raise ValueError(f"{name} positions must lie in [0, {width})")


def crc_trojan_spec() -> TrojanSpec:
    return TrojanSpec(TrojanTarget.CRC_DECODER, TrojanPayload.INVERT_ERROR_FLAG)


def katan_trojan_spec(key_bits=tuple(range(8)), pt_bits=tuple(range(8))) -> TrojanSpec:
    return TrojanSpec(
        TrojanTarget.KATAN32,
        TrojanPayload.FLIP_FIRST_LAST_CIPHER_BITS,
        trigger_key_bits=tuple(key_bits),
        trigger_pt_bits=tuple(pt_bits),
    )


def _mask(taps) -> int:
    out = 0
    for t in taps:
        out |= 1 << t
    return out


def crc_trigger(message: Message) -> bool:
    """Fires when both the data parity and the check parity are odd."""
    return bool(parity(message.data) & parity(message.check))


def crc_verify_trojan(message: Message, config: CrcConfig) -> int:
    """Infected receiver: the error flag is inverted while triggered."""
    flag = verify(message, config)
    return flag ^ 1 if crc_trigger(message) else flag


def katan_trigger(plaintext: int, key: int, spec: TrojanSpec) -> bool:
    """Fires when the tapped key parity and tapped plaintext parity are both odd."""
    if spec.target is not TrojanTarget.KATAN32:
        raise ValueError("spec does not target katan32")
    return bool(
        parity(key & _mask(spec.trigger_key_bits))
        & parity(plaintext & _mask(spec.trigger_pt_bits))
    )


def encrypt32_trojan(plaintext: int, key: int, spec: TrojanSpec) -> int:
    """Infected cipher: flips ciphertext bits 31 and 0 while triggered."""
    ct = encrypt32(plaintext, key)
    if katan_trigger(plaintext, key, spec):
        ct ^= PAYLOAD_MASK_32
    return ct
