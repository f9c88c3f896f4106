"""Bit-level circuit adapters consumed by the current-trace generator.

A circuit exposes:

  input_width        bits of one applied stimulus pattern
  n_steps            timesteps a run takes (same for every pattern)
  states(pattern)    n_steps + 1 register snapshots packed into ints; the
                     toggle count of step t is the Hamming distance between
                     snapshots t and t + 1
  activation_steps(pattern)   steps at which embedded malicious logic fires
                              (empty for clean circuits)
  trigger_toggles    extra switching the trigger logic contributes at an
                     activation step
"""

from __future__ import annotations

from .crc import CrcConfig, encode, decoder_register_states
from .katan import KEY_BITS, N_ROUNDS, BLOCK_BITS, core_states, key_stream
from .trojan import TrojanSpec, TrojanTarget, crc_trigger, katan_trigger


class CrcDecoderCircuit:
    """Serial CRC receiver digesting the encoded message of a test pattern."""

    def __init__(self, config: CrcConfig | None = None):
        self.config = config or CrcConfig()
        self.name = "crc_decoder"

    @property
    def input_width(self) -> int:
        return self.config.data_width

    @property
    def n_steps(self) -> int:
        return self.config.data_width + self.config.check_width

    def states(self, pattern: int) -> list[int]:
        msg = encode(pattern, self.config)
        return decoder_register_states(msg.packed(self.config), self.n_steps, self.config)

    def activation_steps(self, pattern: int) -> tuple[int, ...]:
        return ()

    trigger_toggles = 0


class TrojanCrcDecoderCircuit(CrcDecoderCircuit):
    """CRC receiver with the parity-AND trigger; fires at the decode step."""

    def __init__(self, spec: TrojanSpec, config: CrcConfig | None = None):
        if spec.target is not TrojanTarget.CRC_DECODER:
            raise ValueError("spec does not target the CRC decoder")
        super().__init__(config)
        self.spec = spec
        self.name = "crc_decoder_trojan"

    def activation_steps(self, pattern: int) -> tuple[int, ...]:
        if crc_trigger(encode(pattern, self.config)):
            return (self.n_steps - 1,)
        return ()

    @property
    def trigger_toggles(self) -> int:
        # both parity trees re-evaluate when the trigger fires
        return self.config.data_width + self.config.check_width


class KatanCircuit:
    """KATAN-32 encryption under a fixed device key; the pattern is the plaintext.

    Snapshots pack L1 || L2 (32 bits) with the key LFSR's 80-bit window above
    them, so per-step toggles stay bounded by 32 + 80.
    """

    input_width = BLOCK_BITS
    n_steps = N_ROUNDS

    def __init__(self, key: int):
        if key < 0 or key >> KEY_BITS:
            raise ValueError(f"key must fit in {KEY_BITS} bits")
        self.key = key
        self.name = "katan32"

    def states(self, pattern: int) -> list[int]:
        cores = core_states(pattern, self.key)
        ks = key_stream(self.key, 2 * N_ROUNDS + KEY_BITS)
        out = []
        for r, core in enumerate(cores):
            window = 0
            for i in range(KEY_BITS):
                window |= ks[2 * r + i] << i
            out.append(core | (window << BLOCK_BITS))
        return out

    def activation_steps(self, pattern: int) -> tuple[int, ...]:
        return ()

    trigger_toggles = 0


class TrojanKatanCircuit(KatanCircuit):
    """KATAN-32 with the parity-AND trigger; fires at the final round."""

    def __init__(self, key: int, spec: TrojanSpec):
        if spec.target is not TrojanTarget.KATAN32:
            raise ValueError("spec does not target katan32")
        super().__init__(key)
        self.spec = spec
        self.name = "katan32_trojan"

    def activation_steps(self, pattern: int) -> tuple[int, ...]:
        if katan_trigger(pattern, self.key, self.spec):
            return (self.n_steps - 1,)
        return ()

    @property
    def trigger_toggles(self) -> int:
        return len(self.spec.trigger_key_bits) + len(self.spec.trigger_pt_bits)
