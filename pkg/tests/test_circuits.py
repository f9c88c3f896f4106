import pytest

from mtjbist.circuits import (
    CrcDecoderCircuit,
    KatanCircuit,
    TrojanCrcDecoderCircuit,
    TrojanKatanCircuit,
)
from mtjbist.crc import CrcConfig, decoder_register_states, encode
from mtjbist.katan import core_states, key_stream, round_toggle_trace
from mtjbist.traces import toggle_profile
from mtjbist.trojan import (
    crc_trigger,
    crc_trojan_spec,
    katan_trigger,
    katan_trojan_spec,
)

KEY = 0x9E3779B97F4A7C15F39D


def test_crc_circuit_states_follow_decoder_register():
    circ = CrcDecoderCircuit()
    config = CrcConfig()
    for pattern in (0x00, 0x01, 0xA5, 0xFF):
        msg = encode(pattern, config)
        expected = decoder_register_states(
            msg.packed(config), config.data_width + config.check_width, config
        )
        assert circ.states(pattern) == expected


def test_crc_circuit_shape_and_name():
    circ = CrcDecoderCircuit()
    assert circ.input_width == 8
    assert circ.n_steps == 16
    assert len(circ.states(0x5A)) == 17
    assert circ.name == "crc_decoder"
    assert circ.activation_steps(0x5A) == ()
    assert circ.trigger_toggles == 0


def test_trojan_crc_circuit_activation_iff_trigger():
    clean = CrcDecoderCircuit()
    circ = TrojanCrcDecoderCircuit(crc_trojan_spec())
    config = CrcConfig()
    fired = 0
    for pattern in range(256):
        assert circ.states(pattern) == clean.states(pattern)
        steps = circ.activation_steps(pattern)
        if crc_trigger(encode(pattern, config)):
            fired += 1
            assert steps == (circ.n_steps - 1,)
        else:
            assert steps == ()
    assert fired == 128
    assert circ.trigger_toggles == 16
    assert circ.name == "crc_decoder_trojan"


def test_trojan_crc_circuit_rejects_katan_spec():
    with pytest.raises(ValueError):
        TrojanCrcDecoderCircuit(katan_trojan_spec())
    with pytest.raises(ValueError):
        TrojanKatanCircuit(KEY, crc_trojan_spec())


def test_katan_circuit_matches_round_trace():
    circ = KatanCircuit(KEY)
    for pattern in (0x00000000, 0xA5A5A5A5, 0xDEADBEEF):
        profile = toggle_profile(circ, pattern)
        assert profile.tolist() == list(round_toggle_trace(pattern, KEY))


def test_katan_circuit_initial_state_embeds_plaintext():
    circ = KatanCircuit(KEY)
    states = circ.states(0x12345678)
    assert states[0] & 0xFFFFFFFF == 0x12345678
    assert len(states) == 255
    assert circ.n_steps == 254
    assert circ.input_width == 32
    assert circ.name == "katan32"


def test_katan_circuit_key_window_advances():
    circ = KatanCircuit(KEY)
    states = circ.states(0)
    ks = key_stream(KEY, 2 * 254 + 80)
    for step in (0, 100, 254):
        window = (states[step] >> 32) & ((1 << 80) - 1)
        expected = 0
        for i, b in enumerate(ks[2 * step : 2 * step + 80]):
            expected |= b << i
        assert window == expected


def test_trojan_katan_circuit_activation():
    spec = katan_trojan_spec()
    circ = TrojanKatanCircuit(KEY, spec)
    clean = KatanCircuit(KEY)
    hits = 0
    for pattern in range(0, 4096, 37):
        assert circ.states(pattern) == clean.states(pattern)
        steps = circ.activation_steps(pattern)
        if katan_trigger(pattern, KEY, spec):
            hits += 1
            assert steps == (circ.n_steps - 1,)
        else:
            assert steps == ()
    assert hits > 0
    assert circ.trigger_toggles == 16
    assert circ.name == "katan32_trojan"


def test_core_states_agree_with_circuit_low_bits():
    circ = KatanCircuit(KEY)
    states = circ.states(0x0F0F0F0F)
    cores = core_states(0x0F0F0F0F, KEY)
    assert [s & 0xFFFFFFFF for s in states] == list(cores)


def test_toggle_profile_bounds():
    profile = toggle_profile(KatanCircuit(KEY), 0xA5A5A5A5)
    assert profile.shape == (254,)
    assert (profile >= 0).all()
    assert (profile <= 32 + 80).all()


def test_input_validation():
    with pytest.raises(ValueError):
        CrcDecoderCircuit().states(256)
    with pytest.raises(ValueError):
        KatanCircuit(KEY).states(1 << 32)
    with pytest.raises(ValueError):
        KatanCircuit(-1)
