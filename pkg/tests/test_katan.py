import numpy as np
import pytest

from mtjbist.katan import (
    IR,
    N_ROUNDS,
    core_states,
    decrypt32,
    encrypt32,
    encrypt32_batch,
    key_stream,
    round_constants,
    round_toggle_trace,
)
from oracles import katan32_encrypt, katan32_states, katan_key_bits

ALL_ONES_KEY = (1 << 80) - 1


def test_published_vectors():
    assert encrypt32(0x00000000, ALL_ONES_KEY) == 0x7E1FF945
    assert encrypt32(0xFFFFFFFF, 0) == 0x432E61DA


def test_round_constants_regenerate_table():
    assert round_constants() == IR
    assert len(IR) == N_ROUNDS
    assert IR[:10] == (1, 1, 1, 1, 1, 1, 1, 0, 0, 0)


def test_matches_bit_list_oracle():
    rng = np.random.default_rng(123)
    for _ in range(60):
        pt = int(rng.integers(0, 1 << 32))
        key = int.from_bytes(rng.bytes(10), "big")
        assert encrypt32(pt, key) == katan32_encrypt(pt, key)


def test_round_by_round_states_match_oracle():
    for pt, key in [(0, ALL_ONES_KEY), (0xDEADBEEF, 0x0123456789ABCDEF0123), (1, 1)]:
        assert core_states(pt, key) == katan32_states(pt, key)


def test_state_timeline_endpoints():
    states = core_states(0xCAFEBABE, 42)
    assert len(states) == N_ROUNDS + 1
    assert states[0] == 0xCAFEBABE
    assert states[-1] == encrypt32(0xCAFEBABE, 42)


def test_roundtrip_random():
    rng = np.random.default_rng(7)
    for _ in range(150):
        pt = int(rng.integers(0, 1 << 32))
        key = int.from_bytes(rng.bytes(10), "big")
        assert decrypt32(encrypt32(pt, key), key) == pt


def test_key_stream_prefix_is_key():
    key = 0x9E3779B97F4A7C15F39D
    ks = key_stream(key, 100)
    assert ks[:80] == [(key >> i) & 1 for i in range(80)]
    assert key_stream(key, 600) == katan_key_bits(key, 600)


def test_avalanche_sanity():
    # flipping one plaintext bit flips roughly half the ciphertext bits
    rng = np.random.default_rng(9)
    flips = []
    for _ in range(50):
        pt = int(rng.integers(0, 1 << 32))
        key = int.from_bytes(rng.bytes(10), "big")
        bit = int(rng.integers(0, 32))
        delta = encrypt32(pt, key) ^ encrypt32(pt ^ (1 << bit), key)
        flips.append(delta.bit_count())
    assert 10 < np.mean(flips) < 22


def test_batch_matches_scalar():
    rng = np.random.default_rng(55)
    key = 0x0123456789ABCDEF0123
    pts = rng.integers(0, 1 << 32, size=300, dtype=np.uint64)
    batch = encrypt32_batch(pts, key)
    assert all(int(c) == encrypt32(int(p), key) for p, c in zip(pts, batch))


def test_no_collisions_in_large_plaintext_sample():
    rng = np.random.default_rng(2024)
    key = 0x9E3779B97F4A7C15F39D
    pts = np.unique(rng.integers(0, 1 << 32, size=100_000, dtype=np.uint64))
    cts = encrypt32_batch(pts, key)
    assert len(np.unique(cts)) == len(pts)


def test_toggle_trace_shape_and_bounds():
    trace = round_toggle_trace(0xA5A5A5A5, 0x9E3779B97F4A7C15F39D)
    assert trace.shape == (N_ROUNDS,)
    assert trace.min() >= 0
    # state is 32 core bits plus the 80-bit key window
    assert trace.max() <= 32 + 80


def test_toggle_trace_distinguishes_patterns():
    key = 0x9E3779B97F4A7C15F39D
    a = round_toggle_trace(0x00000001, key)
    b = round_toggle_trace(0x80000000, key)
    assert not np.array_equal(a, b)


def test_input_validation():
    with pytest.raises(ValueError):
        encrypt32(1 << 32, 0)
    with pytest.raises(ValueError):
        decrypt32(-1, 0)
    with pytest.raises(ValueError):
        encrypt32(0, 1 << 80)
