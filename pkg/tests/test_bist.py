import numpy as np
import pytest

from mtjbist.bist import (
    AttackSpec,
    ClockConfig,
    detection_coverage,
    frequency_sweep,
    inject_attack,
    message_bits,
    run_bist,
)
from mtjbist.crc import CrcConfig, encode
from mtjbist.mtj import MtjCell, MtjDelayModel, nominal_array

CRC8 = CrcConfig()
MODEL = MtjDelayModel()
N_CELLS = CRC8.data_width + CRC8.check_width


def infected_array(index: int, tm: float = 1.3) -> list[MtjCell]:
    cells = nominal_array(N_CELLS)
    cells[index] = MtjCell(tm_actual=tm)
    return cells


def test_default_clock_times():
    clock = ClockConfig()
    assert clock.period == 6.0
    assert clock.launch_time == pytest.approx(7.5)
    assert clock.sample_time == pytest.approx(12.0)


def test_clock_validation():
    with pytest.raises(ValueError):
        ClockConfig(half_period=0.0)
    with pytest.raises(ValueError):
        # sample edge at t=0 precedes the launch
        ClockConfig(sample_edge=1)


def test_clean_run_no_error():
    res = run_bist(0xA5, nominal_array(N_CELLS), ClockConfig(), CRC8, MODEL)
    assert res.error_flag == 0
    assert res.faulted_positions == frozenset()
    assert res.sensed_bits == message_bits(encode(0xA5, CRC8), CRC8)


def test_slowest_cell_still_clean_at_default_clock():
    # even a maximally thick cell finishes 7.5 + 2.26 < 12 ns
    res = run_bist(0xFF, [MtjCell(tm_actual=1.3) for _ in range(N_CELLS)], ClockConfig(), CRC8, MODEL)
    assert res.error_flag == 0


def test_infected_cell_detected_at_fast_clock():
    # gap = sample - launch = 1.5 * half_period = 2.1 ns < 2.26 ns delay
    clock = ClockConfig(half_period=1.4)
    res = run_bist(0x01, infected_array(0), clock, CRC8, MODEL)
    assert res.error_flag == 1
    assert res.faulted_positions == frozenset({0})
    # the stale cell reads back its old zero state
    assert res.sensed_bits[0] == 0


def test_untoggled_infected_cell_stays_silent():
    # pattern leaves cell 0 at its current state, so no transition, no fault
    clock = ClockConfig(half_period=1.4)
    res = run_bist(0x02, infected_array(0), clock, CRC8, MODEL)
    assert 0 not in res.faulted_positions


def test_error_flag_implies_sensed_differs():
    rng = np.random.default_rng(42)
    for _ in range(200):
        cells = [
            MtjCell(tm_actual=float(rng.uniform(0.8, 1.5)), state=int(rng.integers(0, 2)))
            for _ in range(N_CELLS)
        ]
        clock = ClockConfig(half_period=float(rng.uniform(0.8, 3.0)))
        pattern = int(rng.integers(0, 256))
        res = run_bist(pattern, cells, clock, CRC8, MODEL)
        launched = message_bits(encode(pattern, CRC8), CRC8)
        if res.error_flag:
            assert res.sensed_bits != launched
        if res.sensed_bits == launched:
            assert res.error_flag == 0


def test_run_bist_does_not_mutate_array():
    cells = infected_array(3)
    before = list(cells)
    run_bist(0xFF, cells, ClockConfig(half_period=1.0), CRC8, MODEL)
    assert cells == before


def test_run_bist_rejects_wrong_array_size():
    with pytest.raises(ValueError):
        run_bist(0x00, nominal_array(4), ClockConfig(), CRC8, MODEL)


def test_inject_attack():
    cells = nominal_array(N_CELLS)
    spec = AttackSpec(target_indices=(2, 5), thickness_multipliers=(1.3, 1.4))
    tampered = inject_attack(cells, spec)
    assert tampered[2].tm_actual == pytest.approx(1.3)
    assert tampered[5].tm_actual == pytest.approx(1.4)
    assert all(tampered[i].tm_actual == 1.0 for i in range(N_CELLS) if i not in (2, 5))
    assert cells[2].tm_actual == 1.0


def test_inject_attack_bad_index():
    with pytest.raises(ValueError):
        inject_attack(nominal_array(4), AttackSpec.uniform([9], 1.3))


def test_attack_spec_validation():
    with pytest.raises(ValueError):
        AttackSpec((0, 0), (1.2, 1.2))
    with pytest.raises(ValueError):
        AttackSpec((0,), (1.2, 1.3))
    with pytest.raises(ValueError):
        AttackSpec((0,), (-1.0,))


def test_attack_spec_random_deterministic():
    a = AttackSpec.random(16, 3, (1.2, 1.5), rng_seed=7)
    b = AttackSpec.random(16, 3, (1.2, 1.5), rng_seed=7)
    assert a == b
    assert len(a.target_indices) == 3
    assert all(1.2 <= m <= 1.5 for m in a.thickness_multipliers)


def test_sweep_rows_and_worst_half_period():
    array = infected_array(0)
    half_periods = [3.0, 1.4, 1.0]
    sweep = frequency_sweep(array, [0x01, 0x02], half_periods, CRC8, MODEL)
    assert len(sweep.rows) == 6
    # pattern 0x01 toggles the infected cell: silent at 3.0, flagged below
    assert sweep.largest_flagged_half_period[0x01] == pytest.approx(1.4)
    # pattern 0x02 never toggles cell 0
    assert sweep.largest_flagged_half_period[0x02] is None


def test_fault_set_grows_as_clock_shrinks():
    rng = np.random.default_rng(3)
    for _ in range(20):
        cells = [MtjCell(tm_actual=float(rng.uniform(0.8, 1.6))) for _ in range(N_CELLS)]
        pattern = int(rng.integers(0, 256))
        half_periods = np.linspace(3.0, 0.8, 12)
        previous: frozenset[int] = frozenset()
        for hp in half_periods:  # decreasing
            res = run_bist(pattern, cells, ClockConfig(half_period=float(hp)), CRC8, MODEL)
            assert res.faulted_positions >= previous
            previous = res.faulted_positions


def test_error_flag_monotone_single_infected_cell():
    array = infected_array(4)
    flags = []
    for hp in np.linspace(3.0, 0.8, 20):
        res = run_bist(0xFF, array, ClockConfig(half_period=float(hp)), CRC8, MODEL)
        flags.append(res.error_flag)
    # once the error appears on the shrinking grid it never goes away
    assert flags == sorted(flags)
    assert flags[0] == 0 and flags[-1] == 1


def test_coverage_healthy_array():
    report = detection_coverage(
        nominal_array(N_CELLS), ClockConfig(half_period=1.2), CRC8, MODEL, rng_seed=0, n_patterns=10
    )
    assert report.coverage == 1.0
    assert report.true_negative_run
    assert report.infected == frozenset()


def test_coverage_single_infected_with_complement():
    report = detection_coverage(
        infected_array(3),
        ClockConfig(half_period=1.2),
        CRC8,
        MODEL,
        rng_seed=0,
        n_patterns=4,
        include_complement=True,
    )
    assert report.infected == frozenset({3})
    assert report.coverage == 1.0
    assert not report.true_negative_run


def test_coverage_probability_matches_closed_form():
    # a random pattern toggles one given data cell with probability 1/2, so
    # an n-pattern campaign flags a single infected data cell with
    # probability 1 - 2^-n
    n_patterns, n_trials = 3, 1500
    hits = 0
    for seed in range(n_trials):
        report = detection_coverage(
            infected_array(3),
            ClockConfig(half_period=1.2),
            CRC8,
            MODEL,
            rng_seed=seed,
            n_patterns=n_patterns,
        )
        hits += report.coverage == 1.0
    expected = 1.0 - 2.0 ** -n_patterns
    assert hits / n_trials == pytest.approx(expected, abs=0.035)
