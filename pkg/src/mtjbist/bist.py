"""BIST harness: encode a pattern, push it through the MTJ array, decode.

Timeline per test run (times in ns, clock rising edges at 0, period,
2*period, ...):

  launch_time  = launch_offset_cycles * period     (default 7.5 at 3 ns
                                                    half period)
  sample_time  = (sample_edge - 1) * period        (default 12.0, the third
                                                    rising edge)

At launch every bit of the encoded message (data then check, one bit per
cell) is written into the array; at sample every cell is sensed and the
sensed message is fed to the CRC receiver. A healthy array finishes all
transitions before the sample edge, so the error flag stays at logic zero;
a slowed-down cell can still be mid-transition and return its stale state,
which the CRC decoder flags.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .crc import CrcConfig, Message, encode, verify
from .mtj import MtjCell, MtjDelayModel, apply_bit, is_malicious, sense


@dataclass(frozen=True)
class ClockConfig:
    half_period: float = 3.0
    launch_offset_cycles: float = 1.25
    sample_edge: int = 3

    def __post_init__(self):
        if self.half_period <= 0:
            raise ValueError("half_period must be positive")
        if self.launch_offset_cycles <= 0:
            raise ValueError("launch_offset_cycles must be positive")
        if self.sample_edge < 1:
            raise ValueError("sample_edge must be >= 1")
        if self.launch_time >= self.sample_time:
            raise ValueError("launch must precede the sample edge")

    @property
    def period(self) -> float:
        return 2.0 * self.half_period

    @property
    def launch_time(self) -> float:
        return self.launch_offset_cycles * self.period

    @property
    def sample_time(self) -> float:
        return (self.sample_edge - 1) * self.period


@dataclass(frozen=True)
class BistResult:
    pattern: int
    error_flag: int
    sensed_bits: tuple[int, ...]
    faulted_positions: frozenset[int]
    launch_time: float
    sample_time: float


@dataclass(frozen=True)
class AttackSpec:
    """Fabrication-time thickness tampering on selected cells."""

    target_indices: tuple[int, ...]
    thickness_multipliers: tuple[float, ...]

    def __post_init__(self):
        if len(self.target_indices) != len(self.thickness_multipliers):
            raise ValueError("one multiplier per target index")
        if len(set(self.target_indices)) != len(self.target_indices):
            raise ValueError("duplicate target index")
        if any(m <= 0 for m in self.thickness_multipliers):
            raise ValueError("multipliers must be positive")

    @classmethod
    def uniform(cls, target_indices, multiplier: float) -> "AttackSpec":
        targets = tuple(target_indices)
        return cls(targets, (float(multiplier),) * len(targets))

    @classmethod
    def random(cls, n_cells: int, n_targets: int, multiplier_range: tuple[float, float], rng_seed: int) -> "AttackSpec":
        """Randomized variant: seeded choice of targets and multipliers."""
        if not 0 < n_targets <= n_cells:
            raise ValueError("need 0 < n_targets <= n_cells")
        rng = np.random.default_rng(rng_seed)
        targets = tuple(int(i) for i in rng.choice(n_cells, size=n_targets, replace=False))
        lo, hi = multiplier_range
        mults = tuple(float(m) for m in rng.uniform(lo, hi, size=n_targets))
        return cls(targets, mults)


def inject_attack(array: list[MtjCell], spec: AttackSpec) -> list[MtjCell]:
    """Return a copy of the array with tampered free-layer thicknesses."""
    for idx in spec.target_indices:
        if not 0 <= idx < len(array):
            raise ValueError(f"target index {idx} outside array of {len(array)} cells")
    bump = dict(zip(spec.target_indices, spec.thickness_multipliers))
    out = []
    for i, cell in enumerate(array):
        if i in bump:
            cell = MtjCell(
                tm_nominal=cell.tm_nominal,
                tm_actual=cell.tm_actual * bump[i],
                state=cell.state,
                pending=cell.pending,
            )
        out.append(cell)
    return out


def message_bits(msg: Message, config: CrcConfig) -> tuple[int, ...]:
    """Cell assignment: cells 0..d-1 carry data bits 0..d-1 (bit i is the
    2^i coefficient), cells d..d+g-1 carry check bits the same way."""
    d, g = config.data_width, config.check_width
    return tuple((msg.data >> i) & 1 for i in range(d)) + tuple((msg.check >> i) & 1 for i in range(g))


def run_bist(
    pattern: int,
    array: list[MtjCell],
    clock: ClockConfig,
    crc: CrcConfig,
    model: MtjDelayModel,
) -> BistResult:
    """One launch/sample round. Returns the decode verdict and the sensed bits.

    The array is not mutated; cells with writes still pending at call time
    raise (the harness serializes rounds).
    """
    d, g = crc.data_width, crc.check_width
    if len(array) != d + g:
        raise ValueError(f"array has {len(array)} cells, message needs {d + g}")
    launched = message_bits(encode(pattern, crc), crc)
    t0, t1 = clock.launch_time, clock.sample_time
    sensed = []
    for cell, bit in zip(array, launched):
        written = apply_bit(cell, bit, t0, model)
        level, _ = sense(written, t1)
        sensed.append(level)
    sensed_data = sum(b << i for i, b in enumerate(sensed[:d]))
    sensed_check = sum(b << i for i, b in enumerate(sensed[d:]))
    flag = verify(Message(sensed_data, sensed_check), crc)
    faulted = frozenset(i for i, (s, l) in enumerate(zip(sensed, launched)) if s != l)
    return BistResult(
        pattern=pattern,
        error_flag=flag,
        sensed_bits=tuple(sensed),
        faulted_positions=faulted,
        launch_time=t0,
        sample_time=t1,
    )


@dataclass(frozen=True)
class SweepRow:
    half_period: float
    pattern: int
    error_flag: int
    faulted_positions: frozenset[int]


@dataclass(frozen=True)
class SweepResult:
    rows: tuple[SweepRow, ...]
    # per pattern, the largest half period at which the error flag fired
    # (None when the pattern never fired anywhere on the grid)
    largest_flagged_half_period: dict[int, float | None]


def frequency_sweep(
    array: list[MtjCell],
    patterns,
    half_periods,
    crc: CrcConfig,
    model: MtjDelayModel,
    launch_offset_cycles: float = 1.25,
    sample_edge: int = 3,
) -> SweepResult:
    """Run every pattern at every clock setting, each on a fresh array copy."""
    rows = []
    worst: dict[int, float | None] = {int(p): None for p in patterns}
    for hp in half_periods:
        clock = ClockConfig(half_period=float(hp), launch_offset_cycles=launch_offset_cycles, sample_edge=sample_edge)
        for p in patterns:
            res = run_bist(int(p), list(array), clock, crc, model)
            rows.append(SweepRow(float(hp), int(p), res.error_flag, res.faulted_positions))
            if res.error_flag:
                prev = worst[int(p)]
                if prev is None or hp > prev:
                    worst[int(p)] = float(hp)
    return SweepResult(rows=tuple(rows), largest_flagged_half_period=worst)


@dataclass(frozen=True)
class CoverageReport:
    infected: frozenset[int]
    flagged_infected: frozenset[int]
    coverage: float
    n_patterns: int
    # no infected cell and no error flag over the whole run
    true_negative_run: bool


def detection_coverage(
    array: list[MtjCell],
    clock: ClockConfig,
    crc: CrcConfig,
    model: MtjDelayModel,
    rng_seed: int,
    n_patterns: int,
    include_complement: bool = False,
) -> CoverageReport:
    """Random-pattern campaign at one test clock.

    Coverage is |flagged infected cells| / |infected cells| where a cell
    counts as flagged when it faulted in a run whose error flag fired.
    include_complement prepends the bitwise complement of the data cells'
    current states, the pattern guaranteed to toggle every data cell.
    """
    if n_patterns < 1:
        raise ValueError("n_patterns must be >= 1")
    d = crc.data_width
    rng = np.random.default_rng(rng_seed)
    patterns = [int(p) for p in rng.integers(0, 1 << d, size=n_patterns)]
    if include_complement:
        states = sum(int(array[i].state) << i for i in range(d))
        patterns = [states ^ ((1 << d) - 1)] + patterns
    infected = frozenset(i for i, c in enumerate(array) if is_malicious(c, model))
    flagged: set[int] = set()
    any_error = False
    for p in patterns:
        res = run_bist(p, array, clock, crc, model)
        if res.error_flag:
            any_error = True
            flagged |= res.faulted_positions
    flagged_infected = frozenset(flagged & infected)
    coverage = len(flagged_infected) / len(infected) if infected else 1.0
    return CoverageReport(
        infected=infected,
        flagged_infected=flagged_infected,
        coverage=coverage,
        n_patterns=len(patterns),
        true_negative_run=(not infected and not any_error),
    )
