"""Behavioral models for MTJ-based self-test, tampering, and current-signature
Trojan identification.

The package covers the full loop: an MTJ cell array with a thickness-dependent
switching-delay model, a CRC-protected BIST harness that turns slowed-down
cells into transition-delay faults, toggle-count current traces for a CRC
receiver and the KATAN-32 cipher, parametric Trojans for both, and a
cross-correlation detector that separates infected devices from process and
temperature variation.
"""

from .bist import (
    AttackSpec,
    BistResult,
    ClockConfig,
    CoverageReport,
    SweepResult,
    SweepRow,
    detection_coverage,
    frequency_sweep,
    inject_attack,
    run_bist,
)
from .bits import parity, parse_hex, to_hex
from .circuits import (
    CrcDecoderCircuit,
    KatanCircuit,
    TrojanCrcDecoderCircuit,
    TrojanKatanCircuit,
)
from .config import ExperimentConfig, load_config, parse_config_text
from .crc import CrcConfig, Message, crc_remainder, decoder_register_states, encode, verify
from .detector import (
    DEFAULT_SENSITIVITY,
    SENSITIVITY_LEVELS,
    ConfusionCounts,
    Decision,
    DetectorConfig,
    EvaluationSignal,
    ReferenceSignal,
    classify,
    cross_correlation,
    evaluation_signal,
    relational_detector,
    score,
    threshold_from_reference,
)
from .experiments import (
    ExperimentResult,
    child_seeds,
    run_crc_identification,
    run_katan_identification,
    write_experiment,
)
from .katan import (
    core_states,
    decrypt32,
    encrypt32,
    encrypt32_batch,
    key_stream,
    round_toggle_trace,
)
from .mtj import (
    MtjCell,
    MtjDelayModel,
    MtjLogicState,
    PendingTransition,
    apply_bit,
    is_malicious,
    load_array,
    nominal_array,
    save_array,
    sense,
    switching_delay,
)
from .traces import (
    NORMAL,
    PV_FRACTION_RANGE,
    TEMPERATURE_RANGE_C,
    TROJAN,
    Condition,
    ConditionKind,
    CurrentTrace,
    Dataset,
    TraceParams,
    build_dataset,
    read_dataset,
    read_trace_csv,
    simulate_trace,
    toggle_profile,
    write_dataset,
    write_trace_csv,
)
from .trojan import (
    PAYLOAD_MASK_32,
    TrojanPayload,
    TrojanSpec,
    TrojanTarget,
    crc_trigger,
    crc_trojan_spec,
    crc_verify_trojan,
    encrypt32_trojan,
    katan_trigger,
    katan_trojan_spec,
)

__version__ = "0.1.0"
