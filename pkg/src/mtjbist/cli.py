"""Command-line front end.

Exit codes: 0 for a clean run, 2 when tampering or a Trojan was detected
(an error flag fired or a trace was rejected), 1 on usage or config errors.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import bist, experiments, katan, mtj, trojan
from .bits import parse_hex, to_hex
from .circuits import (
    CrcDecoderCircuit,
    KatanCircuit,
    TrojanCrcDecoderCircuit,
    TrojanKatanCircuit,
)
from .config import ExperimentConfig, load_config
from .crc import encode
from .detector import (
    Decision,
    DetectorConfig,
    EvaluationSignal,
    ReferenceSignal,
    classify,
    evaluation_signal,
    score,
    threshold_from_reference,
)
from .traces import (
    NORMAL,
    TROJAN,
    Condition,
    ConditionKind,
    build_dataset,
    read_dataset,
    read_trace_csv,
    write_dataset,
)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # exit code 2 means a detection here, but argparse exits 2 on bad
    # usage, so route parse errors through our own exception instead
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _hex_list(text: str) -> list[str]:
    return [p for p in text.replace(",", " ").split() if p]


def _float_list(text: str) -> list[float]:
    return [float(p) for p in text.replace(",", " ").split() if p]


def _int_list(text: str) -> list[int]:
    return [int(p) for p in text.replace(",", " ").split() if p]


def build_parser() -> _Parser:
    common = _Parser(add_help=False)
    common.add_argument("--config", default=argparse.SUPPRESS, help="flat key = value config file")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="run seed (overrides config)")
    common.add_argument("--out", default=argparse.SUPPRESS, help="output directory (overrides config)")

    root = _Parser(prog="mtjbist", parents=[common], description=__doc__)
    sub = root.add_subparsers(dest="command", required=True)

    p_bist = sub.add_parser("bist", help="self-test runs on the MTJ array", parents=[common])
    bist_sub = p_bist.add_subparsers(dest="bist_command", required=True)
    p_run = bist_sub.add_parser("run", parents=[common], help="single launch/sample round")
    p_run.add_argument("--pattern", help="data pattern, hex (default: config reference pattern)")
    p_run.add_argument("--array", help="MTJ array table (default: config mtj.array or nominal)")
    p_run.add_argument("--half-period", type=float, help="clock half period in ns")
    p_run.set_defaults(func=cmd_bist_run)
    p_sweep = bist_sub.add_parser("sweep", parents=[common], help="pattern x frequency grid")
    p_sweep.add_argument("--patterns", help="comma-separated hex patterns")
    p_sweep.add_argument("--n-random", type=int, default=16, help="random patterns when --patterns absent")
    p_sweep.add_argument("--half-periods", help="comma-separated half periods in ns")
    p_sweep.add_argument("--array", help="MTJ array table")
    p_sweep.set_defaults(func=cmd_bist_sweep)

    p_attack = sub.add_parser("attack", help="tamper with an array description", parents=[common])
    attack_sub = p_attack.add_subparsers(dest="attack_command", required=True)
    p_inject = attack_sub.add_parser("inject", parents=[common], help="thicken selected free layers")
    p_inject.add_argument("--array", required=True, help="input array table")
    p_inject.add_argument("--out-array", required=True, help="where to write the tampered table")
    p_inject.add_argument("--targets", help="comma-separated cell indices")
    p_inject.add_argument("--multiplier", type=float, default=1.3, help="thickness multiplier for --targets")
    p_inject.add_argument("--random", type=int, metavar="N", help="instead tamper N random cells")
    p_inject.add_argument("--multiplier-range", default="1.2,1.5", help="lo,hi for --random")
    p_inject.set_defaults(func=cmd_attack_inject)

    p_trace = sub.add_parser("trace", help="current-trace synthesis", parents=[common])
    trace_sub = p_trace.add_subparsers(dest="trace_command", required=True)
    p_gen = trace_sub.add_parser("gen", parents=[common], help="generate a trace dataset directory")
    p_gen.add_argument("--circuit", choices=["crc", "katan"], default="crc")
    p_gen.add_argument(
        "--condition",
        choices=[k.value for k in ConditionKind],
        default="normal",
    )
    p_gen.add_argument("--pv-fraction", type=float, help="transistor length deviation, e.g. 0.1")
    p_gen.add_argument("--temperature", type=float, help="die temperature in Celsius")
    p_gen.add_argument("--n", type=int, help="traces per dataset (default: config)")
    p_gen.add_argument("--name", help="dataset directory name (default: <circuit>_<condition>)")
    p_gen.set_defaults(func=cmd_trace_gen)

    p_detect = sub.add_parser("detect", help="relational detector", parents=[common])
    detect_sub = p_detect.add_subparsers(dest="detect_command", required=True)
    p_eval = detect_sub.add_parser("eval", parents=[common], help="evaluate a dataset against a reference trace")
    p_eval.add_argument("dataset", help="dataset directory (manifest + trace CSVs)")
    p_eval.add_argument("reference", help="reference trace CSV")
    p_eval.add_argument("--threshold", type=float, help="acceptance threshold (default: mean of this evaluation signal)")
    p_eval.add_argument("--sensitivity", type=float, help="relative band half-width (default: config)")
    p_eval.set_defaults(func=cmd_detect_eval)
    p_score = detect_sub.add_parser("score", parents=[common], help="confusion counts from an evaluation CSV")
    p_score.add_argument("evaluation", help="evaluation.csv written by detect eval")
    p_score.add_argument("--threshold", type=float, required=True)
    p_score.add_argument(
        "--condition",
        choices=[k.value for k in ConditionKind],
        required=True,
        help="provenance of the scored dataset",
    )
    p_score.add_argument("--sensitivities", help="comma-separated levels (default: config)")
    p_score.set_defaults(func=cmd_detect_score)

    p_katan = sub.add_parser("katan", help="KATAN-32 block cipher", parents=[common])
    katan_sub = p_katan.add_subparsers(dest="katan_command", required=True)
    p_enc = katan_sub.add_parser("enc", parents=[common], help="encrypt one block")
    p_enc.add_argument("--key", required=True, help="80-bit key, 20 hex digits")
    p_enc.add_argument("--pt", required=True, help="32-bit plaintext, hex")
    p_enc.add_argument("--trojan", action="store_true", help="run the infected cipher")
    p_enc.set_defaults(func=cmd_katan_enc)
    p_dec = katan_sub.add_parser("dec", parents=[common], help="decrypt one block")
    p_dec.add_argument("--key", required=True, help="80-bit key, 20 hex digits")
    p_dec.add_argument("--ct", required=True, help="32-bit ciphertext, hex")
    p_dec.set_defaults(func=cmd_katan_dec)

    p_exp1 = sub.add_parser("exp1", parents=[common], help="CRC receiver identification experiment")
    p_exp1.set_defaults(func=cmd_exp1)
    p_exp2 = sub.add_parser("exp2", parents=[common], help="KATAN-32 identification experiment")
    p_exp2.set_defaults(func=cmd_exp2)

    p_report = sub.add_parser("report", parents=[common], help="summarize output files")
    p_report.add_argument("files", nargs="+", help="CSV or manifest files written by this tool")
    p_report.set_defaults(func=cmd_report)

    return root


def _load_array(config: ExperimentConfig, path: str | None) -> list[mtj.MtjCell]:
    crc = config.crc()
    n = crc.data_width + crc.check_width
    source = path or config.mtj_array_path
    if source:
        cells = mtj.load_array(source)
        if len(cells) != n:
            raise ValueError(f"array {source} has {len(cells)} cells, message needs {n}")
        return cells
    return mtj.nominal_array(n)


def _write_bist_csv(path, rows, data_width: int) -> None:
    with open(path, "w") as fh:
        fh.write("half_period_ns,pattern_hex,error_flag,faulted_indices\n")
        for hp, pattern, flag, faulted in rows:
            cells = ";".join(str(i) for i in sorted(faulted))
            fh.write(f"{hp:.10g},{to_hex(pattern, data_width)},{flag},{cells}\n")


def cmd_bist_run(args, config: ExperimentConfig) -> int:
    crc = config.crc()
    array = _load_array(config, args.array)
    clock = config.clock(args.half_period)
    pattern = (
        parse_hex(args.pattern, crc.data_width)
        if args.pattern
        else config.crc_reference_pattern
    )
    res = bist.run_bist(pattern, array, clock, crc, config.delay_model())
    os.makedirs(config.out, exist_ok=True)
    out_csv = os.path.join(config.out, "bist_results.csv")
    _write_bist_csv(
        out_csv,
        [(clock.half_period, pattern, res.error_flag, res.faulted_positions)],
        crc.data_width,
    )
    verdict = "ERROR" if res.error_flag else "clean"
    print(
        f"pattern {to_hex(pattern, crc.data_width)} at half period "
        f"{clock.half_period:g} ns: {verdict} "
        f"(launch {res.launch_time:g} ns, sample {res.sample_time:g} ns)"
    )
    print(f"wrote {out_csv}")
    return 2 if res.error_flag else 0


def cmd_bist_sweep(args, config: ExperimentConfig) -> int:
    crc = config.crc()
    array = _load_array(config, args.array)
    if args.patterns:
        patterns = [parse_hex(p, crc.data_width) for p in _hex_list(args.patterns)]
    else:
        rng = np.random.default_rng(config.seed)
        patterns = [int(p) for p in rng.integers(0, 1 << crc.data_width, size=args.n_random)]
    if args.half_periods:
        half_periods = _float_list(args.half_periods)
    else:
        half_periods = [float(h) for h in np.linspace(3.0, 0.75, 10)]
    sweep = bist.frequency_sweep(
        array,
        patterns,
        half_periods,
        crc,
        config.delay_model(),
        launch_offset_cycles=config.clock_launch_offset_cycles,
        sample_edge=config.clock_sample_edge,
    )
    os.makedirs(config.out, exist_ok=True)
    out_csv = os.path.join(config.out, "bist_results.csv")
    _write_bist_csv(
        out_csv,
        [(r.half_period, r.pattern, r.error_flag, r.faulted_positions) for r in sweep.rows],
        crc.data_width,
    )
    n_flagged = sum(r.error_flag for r in sweep.rows)
    print(f"{len(sweep.rows)} runs, {n_flagged} raised the error flag; wrote {out_csv}")
    for p in patterns:
        worst = sweep.largest_flagged_half_period[p]
        if worst is not None:
            print(f"pattern {to_hex(p, crc.data_width)}: flagged up to half period {worst:g} ns")
    return 2 if n_flagged else 0


def cmd_attack_inject(args, config: ExperimentConfig) -> int:
    cells = mtj.load_array(args.array)
    if args.random is not None:
        lo, hi = _float_list(args.multiplier_range)
        spec = bist.AttackSpec.random(len(cells), args.random, (lo, hi), config.seed)
    elif args.targets:
        spec = bist.AttackSpec.uniform(_int_list(args.targets), args.multiplier)
    else:
        raise UsageError("attack inject: need --targets or --random")
    tampered = bist.inject_attack(cells, spec)
    mtj.save_array(args.out_array, tampered)
    model = config.delay_model()
    bad = [i for i, c in enumerate(tampered) if mtj.is_malicious(c, model)]
    print(
        f"tampered cells {list(spec.target_indices)} -> {args.out_array}; "
        f"now outside tolerance: {bad}"
    )
    return 0


def cmd_trace_gen(args, config: ExperimentConfig) -> int:
    params = config.trace_params()
    kind = ConditionKind(args.condition)
    if kind is ConditionKind.PROCESS_VARIATION:
        if args.pv_fraction is None:
            raise UsageError("trace gen: --pv-fraction required for process_variation")
        condition = Condition(kind, pv_length_fraction=args.pv_fraction)
    elif kind is ConditionKind.TEMPERATURE:
        if args.temperature is None:
            raise UsageError("trace gen: --temperature required for temperature")
        condition = Condition(kind, temperature_c=args.temperature)
    else:
        condition = Condition(kind)

    pattern_filter = None
    if args.circuit == "crc":
        crc = config.crc()
        if kind is ConditionKind.TROJAN:
            circuit = TrojanCrcDecoderCircuit(config.crc_trojan(), crc)
            pattern_filter = lambda p: trojan.crc_trigger(encode(p, crc))
        else:
            circuit = CrcDecoderCircuit(crc)
        pattern_bits = crc.data_width
    else:
        key = config.katan_key
        if kind is ConditionKind.TROJAN:
            spec = config.katan_trojan()
            circuit = TrojanKatanCircuit(key, spec)
            pattern_filter = lambda p: trojan.katan_trigger(p, key, spec)
        else:
            circuit = KatanCircuit(key)
        pattern_bits = 32

    n = args.n if args.n is not None else config.detector_n_patterns
    dataset = build_dataset(
        circuit,
        condition,
        n_patterns=n,
        seed=config.seed,
        params=params,
        pattern_filter=pattern_filter,
    )
    name = args.name or f"{circuit.name}_{kind.value}"
    out_dir = os.path.join(config.out, name)
    write_dataset(dataset, out_dir, circuit_name=circuit.name, pattern_bits=pattern_bits)
    print(f"wrote {len(dataset)} traces under {out_dir}")
    return 0


def cmd_detect_eval(args, config: ExperimentConfig) -> int:
    dataset = read_dataset(args.dataset)
    reference = ReferenceSignal(read_trace_csv(args.reference))
    signal = evaluation_signal(reference, dataset, config.detector_normalized)
    threshold = args.threshold if args.threshold is not None else float(np.mean(signal.values))
    sensitivity = args.sensitivity if args.sensitivity is not None else config.detector_sensitivity
    decisions = classify(signal, DetectorConfig(threshold, sensitivity))
    os.makedirs(config.out, exist_ok=True)
    out_csv = os.path.join(config.out, "evaluation.csv")
    with open(out_csv, "w") as fh:
        fh.write("index,value,decision\n")
        for i, (v, d) in enumerate(zip(signal.values, decisions)):
            fh.write(f"{i},{v:.10g},{d.value}\n")
    n_rej = sum(1 for d in decisions if d is Decision.REJECT)
    print(
        f"threshold {threshold:.10g}, sensitivity {sensitivity:g}: "
        f"{len(decisions) - n_rej} accepted, {n_rej} rejected; wrote {out_csv}"
    )
    return 2 if n_rej else 0


def cmd_detect_score(args, config: ExperimentConfig) -> int:
    values = []
    with open(args.evaluation) as fh:
        header = fh.readline().strip().split(",")
        try:
            v_col = header.index("value")
        except ValueError:
            raise ValueError(f"{args.evaluation}: no 'value' column")
        for raw in fh:
            if raw.strip():
                values.append(float(raw.split(",")[v_col]))
    signal = EvaluationSignal(np.array(values))
    condition_kind = ConditionKind(args.condition)
    condition = TROJAN if condition_kind is ConditionKind.TROJAN else NORMAL
    levels = _float_list(args.sensitivities) if args.sensitivities else list(config.detector_sensitivities)
    os.makedirs(config.out, exist_ok=True)
    out_csv = os.path.join(config.out, "confusion.csv")
    detected = False
    with open(out_csv, "w") as fh:
        fh.write("sensitivity,tp,fp,tn,fn\n")
        for s in levels:
            counts = score(classify(signal, DetectorConfig(args.threshold, s)), condition)
            if counts.tp or counts.fp:
                detected = True
            fh.write(f"{s:.10g},{counts.tp},{counts.fp},{counts.tn},{counts.fn}\n")
    print(f"wrote {out_csv}")
    return 2 if detected else 0


def cmd_katan_enc(args, config: ExperimentConfig) -> int:
    key = parse_hex(args.key, 80)
    pt = parse_hex(args.pt, 32)
    if args.trojan:
        ct = trojan.encrypt32_trojan(pt, key, config.katan_trojan())
    else:
        ct = katan.encrypt32(pt, key)
    print(to_hex(ct, 32))
    return 0


def cmd_katan_dec(args, config: ExperimentConfig) -> int:
    key = parse_hex(args.key, 80)
    ct = parse_hex(args.ct, 32)
    print(to_hex(katan.decrypt32(ct, key), 32))
    return 0


def _print_experiment(result, name: str) -> None:
    print(f"{name}: threshold {result.threshold:.10g}")
    for ds_name, decisions in result.decisions.items():
        n_rej = sum(1 for d in decisions if d is Decision.REJECT)
        print(f"  {ds_name}: {len(decisions) - n_rej} accepted, {n_rej} rejected")


def cmd_exp1(args, config: ExperimentConfig) -> int:
    result = experiments.run_crc_identification(config)
    out_dir = os.path.join(config.out, "exp1")
    experiments.write_experiment(result, config, out_dir, experiments.crc_circuit_names(result))
    _print_experiment(result, "exp1")
    print(f"wrote {out_dir}")
    return 2 if experiments.any_rejection(result) else 0


def cmd_exp2(args, config: ExperimentConfig) -> int:
    result = experiments.run_katan_identification(config)
    out_dir = os.path.join(config.out, "exp2")
    experiments.write_experiment(result, config, out_dir, experiments.katan_circuit_names(result))
    _print_experiment(result, "exp2")
    print(f"wrote {out_dir}")
    return 2 if experiments.any_rejection(result) else 0


# ---------------------------------------------------------------------------
# report: summarize any file this tool writes

def _report_csv(path) -> None:
    with open(path) as fh:
        header = fh.readline().strip().split(",")
        rows = [line.strip().split(",") for line in fh if line.strip()]
    print(f"{path}: {len(rows)} rows, columns {header}")
    for j, col in enumerate(header):
        cells = [r[j] for r in rows if j < len(r)]
        try:
            nums = [float(c) for c in cells]
        except ValueError:
            tally: dict[str, int] = {}
            for c in cells:
                tally[c] = tally.get(c, 0) + 1
            parts = ", ".join(f"{k}: {v}" for k, v in sorted(tally.items())[:6])
            print(f"  {col}: {parts}")
            continue
        if nums:
            print(f"  {col}: min {min(nums):.6g}, max {max(nums):.6g}, mean {sum(nums) / len(nums):.6g}")


def _report_kv(path) -> None:
    with open(path) as fh:
        lines = [line.rstrip() for line in fh if line.strip()]
    print(f"{path}: {len(lines)} entries")
    for line in lines[:40]:
        print(f"  {line}")


def cmd_report(args, config: ExperimentConfig) -> int:
    for path in args.files:
        with open(path) as fh:
            first = fh.readline()
        if "," in first:
            _report_csv(path)
        else:
            _report_kv(path)
    return 0


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        config = load_config(args.config) if hasattr(args, "config") else ExperimentConfig()
        if hasattr(args, "seed"):
            config.seed = args.seed
        if hasattr(args, "out"):
            config.out = args.out
        return args.func(args, config)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
