"""``gg`` command-line harness: experiment sweeps, prompt studies,
standalone scoring, the offline oracle, and histogram emission.

Exit codes: 0 success, 2 config error, 3 backend error, 4 oracle too large.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from . import activity, oracle
from .errors import (BackendError, ConfigError, GGError, OracleTooLargeError)
from .narrator import DEFAULT_WINDOW, ObservationHistory, narrate
from .policy import PolicyKind
from .reasoner import DEFAULT_BINDING_SEQUENCE, PromptSpec, compute_relevancy
from .scoring import make_backend
from .semantic_map import load_map
from .sim import DEFAULT_HORIZON, SimConfig, run_batch

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_BACKEND = 3
EXIT_ORACLE_TOO_LARGE = 4

# Prompt-variation grid: (variant, narration template, binding sequence).
PROMPT_GRID = [
    ("P0", "activity-history", "Next, they will go to the "),
    ("P1", "activity-history", "The next object they are walking to is the "),
    ("P2", "activity-history", "After this, they are going to interact with the "),
    ("P3", "activity-history", "The most tasty object in the world is the "),
    ("P4", "none", "The most expensive object in the world is the "),
    ("P5", "none", "Next, they will go to the "),
]

CSV_HEADER = ["restart", "policy", "env", "program", "T_r", "seed",
              "D_T", "t_c", "failed"]


def _read_config_file(path):
    try:
        with open(path, "rb") as fh:
            return tomllib.load(fh)
    except (OSError, tomllib.TOMLDecodeError) as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc


def _apply_config_defaults(args):
    """Config file supplies defaults; explicit CLI flags win."""
    if not getattr(args, "config", None):
        return args
    values = _read_config_file(args.config)
    for key, value in values.items():
        attr = key.replace("-", "_")
        if not hasattr(args, attr):
            raise ConfigError(f"unknown config key {key!r}")
        if args.subparser.get_default(attr) == getattr(args, attr):
            setattr(args, attr, value)
    return args


def _load_durations(path):
    if not path:
        return None
    table = _read_config_file(path)
    return {str(k): int(v) for k, v in table.items()}


def _require_file(path, what):
    if not Path(path).is_file():
        raise ConfigError(f"{what} not found: {path}")
    return path


def _load_inputs(args):
    smap = load_map(_require_file(args.map, "map file"))
    durations = _load_durations(getattr(args, "duration_table", None))
    text = Path(_require_file(args.program, "program file")).read_text(encoding="utf-8")
    program = activity.parse_program(text, name=Path(args.program).stem,
                                     durations=durations)
    binding = activity.bind_items(program, smap, rng_seed=args.seed)
    trace = activity.simulate_human(program, binding, smap, horizon=args.horizon)
    return smap, program, trace


def _csv_bytes(rows):
    buf = io.StringIO(newline="")
    writer = csv.writer(buf, lineterminator="\n")
    for row in rows:
        writer.writerow(row)
    return buf.getvalue().encode("utf-8")


def _metric_rows(metrics, policy, env, program, room_time, seed):
    rows = []
    for m in metrics:
        rows.append([
            m.restart_index, policy.value, env, program, room_time, seed,
            m.disturbance,
            "" if m.coverage_time is None else m.coverage_time,
            int(m.failed),
        ])
    return rows


def _int_list(text):
    try:
        return [int(x) for x in str(text).split(",") if x != ""]
    except ValueError:
        raise ConfigError(f"expected a comma-separated integer list, got {text!r}")


def cmd_run(args) -> int:
    smap, program, trace = _load_inputs(args)
    policies = [PolicyKind.parse(p) for p in str(args.policy).split(",")]
    room_times = _int_list(args.room_time)
    if not room_times:
        raise ConfigError("--room-time list is empty")
    if args.restarts < 1:
        raise ConfigError("--restarts must be >= 1")

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    summaries = []
    any_aborted = False
    for room_time in room_times:
        backend = make_backend(
            args.scorer,
            context={"map": smap, "trace": trace, "lookahead": room_time},
        )
        for policy in policies:
            config = SimConfig(
                room_time=room_time, horizon=args.horizon,
                master_seed=args.seed, template=args.template,
                binding_sequence=args.binding, window_size=args.window,
            )
            batch = run_batch(smap, trace, policy, backend, config,
                              restarts=args.restarts, jobs=args.jobs)
            rows = [CSV_HEADER] + _metric_rows(
                batch.metrics, policy, smap.name, program.name, room_time, args.seed)
            csv_path = out_dir / f"runs_{policy.value}_T{room_time}.csv"
            csv_path.write_bytes(_csv_bytes(rows))
            summary = dict(batch.summary)
            summary["env"] = smap.name
            summary["program"] = program.name
            summary["scorer"] = args.scorer
            summary["csv"] = csv_path.name
            if batch.aborted:
                any_aborted = True
                summary["aborted_runs"] = batch.aborted
            summaries.append(summary)
            print(f"{policy.value:>9s} T_r={room_time:<4d} "
                  f"D_T={summary['disturbance_mean']:.1f}"
                  f"±{summary['disturbance_std']:.1f} "
                  f"F={summary['failure_pct']:.1f}%")

    (out_dir / "summary.json").write_bytes(
        json.dumps({"cells": summaries}, indent=2, sort_keys=True).encode("utf-8"))
    return EXIT_BACKEND if any_aborted else EXIT_OK


def cmd_prompt_study(args) -> int:
    smap, program, trace = _load_inputs(args)
    grid = PROMPT_GRID
    if args.grid:
        raw = _read_config_file(args.grid)
        grid = [(k, v["template"], v["binding"]) for k, v in raw.items()]

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    backend = make_backend(
        args.scorer,
        context={"map": smap, "trace": trace, "lookahead": args.room_time})

    rows = [["policy", "prompt", "narration", "binding",
             "D_T_mean", "D_T_std", "F_pct"]]
    naive_cfg = SimConfig(room_time=args.room_time, horizon=args.horizon,
                          master_seed=args.seed)
    naive = run_batch(smap, trace, PolicyKind.NAIVE, None, naive_cfg,
                      restarts=args.restarts, jobs=args.jobs)
    rows.append(["naive", "-", "-", "-",
                 f"{naive.summary['disturbance_mean']:.1f}",
                 f"{naive.summary['disturbance_std']:.1f}",
                 f"{naive.summary['failure_pct']:.1f}"])

    any_aborted = bool(naive.aborted)
    for variant, template, binding in grid:
        config = SimConfig(room_time=args.room_time, horizon=args.horizon,
                           master_seed=args.seed, template=template,
                           binding_sequence=binding, window_size=args.window)
        batch = run_batch(smap, trace, PolicyKind.INFORMED_AVOIDANCE, backend,
                          config, restarts=args.restarts, jobs=args.jobs)
        any_aborted = any_aborted or bool(batch.aborted)
        rows.append(["informed", variant, template, binding,
                     f"{batch.summary['disturbance_mean']:.1f}",
                     f"{batch.summary['disturbance_std']:.1f}",
                     f"{batch.summary['failure_pct']:.1f}"])

    out_path = out_dir / "prompt_study.csv"
    out_path.write_bytes(_csv_bytes(rows))
    for row in rows:
        print(",".join(str(c) for c in row))
    return EXIT_BACKEND if any_aborted else EXIT_OK


def cmd_score(args) -> int:
    smap = load_map(_require_file(args.map, "map file"))
    backend = make_backend(args.scorer)

    if args.history:
        durations = _load_durations(getattr(args, "duration_table", None))
        text = Path(_require_file(args.history, "history file")).read_text(encoding="utf-8")
        program = activity.parse_program(text, durations=durations)
        log = []
        t = 0
        for action in program.actions:
            t += action.duration
            log.append((t, action))
        history = ObservationHistory.from_log(log, window_size=args.window)
        narration = narrate(history, args.template)
    else:
        from .narrator import Narration
        narration = Narration(text=args.narration or "", style="literal")

    prompt = PromptSpec(narration=narration, binding_sequence=args.binding)
    scores = compute_relevancy(smap, prompt, backend)

    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(["kind", "id_or_label", "score"])
    for kind, table in (("completion", scores.completion_scores),
                        ("item", scores.item_scores),
                        ("partition", scores.partition_scores)):
        for key, value in sorted(table.items(), key=lambda kv: (-kv[1], str(kv[0]))):
            writer.writerow([kind, key, repr(value)])
    return EXIT_OK


def cmd_oracle(args) -> int:
    smap, program, trace = _load_inputs(args)
    result = oracle.offline_oracle(
        smap.n_rooms, trace, room_time=args.room_time, horizon=args.horizon,
        start_room=args.start_room)
    if not result.feasible:
        print(f"infeasible: no covering sequence within horizon {args.horizon} "
              f"(enumerated {result.enumerated} sequences)")
        return EXIT_OK
    print(f"min D_T = {result.min_disturbance}")
    print("sequence =", ",".join(str(r) for r in result.sequence))
    return EXIT_OK


def cmd_hist(args) -> int:
    path = _require_file(args.csv, "per-restart CSV")
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    if not rows:
        raise ConfigError(f"{path} has no data rows")
    values = [int(r["D_T"]) for r in rows]
    width = args.bin_width
    top = max(values) // width + 1
    counts = [0] * top
    for v in values:
        counts[v // width] += 1
    print("# bin_lo bin_hi count")
    for i, c in enumerate(counts):
        print(f"{i * width} {(i + 1) * width} {c}")
    return EXIT_OK


def _add_common_run_flags(p):
    p.add_argument("--map", required=True, help="semantic map JSON file")
    p.add_argument("--program", required=True, help="activity program file")
    p.add_argument("--scorer", default="stub:uniform",
                   help="backend spec: stub:<fixture>, ngram:<path>,<order>, remote:<url>")
    p.add_argument("--restarts", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--horizon", type=int, default=DEFAULT_HORIZON)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--window", type=int, default=DEFAULT_WINDOW,
                   help="narration history window (completed actions)")
    p.add_argument("--duration-table", default=None,
                   help="TOML verb -> duration override table")
    p.add_argument("--out", default="results")
    p.add_argument("--config", default=None,
                   help="TOML config supplying defaults for any flag")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="gg",
        description="Human-aware coverage planning experiments with "
                    "language-model relevancy grounding.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="policy sweep over room times")
    _add_common_run_flags(p_run)
    p_run.add_argument("--policy", default="informed",
                       help="comma list of naive|greedy|informed")
    p_run.add_argument("--room-time", default="25",
                       help="comma list of T_r values")
    p_run.add_argument("--template", default="activity-history")
    p_run.add_argument("--binding", default=DEFAULT_BINDING_SEQUENCE)
    p_run.set_defaults(subparser=p_run, func=cmd_run)

    p_study = sub.add_parser("prompt-study",
                             help="narration/binding-sequence grid study")
    _add_common_run_flags(p_study)
    p_study.add_argument("--room-time", type=int, default=25)
    p_study.add_argument("--grid", default=None,
                         help="TOML grid of {variant = {template, binding}}")
    p_study.set_defaults(subparser=p_study, func=cmd_prompt_study)

    p_score = sub.add_parser("score", help="score map labels for one prompt")
    p_score.add_argument("--map", required=True)
    p_score.add_argument("--scorer", default="stub:uniform")
    p_score.add_argument("--narration", default=None,
                         help="literal narration text")
    p_score.add_argument("--history", default=None,
                         help="program-format file of completed actions")
    p_score.add_argument("--template", default="activity-history")
    p_score.add_argument("--binding", default=DEFAULT_BINDING_SEQUENCE)
    p_score.add_argument("--window", type=int, default=DEFAULT_WINDOW)
    p_score.add_argument("--duration-table", default=None)
    p_score.set_defaults(subparser=p_score, func=cmd_score)

    p_oracle = sub.add_parser("oracle", help="exhaustive offline optimum")
    p_oracle.add_argument("--map", required=True)
    p_oracle.add_argument("--program", required=True)
    p_oracle.add_argument("--room-time", type=int, required=True)
    p_oracle.add_argument("--horizon", type=int, required=True)
    p_oracle.add_argument("--seed", type=int, default=0)
    p_oracle.add_argument("--start-room", type=int, default=None)
    p_oracle.add_argument("--duration-table", default=None)
    p_oracle.set_defaults(subparser=p_oracle, func=cmd_oracle)

    p_hist = sub.add_parser("hist", help="gnuplot-ready histogram columns")
    p_hist.add_argument("--csv", required=True)
    p_hist.add_argument("--bin-width", type=int, default=10)
    p_hist.set_defaults(subparser=p_hist, func=cmd_hist)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args = _apply_config_defaults(args)
        return args.func(args)
    except OracleTooLargeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ORACLE_TOO_LARGE
    except BackendError as exc:
        print(f"backend error: {exc}", file=sys.stderr)
        return EXIT_BACKEND
    except (ConfigError, GGError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
