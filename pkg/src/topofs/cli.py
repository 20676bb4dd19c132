"""Command-line front end: generators, window scan, selection runs, vineyards.

Subcommands
-----------
generate     synthetic sine data (optionally permuted), with a replayable manifest
scan-window  maximal persistence at the barycenter across window lengths
select       the full scoring pipeline: sliding windows, ascent, perturbation trials
vineyard     trace diagrams along a segment between two combination vectors
distances    dump component / combination / full distance matrices

All CSV output is comma-separated with '.' decimals, LF line endings,
UTF-8, and 17 significant digits, so reruns with the same seed are
byte-identical.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import _svg
from .objective import evaluate, parse_functional
from .optimize import AscentConfig, ascend
from .perturb import PerturbConfig, run_trials, score_support
from .persistence import diagram_to_csv, diagram_to_json, matrix_diagram
from .sliding_window import (
    combo_distance,
    component_distance,
    full_distance,
    read_time_series_csv,
    sliding_window_distances,
    window_scan,
    write_time_series_csv,
)
from .vineyard import PLCurve, trace_vineyard


def _fmt(x: float) -> str:
    return "%.17g" % x


def _write_text(path: Path, text: str) -> None:
    with open(path, "w", newline="\n", encoding="utf-8") as fh:
        fh.write(text)


def _write_json(path: Path, doc) -> None:
    _write_text(path, json.dumps(doc, sort_keys=True, indent=1) + "\n")


def _write_matrix_csv(path: Path, M: np.ndarray) -> None:
    with open(path, "w", newline="\n", encoding="utf-8") as fh:
        for row in np.atleast_2d(M):
            fh.write(",".join(_fmt(x) for x in row) + "\n")


def _parse_step_size(text: str) -> float:
    """Accept plain floats and exact fractions like ``1/48``."""
    if "/" in text:
        return float(Fraction(text))
    return float(text)


def _parse_floats(text: str) -> list[float]:
    return [float(x) for x in text.split(",") if x != ""]


# ---------------------------------------------------------------------------
# generate
# ---------------------------------------------------------------------------

def _generate_sines(kind: str, count: int, n: int, period: float,
                    noise: list[float], permuted: int, seed: int):
    """Phase-shifted sines, optional per-signal value permutations, then noise.

    The draw order (phases, then permutations of the last ``permuted``
    signals in index order, then noise column by column) is fixed so a
    manifest replay is byte-identical.
    """
    if len(noise) == 1:
        noise = noise * count
    if len(noise) != count:
        raise ValueError(f"need 1 or {count} noise SDs, got {len(noise)}")
    if not 0 <= permuted <= count:
        raise ValueError("permuted signal count out of range")
    rng = np.random.default_rng(seed)
    phases = rng.uniform(0.0, period, count)
    t = np.arange(1, n + 1, dtype=float)
    clean = np.sin(2 * np.pi / period * (t[:, None] - phases[None, :]))
    permuted_idx = list(range(count - permuted + 1, count + 1))  # 1-based
    permutations = {}
    for i in permuted_idx:
        perm = rng.permutation(n)
        clean[:, i - 1] = clean[perm, i - 1]
        permutations[str(i)] = perm.tolist()
    X = clean.copy()
    for j in range(count):
        X[:, j] += rng.normal(0.0, noise[j], n)
    manifest = {
        "kind": kind, "count": count, "n": n, "period": period,
        "noise_sd": list(noise), "permuted": permuted_idx, "seed": seed,
        "phases": phases.tolist(), "permutations": permutations,
        "data_file": "data.csv",
    }
    return X, manifest


def cmd_generate(args) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    if args.from_manifest:
        with open(args.from_manifest, encoding="utf-8") as fh:
            man = json.load(fh)
        X, manifest = _generate_sines(
            man["kind"], man["count"], man["n"], man["period"],
            list(man["noise_sd"]), len(man["permuted"]), man["seed"])
    else:
        noise = _parse_floats(args.noise) if args.noise else (
            [1.0, 2.0, 3.0] if args.kind == "sines" else [1.5])
        permuted = args.permuted if args.permuted is not None else (
            7 if args.kind == "sines_permuted" else 0)
        X, manifest = _generate_sines(args.kind, args.count, args.n,
                                      args.period, noise, permuted, args.seed)
    write_time_series_csv(X, out / "data.csv")
    _write_json(out / "manifest.json", manifest)
    print(f"wrote {out / 'data.csv'} ({X.shape[0]}x{X.shape[1]})")
    return 0


# ---------------------------------------------------------------------------
# scan-window
# ---------------------------------------------------------------------------

def cmd_scan_window(args) -> int:
    X = read_time_series_csv(args.input, has_header=args.header)
    lengths = range(args.l_min, args.l_max + 1, args.l_step)
    degree = args.degree
    rows = []
    for L, cd in window_scan(X, lengths):
        v = np.full(cd.p, 1.0 / cd.p)
        d = matrix_diagram(combo_distance(cd, v), degrees=(degree,))
        life = d.get(degree).lifetimes
        rows.append((L, float(life.max(initial=0.0))))
    best = max(rows, key=lambda r: (r[1], -r[0]))
    lines = ["window,max_persistence"]
    lines.extend(f"{L},{_fmt(mp)}" for L, mp in rows)
    table = "\n".join(lines) + "\n"
    if args.out:
        _write_text(Path(args.out), table)
    print(table, end="")
    print(f"recommended window: {best[0]} (max persistence {_fmt(best[1])})")
    return 0


# ---------------------------------------------------------------------------
# select
# ---------------------------------------------------------------------------

def _load_config_defaults(args, parser_defaults):
    if not args.config:
        return args
    with open(args.config, encoding="utf-8") as fh:
        conf = json.load(fh)
    for key, value in conf.items():
        attr = key.replace("-", "_")
        if not hasattr(args, attr):
            raise SystemExit(f"unknown config key {key!r}")
        # flags win: only fill values the command line left at the default
        if getattr(args, attr) == parser_defaults.get(attr):
            setattr(args, attr, value)
    return args


def _resolve_input(args, out: Path) -> np.ndarray:
    if (args.input is None) == (args.gen_kind is None):
        raise SystemExit("exactly one of --input or --gen-kind is required")
    if args.input:
        return read_time_series_csv(args.input, has_header=args.header)
    noise = _parse_floats(args.gen_noise) if args.gen_noise else (
        [1.0, 2.0, 3.0] if args.gen_kind == "sines" else [1.5])
    permuted = args.gen_permuted if args.gen_permuted is not None else (
        7 if args.gen_kind == "sines_permuted" else 0)
    X, manifest = _generate_sines(args.gen_kind, args.gen_count, args.gen_n,
                                  args.gen_period, noise, permuted, args.gen_seed)
    write_time_series_csv(X, out / "data.csv")
    _write_json(out / "generator_manifest.json", manifest)
    return X


def _write_scores(path: Path, mean: np.ndarray, sd: np.ndarray) -> None:
    lines = ["variable,mean,sd"]
    lines.extend(f"{j + 1},{_fmt(mean[j])},{_fmt(sd[j])}" for j in range(len(mean)))
    _write_text(path, "\n".join(lines) + "\n")


def _write_vector_table(path: Path, rows: np.ndarray, index_name: str) -> None:
    p = rows.shape[1]
    lines = [index_name + "," + ",".join(f"v_{j + 1}" for j in range(p))]
    for i, row in enumerate(rows):
        lines.append(str(i) + "," + ",".join(_fmt(x) for x in row))
    _write_text(path, "\n".join(lines) + "\n")


def cmd_select(args) -> int:
    args = _load_config_defaults(args, args._defaults)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    X = _resolve_input(args, out)
    n, p = X.shape
    if args.window is None:
        raise SystemExit("--window is required")
    functional = parse_functional(args.functional,
                                  default_degrees=_parse_degrees(args.degrees))
    step_size = (_parse_step_size(args.step_size) if args.step_size
                 else 1.0 / (p * 16.0))
    mode = {"fixed": "fixed_steps", "exact": "exact_path"}[args.mode]
    ascent = AscentConfig(steps=args.steps, step_size=step_size,
                          functional=functional, mode=mode,
                          prune_crossings=args.prune_crossings)
    _write_json(out / "run_manifest.json", {
        "input": args.input, "generator": args.gen_kind, "window": args.window,
        "functional": str(functional), "steps": args.steps,
        "step_size": step_size, "mode": mode, "trials": args.trials,
        "perturb_sigma": args.perturb_sigma, "seed": args.seed,
        "n": n, "p": p,
    })

    cd = sliding_window_distances(X, args.window)
    degrees = sorted(functional.degrees)
    v0 = np.full(p, 1.0 / p)
    d0 = matrix_diagram(combo_distance(cd, v0), degrees=degrees)
    diagram_to_csv(d0, out / "diagram_initial.csv")
    diagram_to_json(d0, out / "diagram_initial.json")
    _write_text(out / "diagram_initial.svg",
                _svg.diagram_svg(d0.points(), "diagram at barycenter"))

    if args.trials == 1:
        path = ascend(cd, ascent)
        score = path.score
        sd = np.zeros(p)
        path.to_csv(out / "path.csv")
        path.events_json(out / "path_events.json")
        path_points = path.points
    else:
        pcfg = PerturbConfig(trials=args.trials, sigma=args.perturb_sigma,
                             master_seed=args.seed, ascent=ascent,
                             window=args.window)
        summary = run_trials(X, pcfg, workers=args.workers)
        score = summary.mean_score
        sd = np.sqrt(np.maximum(np.diag(summary.score_covariance), 0.0))
        _write_vector_table(out / "mean_path.csv", summary.mean_path, "step")
        _write_vector_table(out / "per_trial_scores.csv",
                            summary.per_trial_scores, "trial")
        _write_matrix_csv(out / "covariance.csv", summary.score_covariance)
        if summary.failures:
            _write_json(out / "failures.json",
                        [{"trial": t, "error": e} for t, e in summary.failures])
            print(f"warning: {len(summary.failures)} trials failed", file=sys.stderr)
        path_points = summary.mean_path

    _write_scores(out / "scores.csv", score, sd)
    df = matrix_diagram(combo_distance(cd, score), degrees=degrees)
    diagram_to_csv(df, out / "diagram_final.csv")
    diagram_to_json(df, out / "diagram_final.json")
    _write_text(out / "diagram_final.svg",
                _svg.diagram_svg(df.points(), "diagram at final score"))
    _write_text(out / "scores.svg",
                _svg.bars_svg(score, "variable scores", errors=sd))
    _write_text(out / "path.svg", _svg.path_svg(path_points, "gradient path"))

    if args.with_vineyard:
        keep = [0]
        for i in range(1, len(path_points)):
            if not np.array_equal(path_points[i], path_points[keep[-1]]):
                keep.append(i)
        if len(keep) >= 2:
            mats = [combo_distance(cd, path_points[i]) for i in keep]
            curve = PLCurve.from_matrices([float(i) for i in keep], mats)
            vy = trace_vineyard(curve, max(degrees), args.vineyard_resolution)
            vy.to_json(out / "vineyard.json")
            vy.to_csv(out / "vineyard.csv")

    support = sorted(score_support(score, 1e-3))
    print(f"score support (> 1e-3): {support}")
    print(f"objective at the score: {_fmt(evaluate(functional, df))}")
    return 0


def _parse_degrees(text: str) -> tuple[int, ...]:
    return tuple(int(x) for x in text.split(","))


# ---------------------------------------------------------------------------
# vineyard / distances
# ---------------------------------------------------------------------------

def cmd_vineyard(args) -> int:
    X = read_time_series_csv(args.input, has_header=args.header)
    cd = sliding_window_distances(X, args.window)
    va = np.asarray(_parse_floats(args.from_v))
    vb = np.asarray(_parse_floats(args.to_v))
    curve = PLCurve.from_matrices(
        [0.0, 1.0], [combo_distance(cd, va), combo_distance(cd, vb)])
    vy = trace_vineyard(curve, args.degree, args.resolution)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    vy.to_json(out / "vineyard.json")
    vy.to_csv(out / "vineyard.csv")
    print(f"{len(vy.vines)} vines, {len(vy.crossings)} crossings")
    return 0


def cmd_distances(args) -> int:
    X = read_time_series_csv(args.input, has_header=args.header)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    if args.what == "full":
        _write_matrix_csv(out / "full.csv", full_distance(X))
    elif args.what == "component":
        if args.window > 1:
            cd = sliding_window_distances(X, args.window)
            for j in range(cd.p):
                _write_matrix_csv(out / f"component_{j + 1}.csv", cd.mats[j])
        else:
            for j in range(X.shape[1]):
                _write_matrix_csv(out / f"component_{j + 1}.csv",
                                  component_distance(X, j + 1))
    else:
        if not args.v:
            raise SystemExit("--v is required for combo distances")
        cd = sliding_window_distances(X, args.window)
        _write_matrix_csv(out / "combo.csv",
                          combo_distance(cd, np.asarray(_parse_floats(args.v))))
    return 0


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="topofs",
        description="Score time-series variables by their contribution to "
                    "sliding-window persistent homology.")
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="synthetic sine data")
    g.add_argument("--kind", choices=("sines", "sines_permuted"), default="sines")
    g.add_argument("--count", type=int, default=None)
    g.add_argument("--n", type=int, default=300)
    g.add_argument("--period", type=float, default=50.0)
    g.add_argument("--noise", type=str, default=None,
                   help="comma list of per-signal SDs (or one SD for all)")
    g.add_argument("--permuted", type=int, default=None,
                   help="how many trailing signals get value-permuted")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--from-manifest", type=str, default=None,
                   help="replay a previous generation manifest")
    g.add_argument("--out", required=True)
    g.set_defaults(func=cmd_generate)

    s = sub.add_parser("scan-window", help="persistence across window lengths")
    s.add_argument("--input", required=True)
    s.add_argument("--header", action="store_true")
    s.add_argument("--l-min", type=int, required=True)
    s.add_argument("--l-max", type=int, required=True)
    s.add_argument("--l-step", type=int, default=1)
    s.add_argument("--degree", type=int, default=1)
    s.add_argument("--out", default=None)
    s.set_defaults(func=cmd_scan_window)

    c = sub.add_parser("select", help="run the scoring pipeline")
    c.add_argument("--config", type=str, default=None,
                   help="JSON file with defaults; explicit flags win")
    c.add_argument("--input", type=str, default=None)
    c.add_argument("--header", action="store_true")
    c.add_argument("--gen-kind", choices=("sines", "sines_permuted"), default=None)
    c.add_argument("--gen-count", type=int, default=None)
    c.add_argument("--gen-n", type=int, default=300)
    c.add_argument("--gen-period", type=float, default=50.0)
    c.add_argument("--gen-noise", type=str, default=None)
    c.add_argument("--gen-permuted", type=int, default=None)
    c.add_argument("--gen-seed", type=int, default=0)
    c.add_argument("--window", type=int, default=None)
    c.add_argument("--functional", type=str, default="max")
    c.add_argument("--degrees", type=str, default="1")
    c.add_argument("--steps", type=int, default=100)
    c.add_argument("--step-size", type=str, default=None,
                   help="float or fraction, e.g. 1/48")
    c.add_argument("--mode", choices=("fixed", "exact"), default="fixed")
    c.add_argument("--trials", type=int, default=1)
    c.add_argument("--perturb-sigma", type=float, default=0.0)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--workers", type=int, default=1)
    c.add_argument("--with-vineyard", action="store_true")
    c.add_argument("--vineyard-resolution", type=int, default=8)
    c.add_argument("--prune-crossings", action="store_true")
    c.add_argument("--out", required=True)
    c.set_defaults(func=cmd_select)
    c.set_defaults(_defaults={a.dest: a.default for a in c._actions})

    v = sub.add_parser("vineyard", help="diagrams along a combination segment")
    v.add_argument("--input", required=True)
    v.add_argument("--header", action="store_true")
    v.add_argument("--window", type=int, required=True)
    v.add_argument("--degree", type=int, default=1)
    v.add_argument("--from-v", required=True, help="comma list of coefficients")
    v.add_argument("--to-v", required=True)
    v.add_argument("--resolution", type=int, default=30)
    v.add_argument("--out", required=True)
    v.set_defaults(func=cmd_vineyard)

    d = sub.add_parser("distances", help="write distance matrices")
    d.add_argument("--input", required=True)
    d.add_argument("--header", action="store_true")
    d.add_argument("--window", type=int, default=1)
    d.add_argument("--what", choices=("component", "combo", "full"),
                   default="component")
    d.add_argument("--v", type=str, default=None)
    d.add_argument("--out", required=True)
    d.set_defaults(func=cmd_distances)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BrokenPipeError:
        raise
    except SystemExit:
        raise
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
