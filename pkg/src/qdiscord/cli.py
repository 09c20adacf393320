"""Command-line interface.

Exit codes: 0 success, 1 property violation, 2 invalid input, 3 I/O failure.
"""

from __future__ import annotations

import argparse
import csv
import io as _io
import json
import logging
import math
import sys

import numpy as np

from . import discord as dc
from .ellipsoid import geometry, steering_quadric
from .entanglement import eof_from_concurrence, wootters_concurrence
from .errors import DegenerateQuadric, NotAnEllipsoid, QDiscordError, ValidationError
from .io import read_state, report_to_dict, report_to_json
from .sampling import sample_state
from .states import RANK_TOL, TwoQubitState, complement_state, purify, validate

log = logging.getLogger("qdiscord")

EXIT_OK, EXIT_VIOLATION, EXIT_INPUT, EXIT_IO = 0, 1, 2, 3

KW_TOL = 1e-4
ORDER_TOL = 1e-6
DOMINANCE_TOL = 1e-9

# rank-three X state used by ``repro-example``; the corner coherence is a flag
EXAMPLE_DIAGONAL = (0.7, 0.0, 0.15, 0.15)
EXAMPLE_CORNER = 0.2795
REFERENCE_S2 = 0.295127
REFERENCE_S3 = 0.291942
REFERENCE_DIRECTIONS = ((0.929301, 0.0, -0.369322), (-0.929301, 0.0, -0.369322), (0.0, 0.0, 1.0))
REFERENCE_PROBABILITIES = (0.365144, 0.365144, 0.269712)
EVAL_TOL = 1e-5
REDISCOVERY_TOL = 5e-4
PROBABILITY_TOL = 1e-4


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def fmt(x: float) -> str:
    return f"{x:.12g}"


def example_state(corner: float = EXAMPLE_CORNER) -> TwoQubitState:
    m = np.diag(EXAMPLE_DIAGONAL).astype(float)
    m[0, 3] = m[3, 0] = corner
    return validate(m)


def weights_from_directions(dirs) -> np.ndarray:
    """Weights a_k with sum a_k = 2 and sum a_k n_k = 0 for three coplanar directions."""
    d = np.asarray(dirs, dtype=float)
    a = np.vstack([d.T, np.ones(len(d))])
    b = np.array([0.0, 0.0, 0.0, 2.0])
    sol, *_ = np.linalg.lstsq(a, b, rcond=None)
    return sol


def sample_rngs(seed: int, n: int) -> list[np.random.Generator]:
    """One independent generator per sample index, so rows do not depend on run order."""
    return [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(n)]


# -- output helpers ----------------------------------------------------------------


def _emit(args, text: str) -> None:
    if args.out:
        try:
            with open(args.out, "w", newline="") as fh:
                fh.write(text)
        except OSError as exc:
            raise CliError(EXIT_IO, f"cannot write {args.out}: {exc}") from exc
    else:
        sys.stdout.write(text)


def _load(args) -> TwoQubitState:
    if not args.input:
        raise CliError(EXIT_INPUT, "--input is required for this command")
    try:
        return read_state(args.input, rank_tol=args.tol_rank)
    except OSError as exc:
        raise CliError(EXIT_IO, f"cannot read {args.input}: {exc}") from exc
    except ValidationError as exc:
        raise CliError(EXIT_INPUT, f"invalid state in {args.input}: {exc}") from exc


def _csv_text(header, rows) -> str:
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _table_text(header, rows) -> str:
    cells = [list(map(str, header))] + [[str(c) for c in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    return "".join("  ".join(c.rjust(w) for c, w in zip(r, widths)) + "\n" for r in cells)


def _rows_text(args, header, rows) -> str:
    return _csv_text(header, rows) if args.format == "csv" else _table_text(header, rows)


def _require_seed(args) -> int:
    if args.seed is None:
        raise CliError(EXIT_INPUT, f"--seed is required for {args.command}")
    return args.seed


# -- commands ----------------------------------------------------------------------


def cmd_discord(args) -> int:
    st = _load(args)
    rep = dc.discord(st)
    log.info("routing: rank %d -> %s", st.rank, rep.method)
    if args.format == "csv":
        lo, hi = rep.bound_pair if rep.bound_pair else (rep.mae, rep.mae)
        row = [fmt(rep.mutual_information), fmt(rep.classical_correlation), fmt(rep.discord),
               fmt(rep.mae), rep.method, fmt(lo), fmt(hi)]
        _emit(args, _csv_text(["I", "C", "D", "mae", "method", "mae_lower", "mae_upper"], [row]))
    else:
        _emit(args, report_to_json(rep) + "\n")
    return EXIT_OK


def cmd_ellipsoid(args) -> int:
    st = _load(args)
    try:
        g = geometry(steering_quadric(st))
    except (DegenerateQuadric, NotAnEllipsoid) as exc:
        raise CliError(EXIT_INPUT, f"no steering ellipsoid: {exc}") from exc
    n = args.samples or 500
    lines = [
        "# steering ellipsoid of qubit B",
        "# center " + " ".join(fmt(v) for v in g.center),
        "# semiaxes " + " ".join(fmt(v) for v in g.semiaxes),
        "# axes (columns) " + " ".join(fmt(v) for v in g.axes.T.ravel()),
        "# y1 y2 y3",
    ]
    lines += [" ".join(fmt(v) for v in p) for p in g.surface_points(n)]
    _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK


def kw_row(st: TwoQubitState) -> tuple[float, float, float]:
    """(projective minimum, EoF of the complement, |difference|) for a rank <= 2 state."""
    s2, _, _ = dc.minimize_von_neumann(st)
    rho_bc = complement_state(purify(st, ancilla_dim=2))
    e = eof_from_concurrence(wootters_concurrence(rho_bc).value)
    return s2, e, abs(s2 - e)


def cmd_kw_verify(args) -> int:
    if args.input:
        states = [_load(args)]
    else:
        seed = _require_seed(args)
        sampler = args.sampler or "rank2"
        if sampler != "rank2":
            raise CliError(EXIT_INPUT, "kw-verify needs rank <= 2 states (--sampler rank2)")
        states = [sample_state(g, sampler) for g in sample_rngs(seed, args.samples or 200)]
    rows, worst = [], 0.0
    for i, st in enumerate(states):
        if st.rank > 2:
            raise CliError(EXIT_INPUT, f"sample {i} has rank {st.rank}; kw-verify needs rank <= 2")
        s2, e, delta = kw_row(st)
        worst = max(worst, delta)
        rows.append([i, fmt(s2), fmt(e), fmt(delta)])
    text = _rows_text(args, ["sample", "s2_min", "eof_complement", "abs_delta"], rows)
    if args.format != "csv":
        text += f"max |delta| = {fmt(worst)} (tolerance {KW_TOL:g})\n"
    _emit(args, text)
    return EXIT_OK if worst < KW_TOL else EXIT_VIOLATION


BENCH_HEADER = ["state_id", "rank", "s2_min", "s3_min", "e_lower", "gap_povm", "gap_bound"]


def bench_row(i: int, st: TwoQubitState) -> tuple[list, bool]:
    vn = dc.minimize_von_neumann(st)
    s3, _, _ = dc.minimize_povm3(st, vn=vn)
    s2 = vn[0]
    lower = dc.complement_lower_bound(st)
    ok = s3 <= s2 + DOMINANCE_TOL and lower <= s3 + ORDER_TOL
    return [i, st.rank, fmt(s2), fmt(s3), fmt(lower), fmt(s2 - s3), fmt(s3 - lower)], ok


def cmd_bench_delta(args) -> int:
    seed = _require_seed(args)
    sampler = args.sampler or "xstate"
    rows, bad = [], []
    for i, g in enumerate(sample_rngs(seed, args.samples or 100)):
        row, ok = bench_row(i, sample_state(g, sampler))
        rows.append(row)
        if not ok:
            bad.append(i)
    if args.format == "text":
        text = _table_text(BENCH_HEADER, rows) + f"violations: {len(bad)}\n"
    else:
        text = _csv_text(BENCH_HEADER, rows)
    _emit(args, text)
    if bad:
        log.error("ordering violated for samples %s", bad)
        return EXIT_VIOLATION
    return EXIT_OK


def repro_checks(corner: float = EXAMPLE_CORNER) -> list[tuple[str, float, float, float, bool]]:
    """(name, computed, reference, tolerance, passed) for the rank-three X-state example."""
    st = example_state(corner)
    vn = dc.minimize_von_neumann(st)
    s3_opt, _, _ = dc.minimize_povm3(st, vn=vn)
    dirs = np.asarray(REFERENCE_DIRECTIONS)
    dirs = dirs / np.linalg.norm(dirs, axis=1, keepdims=True)
    s3_eval = dc.povm_entropy(dc.r_matrix(st), 2 * np.asarray(REFERENCE_PROBABILITIES), dirs)
    probs = weights_from_directions(dirs) / 2
    out = [
        ("s2_min", vn[0], REFERENCE_S2, EVAL_TOL, abs(vn[0] - REFERENCE_S2) <= EVAL_TOL),
        ("s3_at_reference_povm", s3_eval, REFERENCE_S3, EVAL_TOL, abs(s3_eval - REFERENCE_S3) <= EVAL_TOL),
        ("s3_min_optimizer", s3_opt, REFERENCE_S3, REDISCOVERY_TOL, s3_opt <= REFERENCE_S3 + REDISCOVERY_TOL),
    ]
    for k, (p, ref) in enumerate(zip(probs, REFERENCE_PROBABILITIES)):
        out.append((f"probability_{k + 1}", p, ref, PROBABILITY_TOL, abs(p - ref) <= PROBABILITY_TOL))
    return out


def cmd_repro_example(args) -> int:
    checks = repro_checks(args.corner)
    rows = [[name, fmt(v), fmt(ref), f"{tol:g}", "PASS" if ok else "FAIL"] for name, v, ref, tol, ok in checks]
    header = ["quantity", "computed", "reference", "tolerance", "status"]
    text = f"# X state diag {EXAMPLE_DIAGONAL}, corner {args.corner:g}\n" + _rows_text(args, header, rows)
    _emit(args, text)
    return EXIT_OK if all(c[-1] for c in checks) else EXIT_VIOLATION


# -- entry point --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", help="state file (JSON with n, re, im)")
    common.add_argument("--seed", type=int, help="RNG seed (required for sampling commands)")
    common.add_argument("--samples", type=_positive_int, help="number of samples or surface points")
    common.add_argument("--out", help="output path (default stdout)")
    common.add_argument("--sampler", choices=["xstate", "general", "rank2"])
    common.add_argument("--tol-rank", type=float, default=RANK_TOL, help="eigenvalue threshold for rank")
    common.add_argument("--format", choices=["text", "csv"])
    common.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")

    p = argparse.ArgumentParser(prog="qdiscord", description="Two-qubit discord, EoF and steering ellipsoids.")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("discord", parents=[common], help="discord report for a state file").set_defaults(
        func=cmd_discord, format_default="text")
    sub.add_parser("ellipsoid", parents=[common], help="steering ellipsoid point cloud").set_defaults(
        func=cmd_ellipsoid, format_default="text")
    sub.add_parser("kw-verify", parents=[common], help="projective minimum vs complement EoF on rank-2 states"
                   ).set_defaults(func=cmd_kw_verify, format_default="text")
    sub.add_parser("bench-delta", parents=[common], help="bound ordering benchmark over random states"
                   ).set_defaults(func=cmd_bench_delta, format_default="csv")
    rp = sub.add_parser("repro-example", parents=[common], help="rank-three X-state worked example")
    rp.add_argument("--corner", type=float, default=EXAMPLE_CORNER, help="corner coherence rho_03")
    rp.set_defaults(func=cmd_repro_example, format_default="text")
    return p


def _positive_int(s: str) -> int:
    v = int(s)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    if args.format is None:
        args.format = args.format_default
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except QDiscordError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
