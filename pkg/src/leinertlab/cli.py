"""Command-line front end.

Exit codes: 0 success, 1 verification or acceptance failure, 2 usage or input
error, 3 resource cap exceeded.

Global flags (``--json``, ``--csv``, ``--seed``, ``--tol``, ``--cap``) may sit
before or after the subcommand.  Unset flags fall back to the environment
variables ``LEINERTLAB_FORMAT`` (human|json|csv), ``LEINERTLAB_SEED``,
``LEINERTLAB_TOL`` and ``LEINERTLAB_CAP``, then to built-in defaults.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
from dataclasses import asdict, dataclass, field

import numpy as np

from . import __version__
from .errors import GridResolutionError, ResourceCapError, WordParseError
from .fileio import (
    format_function,
    format_matrix,
    format_set,
    parse_coefficients,
    parse_function,
    parse_matrix,
    parse_sequence,
    parse_set,
    read_text,
)
from .freegroup import DEFAULT_BALL_CAP, enumerate_ball
from .leinert import DEFAULT_STATE_CAP, Family, SetFamilySpec, check_leinert_condition, generate_family
from .line import (
    DEFAULT_DELTA,
    DEFAULT_K,
    DEFAULT_M,
    FrequencyGrid,
    a_norm,
    a_norm_parts,
    complement_projection,
    gamma_interpolate,
)
from .regrep import DEFAULT_SEED, build_compression, operator_norm, row_column_bounds
from .schur import DEFAULT_DIM_CAP, SchurSymbol, schur_apply, schur_norm_lower_bound, triangular_growth_sweep
from .spectral import DEFAULT_TOL

ENV_PREFIX = "LEINERTLAB_"

EXIT_OK, EXIT_FAILED, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3

# interpolation/projection laws checked by the `line` commands
LINE_TOL = 1e-8
CONTRACTION_SLACK = 1e-6


@dataclass
class RunConfig:
    command: str
    params: dict = field(default_factory=dict)
    tol: float = DEFAULT_TOL
    cap: int | None = None
    seed: int = DEFAULT_SEED
    format: str = "human"

    def to_dict(self):
        return asdict(self)


class UsageError(Exception):
    pass


def _global_flags(parser, suppress):
    d = argparse.SUPPRESS if suppress else None
    g = parser.add_argument_group("global options")
    g.add_argument("--json", dest="format", action="store_const", const="json", default=d)
    g.add_argument("--csv", dest="format", action="store_const", const="csv", default=d)
    g.add_argument("--seed", type=int, default=d, help=f"random seed (default {DEFAULT_SEED})")
    g.add_argument("--tol", type=float, default=d, help=f"relative tolerance (default {DEFAULT_TOL:g})")
    g.add_argument("--cap", type=int, default=d, help="resource cap of the invoked operation")


def _int_list(text):
    """``8,16,32`` or a progression ``a,b,...,z``.  A progression is read as
    geometric when ``b/a`` is an integer > 1 that reaches ``z``, otherwise as
    arithmetic."""
    parts = [p.strip() for p in text.split(",") if p.strip()]
    if "..." not in parts:
        return [int(p) for p in parts]
    i = parts.index("...")
    if i < 2 or i != len(parts) - 2:
        raise argparse.ArgumentTypeError("write progressions as a,b,...,z")
    head = [int(p) for p in parts[: i - 2]]
    a, b, last = int(parts[i - 2]), int(parts[i - 1]), int(parts[-1])
    if b <= a or last < b:
        raise argparse.ArgumentTypeError("progressions must increase")
    if a > 0 and b % a == 0:
        seq = [a]
        while seq[-1] < last:
            seq.append(seq[-1] * (b // a))
        if seq[-1] == last:
            return head + seq
    if (last - a) % (b - a):
        raise argparse.ArgumentTypeError(f"{last} is not reached from {a},{b}")
    return head + list(range(a, last + 1, b - a))


def _float_list(text):
    return [float(p) for p in text.split(",") if p.strip()]


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="leinertlab", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    p.add_argument("-v", "--verbose", action="store_true")
    _global_flags(p, suppress=False)
    sub = p.add_subparsers(dest="group", required=True)

    def leaf(parent, name, help_):
        sp_ = parent.add_parser(name, help=help_)
        _global_flags(sp_, suppress=True)
        return sp_

    le = sub.add_parser("leinert", help="Leinert-condition search and set families").add_subparsers(dest="action", required=True)
    c = leaf(le, "check", "bounded search for a violating alternating product")
    c.add_argument("--set", required=True, dest="set_file", help="set file, one word per line")
    c.add_argument("--max-depth", type=int, required=True)
    f = leaf(le, "family", "print a named finite set family")
    f.add_argument("--name", required=True, choices=[x.value for x in Family])
    f.add_argument("--k", type=int, required=True)
    f.add_argument("--n", type=int)

    no = sub.add_parser("norm", help="compressed convolution operator norms").add_subparsers(dest="action", required=True)
    s = leaf(no, "sweep", "norm of the compression to B_r for a range of r")
    s.add_argument("--coeffs", required=True)
    s.add_argument("--r-min", type=int, required=True)
    s.add_argument("--r-max", type=int, required=True)
    s.add_argument("--generators", type=int, help="rank N of the free group (default: from the support)")

    sc = sub.add_parser("schur", help="Schur multipliers").add_subparsers(dest="action", required=True)
    s = leaf(sc, "sweep", "upper-triangular truncation of 1/(j-k)")
    s.add_argument("--dims", type=_int_list, required=True)
    s = leaf(sc, "apply", "apply a symbol entrywise and report the norm ratio")
    s.add_argument("--symbol", required=True)
    s.add_argument("--matrix", required=True)

    ln = sub.add_parser("line", help="interpolation and projection on the real line").add_subparsers(dest="action", required=True)
    s = leaf(ln, "interpolate", "Gamma(phi) for a finitely supported phi on Z")
    s.add_argument("--phi", required=True)
    s.add_argument("--delta", type=float, default=DEFAULT_DELTA)
    s.add_argument("--eval-points", type=_float_list, default=[])
    s.add_argument("--grid-m", type=int, default=DEFAULT_M, help="samples per 2pi period")
    s.add_argument("--grid-k", type=int, default=DEFAULT_K, help="periods on each side of 0")
    s = leaf(ln, "project", "Pv = v - Gamma(v|Z) for a sampled transform")
    s.add_argument("--vhat", required=True)
    s.add_argument("--delta", type=float, default=DEFAULT_DELTA)
    s.add_argument("--out", help="write the transform of Pv in the same file format")

    a = sub.add_parser("accept", help="run the acceptance criteria")
    _global_flags(a, suppress=True)
    a.add_argument("--only", type=_int_list, help="comma-separated criterion numbers")
    a.add_argument(
        "--threshold", action="append", default=[], metavar="NAME=VALUE",
        help="override an acceptance threshold (repeatable)",
    )
    return p


def resolve_config(args, environ=None) -> RunConfig:
    env = os.environ if environ is None else environ
    fmt = getattr(args, "format", None) or env.get(ENV_PREFIX + "FORMAT", "human")
    if fmt not in ("human", "json", "csv"):
        raise UsageError(f"unknown output format {fmt!r}")

    def pick(name, conv, default):
        val = getattr(args, name, None)
        if val is not None:
            return val
        raw = env.get(ENV_PREFIX + name.upper())
        if raw is None:
            return default
        try:
            return conv(raw)
        except ValueError:
            raise UsageError(f"bad {ENV_PREFIX}{name.upper()}={raw!r}") from None

    skip = {"format", "seed", "tol", "cap", "group", "action", "verbose"}
    params = {k: v for k, v in sorted(vars(args).items()) if k not in skip}
    command = " ".join(x for x in (args.group, getattr(args, "action", None)) if x)
    cfg = RunConfig(
        command=command,
        params=params,
        tol=pick("tol", float, DEFAULT_TOL),
        cap=pick("cap", int, None),
        seed=pick("seed", int, DEFAULT_SEED),
        format=fmt,
    )
    if cfg.tol <= 0:
        raise UsageError("--tol must be positive")
    return cfg


# --- output ----------------------------------------------------------------

def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.generic):
        return x.item()
    if isinstance(x, complex):
        return [x.real, x.imag]
    return x


def emit(cfg: RunConfig, result: dict, rows: list[dict] | None, human: str, out) -> None:
    if cfg.format == "json":
        payload = {"config": cfg.to_dict(), "result": result}
        if rows is not None:
            payload["rows"] = rows
        out.write(json.dumps(_jsonable(payload), indent=2, sort_keys=True) + "\n")
        return
    header = "".join(f"# {k}={json.dumps(_jsonable(v), sort_keys=True)}\n" for k, v in cfg.to_dict().items())
    if cfg.format == "csv":
        out.write(header)
        table = rows if rows is not None else [{k: v for k, v in result.items() if not isinstance(v, (list, dict))}]
        if table:
            buf = io.StringIO()
            w = csv.DictWriter(buf, fieldnames=list(table[0]), lineterminator="\n")
            w.writeheader()
            for r in table:
                w.writerow({k: ("" if v is None else v) for k, v in _jsonable(r).items()})
            out.write(buf.getvalue())
        return
    out.write(header)
    out.write(human)
    if human and not human.endswith("\n"):
        out.write("\n")


# --- commands --------------------------------------------------------------

def cmd_leinert_check(args, cfg, out):
    E = parse_set(read_text(args.set_file))
    if not len(E):
        raise UsageError("set file has no elements")
    verdict = check_leinert_condition(E, args.max_depth, state_cap=cfg.cap or DEFAULT_STATE_CAP)
    res = verdict.to_dict()
    res["set_size"] = len(E)
    res["bounded"] = True
    if res["verdict"] == "violation":
        human = f"violation at depth {res['depth']}: " + ", ".join(res["witness"])
    else:
        human = f"no violation up to depth {res['depth']} (bounded search; not a Leinert-set certificate)"
    emit(cfg, res, None, human, out)
    return EXIT_OK


def cmd_leinert_family(args, cfg, out):
    E = generate_family(SetFamilySpec(Family(args.name), args.k, args.n))
    res = {"family": args.name, "k": args.k, "n": args.n, "size": len(E),
           "elements": [str(w) for w in E]}
    rows = [{"index": i, "word": str(w), "length": len(w)} for i, w in enumerate(E)]
    emit(cfg, res, rows, format_set(E), out)
    return EXIT_OK


def cmd_norm_sweep(args, cfg, out):
    a = parse_coefficients(read_text(args.coeffs))
    if args.r_min < 0 or args.r_max < args.r_min:
        raise UsageError("need 0 <= r-min <= r-max")
    N = args.generators or max(a.max_generator, 1)
    row_b, col_b = row_column_bounds(a)
    l1 = a.l1_bound()
    rows = []
    for r in range(args.r_min, args.r_max + 1):
        ball = enumerate_ball(N, r, cap=cfg.cap or DEFAULT_BALL_CAP)
        est = operator_norm(build_compression(a, r, N, ball=ball), cfg.tol)
        rows.append({
            "r": r,
            "ball_size": len(ball),
            "norm": est.value,
            "norm_kind": "compression lower bound",
            "norm_tol": cfg.tol,
            "converged": est.converged,
            "iterations": est.iterations,
            "row_bound": row_b,
            "col_bound": col_b,
            "sandwich_valid": r >= a.max_length,
            "l1_bound": l1,
        })
    res = {"block_dim": a.block_dim, "support_size": len(a), "num_generators": N}
    human = "\n".join(
        f"r={x['r']:>3} |B_r|={x['ball_size']:>9} norm={x['norm']:.12g} "
        f"row={x['row_bound']:.12g} col={x['col_bound']:.12g} l1={x['l1_bound']:.12g}"
        + ("" if x["converged"] else " (not converged)")
        for x in rows
    )
    emit(cfg, res, rows, human, out)
    return EXIT_OK if all(x["converged"] for x in rows) else EXIT_FAILED


def cmd_schur_sweep(args, cfg, out):
    dims = args.dims
    if dims != sorted(dims):
        raise UsageError("--dims must be ascending")
    table = triangular_growth_sweep(dims, tol=cfg.tol, cap=cfg.cap or DEFAULT_DIM_CAP)
    sig = lambda x: None if x is None else float(f"{x:.6g}")  # noqa: E731
    rows = [
        {"n": t.n, "norm_H": sig(t.norm_H), "norm_TriH": sig(t.norm_TriH), "rho": sig(t.rho),
         "skipped": t.skipped, "tol": cfg.tol}
        for t in table
    ]
    human = "\n".join(
        f"n={x['n']:>5} skipped (H_1 = 0)" if x["skipped"]
        else f"n={x['n']:>5} ||H||={x['norm_H']} ||Tri(H)||={x['norm_TriH']} rho={x['rho']}"
        for x in rows
    )
    emit(cfg, {"dims": dims}, rows, human, out)
    return EXIT_OK


def cmd_schur_apply(args, cfg, out):
    sigma = SchurSymbol(parse_matrix(read_text(args.symbol)))
    T = parse_matrix(read_text(args.matrix))
    if T.shape != sigma.values.shape:
        raise UsageError(f"symbol is {sigma.values.shape}, matrix is {T.shape}")
    S = schur_apply(sigma, T)
    lower = schur_norm_lower_bound(sigma, T, cfg.tol) if T.any() else None
    res = {"n": sigma.n, "lower_bound": lower, "lower_bound_tol": cfg.tol,
           "matrix": [[complex(z) for z in row] for row in np.asarray(S, dtype=complex)]}
    rows = [{"i": i, "j": j, "re": float(np.real(S[i, j])), "im": float(np.imag(S[i, j]))}
            for i in range(S.shape[0]) for j in range(S.shape[1])]
    human = f"# lower_bound={lower}\n" + format_matrix(S)
    emit(cfg, res, rows, human, out)
    return EXIT_OK


def cmd_line_interpolate(args, cfg, out):
    phi = parse_sequence(read_text(args.phi))
    grid = FrequencyGrid(args.grid_m, args.grid_k)
    f = gamma_interpolate(phi, args.delta, grid)
    vals = f.values_at_integers()
    err = max((abs(vals[n] - phi[n]) for n in grid.integer_window()), default=0.0)
    parts = a_norm_parts(f)
    l2 = phi.l2_norm()
    ok = err <= LINE_TOL and parts.value <= l2 + CONTRACTION_SLACK
    points = [{"x": x, "re": float(z.real), "im": float(z.imag)}
              for x, z in zip(args.eval_points, f.evaluate(args.eval_points) if args.eval_points else [])]
    res = {"l2_norm": l2, "a_norm": parts.value, "a_norm_inside": parts.inside,
           "a_norm_tail": parts.tail, "max_interp_error": err, "interp_tol": LINE_TOL,
           "contraction_slack": CONTRACTION_SLACK, "grid_m": grid.M, "grid_k": grid.K,
           "laws_hold": ok, "values": points}
    human = (
        f"||phi||_2={l2:.12g} ||Gamma phi||_A={parts.value:.12g} (tail {parts.tail:.3g})\n"
        f"max |Gamma phi(n) - phi(n)|={err:.3g}\n"
        + "".join(f"f({p['x']:g}) = {p['re']:.12g} + {p['im']:.12g}i\n" for p in points)
    )
    emit(cfg, res, points if cfg.format == "csv" else None, human, out)
    return EXIT_OK if ok else EXIT_FAILED


def cmd_line_project(args, cfg, out):
    v = parse_function(read_text(args.vhat), args.delta)
    pv = complement_projection(v, args.delta)
    ppv = complement_projection(pv, args.delta)
    on_z = max(map(abs, pv.values_at_integers().values.values()), default=0.0)
    nv, npv = a_norm(v), a_norm(pv)
    idem = a_norm(ppv - pv)
    ok = on_z <= LINE_TOL and idem <= LINE_TOL and npv <= 2 * nv + CONTRACTION_SLACK
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(format_function(pv))
    res = {"a_norm_v": nv, "a_norm_Pv": npv, "bound_2v": 2 * nv, "max_Pv_on_integers": on_z,
           "idempotence_a_norm": idem, "tol": LINE_TOL, "laws_hold": ok}
    human = (
        f"||v||_A={nv:.12g} ||Pv||_A={npv:.12g} (bound {2 * nv:.12g})\n"
        f"max |Pv(n)|={on_z:.3g}  ||P(Pv) - Pv||_A={idem:.3g}\n"
    )
    emit(cfg, res, None, human, out)
    return EXIT_OK if ok else EXIT_FAILED


def cmd_accept(args, cfg, out):
    from .acceptance import THRESHOLDS, run_acceptance_suite

    overrides = {}
    for item in args.threshold:
        name, sep, value = item.partition("=")
        if not sep or name not in THRESHOLDS:
            raise UsageError(f"bad --threshold {item!r}; known: {', '.join(THRESHOLDS)}")
        overrides[name] = float(value)
    results = run_acceptance_suite(args.only, overrides, seed=cfg.seed)
    records = [r.to_dict() for r in results]
    human = "\n".join(
        r.line() + "".join(f"\n    {d}" for d in r.details) for r in results
    )
    passed = sum(r.ok for r in results)
    human += f"\n{passed}/{len(results)} criteria passed"
    rows = [{"criterion": r["criterion"], "name": r["name"], "passed": r["passed"]} for r in records]
    emit(cfg, {"criteria": records, "passed": passed, "total": len(results)}, rows, human, out)
    return EXIT_OK if passed == len(results) else EXIT_FAILED


COMMANDS = {
    ("leinert", "check"): cmd_leinert_check,
    ("leinert", "family"): cmd_leinert_family,
    ("norm", "sweep"): cmd_norm_sweep,
    ("schur", "sweep"): cmd_schur_sweep,
    ("schur", "apply"): cmd_schur_apply,
    ("line", "interpolate"): cmd_line_interpolate,
    ("line", "project"): cmd_line_project,
    ("accept", None): cmd_accept,
}


def dispatch(argv=None, out=None, environ=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    try:
        cfg = resolve_config(args, environ)
        return COMMANDS[(args.group, getattr(args, "action", None))](args, cfg, out)
    except ResourceCapError as exc:
        print(f"leinertlab: resource cap: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (UsageError, WordParseError, GridResolutionError, ValueError, OSError) as exc:
        print(f"leinertlab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main():
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
