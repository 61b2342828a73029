"""End-to-end acceptance criteria.

Each criterion returns a ``CriterionResult``; failures are reported, never
raised.  Thresholds live in ``THRESHOLDS`` and can be overridden per run.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .freegroup import Word, enumerate_ball, format_word
from .leinert import (
    Family,
    NoViolationUpTo,
    SetFamilySpec,
    Violation,
    check_leinert_condition,
    generate_family,
    indicator,
    verify_witness,
)
from .line import (
    FrequencyGrid,
    IntegerSequence,
    a_norm,
    complement_projection,
    gamma_interpolate,
    random_bandlimited,
)
from .regrep import (
    DEFAULT_SEED,
    CoefficientFunction,
    build_compression,
    haagerup_bound,
    haagerup_sup,
    operator_norm,
    pointwise_product,
    random_coefficients,
    row_column_bounds,
    vn_restrict,
)
from .schur import hilbert_kernel, triangular_growth_sweep
from .spectral import DEFAULT_TOL, dense_norm, power_norm

THRESHOLDS = {
    "c3_slack": -1e-8,
    "c4_low": 1.9,
    "c4_high": 2.0 + 1e-8,
    "c5_norm_h": np.pi + 1e-6,
    "c5_growth": 2.0,
    "c6_interp": 1e-8,
    "c6_contraction": 1.0 + 1e-6,
    "c7_idempotent": 1e-8,
    "c7_vanish": 1e-8,
    "c9_rel": 1e-8,
}

RUNTIME_LIMITS = {1: 1, 2: 10, 3: 60, 4: 120, 5: 300, 6: 60, 7: 30, 8: 5, 9: 60}


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    measured: dict
    runtime_s: float = 0.0
    runtime_limit_s: float = 0.0
    details: list[str] = field(default_factory=list)

    @property
    def within_runtime(self) -> bool:
        return self.runtime_s < self.runtime_limit_s

    @property
    def ok(self) -> bool:
        return self.passed and self.within_runtime

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        shown = ", ".join(f"{k}={_short(v)}" for k, v in self.measured.items())
        return (
            f"[{status}] {self.number}. {self.name}: {shown} "
            f"({self.runtime_s:.2f}s / limit {self.runtime_limit_s:g}s)"
        )

    def to_dict(self) -> dict:
        # runtime seconds stay out so identical runs give identical records
        return {
            "criterion": self.number,
            "name": self.name,
            "passed": self.ok,
            "values_passed": self.passed,
            "within_runtime": self.within_runtime,
            "runtime_limit_s": self.runtime_limit_s,
            "measured": self.measured,
            "details": self.details,
        }


def _short(v):
    if isinstance(v, float):
        return f"{v:.10g}"
    return v


def c1_haagerup(th, seed=DEFAULT_SEED) -> CriterionResult:
    E = generate_family(SetFamilySpec(Family.UPPER_TRIANGULAR_WEAK, 6))
    phi = indicator(E)
    sup = haagerup_sup(phi)
    bound = haagerup_bound(phi)
    ok = max(len(w) for w in E) == 2 and sup == 9 and bound == 18
    return CriterionResult(
        1, "Haagerup bound for 1_E, |g| <= 2", ok, {"sup_term": sup, "bound": bound, "tol": 0.0}
    )


def c2_leinert(th, seed=DEFAULT_SEED) -> CriterionResult:
    details = []
    measured = {}
    ok = True

    weak = check_leinert_condition(generate_family(SetFamilySpec(Family.UPPER_TRIANGULAR_WEAK, 3)), 2)
    good = isinstance(weak, Violation) and verify_witness(weak.witness)
    measured["weak3"] = weak.to_dict()
    details.append(f"UpperTriangularWeak(3), depth 2: expect violation -> {_verdict(weak)}")
    ok &= good

    strict = check_leinert_condition(generate_family(SetFamilySpec(Family.UPPER_TRIANGULAR_STRICT, 4)), 3)
    good = isinstance(strict, NoViolationUpTo) and strict.depth == 3
    measured["strict4"] = strict.to_dict()
    details.append(f"UpperTriangularStrict(4), depth 3: expect no violation -> {_verdict(strict)}")
    ok &= good

    gens = check_leinert_condition(generate_family(SetFamilySpec(Family.GENERATORS, 4)), 4)
    good = isinstance(gens, NoViolationUpTo) and gens.depth == 4
    measured["gens4"] = gens.to_dict()
    details.append(f"Generators(4), depth 4: expect no violation -> {_verdict(gens)}")
    ok &= good
    return CriterionResult(2, "Leinert witness discovery", ok, measured, details=details)


def _verdict(v) -> str:
    if isinstance(v, Violation):
        return "violation (" + ", ".join(format_word(w) for w in v.witness) + ")"
    return f"no violation up to {v.depth}"


def random_block_function(rng, ball_keys, dmax=4) -> CoefficientFunction:
    d = int(rng.integers(1, dmax + 1))
    size = int(rng.integers(1, 7))
    picks = rng.choice(len(ball_keys), size=size, replace=False)
    return random_coefficients([Word(ball_keys[i]) for i in sorted(picks)], d, rng)


def c3_sandwich(th, seed=DEFAULT_SEED, trials=50) -> CriterionResult:
    rng = np.random.default_rng(seed)
    b2 = enumerate_ball(2, 2).keys
    ball = enumerate_ball(2, 4)
    worst_low = worst_high = np.inf
    for _ in range(trials):
        a = random_block_function(rng, b2)
        norm = operator_norm(build_compression(a, 4, 2, ball=ball)).value
        row, col = row_column_bounds(a)
        worst_low = min(worst_low, norm - max(row, col))
        worst_high = min(worst_high, a.l1_bound() - norm)
    ok = worst_low >= th["c3_slack"] and worst_high >= th["c3_slack"]
    return CriterionResult(
        3,
        "norm sandwich max(row,col) <= ||compression|| <= l1",
        ok,
        {"min_lower_slack": float(worst_low), "min_upper_slack": float(worst_high),
         "slack_floor": th["c3_slack"], "seed": seed, "trials": trials},
    )


def c4_monotone(th, seed=DEFAULT_SEED) -> CriterionResult:
    a = CoefficientFunction({Word((1,)): 1.0, Word((2,)): 1.0})
    norms = [operator_norm(build_compression(a, r, 2)).value for r in range(1, 13)]
    mono = all(y >= x for x, y in zip(norms, norms[1:]))
    last = norms[-1]
    ok = mono and th["c4_low"] <= last <= th["c4_high"]
    return CriterionResult(
        4,
        "compression monotonicity, ||lambda(x1)+lambda(x2)|| at r=12",
        ok,
        {"nondecreasing": mono, "norm_r12": last, "interval": [th["c4_low"], th["c4_high"]],
         "tol": DEFAULT_TOL},
    )


GROWTH_DIMS = (8, 16, 32, 64, 128, 256, 512, 1024)


def c5_growth(th, seed=DEFAULT_SEED) -> CriterionResult:
    rows = triangular_growth_sweep(GROWTH_DIMS)
    max_h = max(r.norm_H for r in rows)
    rhos = [r.rho for r in rows]
    mono = all(y >= x for x, y in zip(rhos, rhos[1:]))
    growth = rhos[-1] / rhos[0]
    ok = max_h <= th["c5_norm_h"] and mono and growth >= th["c5_growth"]
    return CriterionResult(
        5,
        "upper-triangular truncation growth",
        ok,
        {"max_norm_H": max_h, "rho_nondecreasing": mono, "rho_1024_over_rho_8": growth,
         "rho": [round(x, 6) for x in rhos], "tol": DEFAULT_TOL},
    )


def c6_interpolation(th, seed=DEFAULT_SEED, trials=100) -> CriterionResult:
    rng = np.random.default_rng(seed)
    grid = FrequencyGrid()
    worst_err = 0.0
    worst_a = 0.0
    for _ in range(trials):
        x = rng.standard_normal(50) + 1j * rng.standard_normal(50)
        x /= np.linalg.norm(x)
        phi = IntegerSequence.from_array(0, x)
        f = gamma_interpolate(phi, grid=grid)
        vals = f.values_at_integers()
        worst_err = max(worst_err, max(abs(vals[n] - phi[n]) for n in grid.integer_window()))
        worst_a = max(worst_a, a_norm(f))
    ok = worst_err <= th["c6_interp"] and worst_a <= th["c6_contraction"]
    return CriterionResult(
        6,
        "interpolation and contraction of Gamma on Z in R",
        ok,
        {"max_interp_error": worst_err, "max_a_norm": worst_a,
         "interp_tol": th["c6_interp"], "contraction_bound": th["c6_contraction"], "seed": seed},
    )


def c7_projection(th, seed=DEFAULT_SEED, trials=20) -> CriterionResult:
    rng = np.random.default_rng(seed + 7)
    grid = FrequencyGrid()
    worst_idem = worst_vanish = 0.0
    for _ in range(trials):
        v = random_bandlimited(grid, rng)
        pv = complement_projection(v)
        ppv = complement_projection(pv)
        worst_idem = max(worst_idem, a_norm(ppv - pv))
        worst_vanish = max(worst_vanish, max(map(abs, pv.values_at_integers().values.values()), default=0.0))
    ok = worst_idem <= th["c7_idempotent"] and worst_vanish <= th["c7_vanish"]
    return CriterionResult(
        7,
        "projection laws P^2 = P and Pv|_Z = 0",
        ok,
        {"max_idempotence_a_norm": worst_idem, "max_on_integers": worst_vanish,
         "tol": th["c7_idempotent"], "seed": seed + 7},
    )


def random_scalar_function(rng, keys, size) -> CoefficientFunction:
    picks = rng.choice(len(keys), size=size, replace=False)
    return CoefficientFunction(
        {Word(keys[i]): complex(rng.standard_normal(), rng.standard_normal()) for i in picks}
    )


def c8_module(th, seed=DEFAULT_SEED, trials=100) -> CriterionResult:
    rng = np.random.default_rng(seed + 8)
    keys = enumerate_ball(3, 2).keys
    failures = 0
    for _ in range(trials):
        T = random_scalar_function(rng, keys, int(rng.integers(1, 15)))
        v = random_scalar_function(rng, keys, int(rng.integers(1, 15)))
        picks = rng.choice(len(keys), size=int(rng.integers(0, 15)), replace=False)
        E = {Word(keys[i]) for i in picks}
        if vn_restrict(pointwise_product(v, T), E) != pointwise_product(v, vn_restrict(T, E)):
            failures += 1
    return CriterionResult(
        8, "module property of the restriction projection", failures == 0,
        {"failures": failures, "pairs": trials, "tol": 0.0},
    )


def oracle_corpus(seed=DEFAULT_SEED):
    """Matrices of dimension <= 200 used across the test suite."""
    out = []
    a = CoefficientFunction({Word((1,)): 1.0, Word((2,)): 1.0})
    for r in range(1, 5):
        out.append((f"x1+x2 r={r}", build_compression(a, r, 2).matrix))
    out.append(("delta_e r=3", build_compression(CoefficientFunction({Word(): 1.0}), 3, 2).matrix))
    out.append(("delta_x1 r=3", build_compression(CoefficientFunction({Word((1,)): 1.0}), 3, 2).matrix))
    rng = np.random.default_rng(seed + 9)
    b2 = enumerate_ball(2, 2).keys
    for d, r in ((1, 4), (2, 3), (3, 2), (4, 2)):
        for t in range(3):
            size = int(rng.integers(1, 7))
            picks = rng.choice(len(b2), size=size, replace=False)
            f = random_coefficients([Word(b2[i]) for i in sorted(picks)], d, rng)
            out.append((f"random d={d} r={r} #{t}", build_compression(f, r, 2).matrix))
    for n in (8, 16, 64, 128, 200):
        H = hilbert_kernel(n)
        out.append((f"H_{n}", H))
        out.append((f"Tri(H_{n})", np.triu(H)))
    return [(name, M) for name, M in out if max(M.shape) <= 200]


def c9_oracle(th, seed=DEFAULT_SEED) -> CriterionResult:
    worst = 0.0
    worst_name = ""
    corpus = oracle_corpus(seed)
    for name, M in corpus:
        est = power_norm(M.tocsr() if hasattr(M, "tocsr") else M).value
        ref = dense_norm(M)
        rel = abs(est - ref) / ref if ref else abs(est)
        if rel >= worst:
            worst, worst_name = rel, name
    return CriterionResult(
        9, "power iteration vs dense SVD (dim <= 200)", worst <= th["c9_rel"],
        {"instances": len(corpus), "max_rel_error": worst, "worst_instance": worst_name,
         "rel_tol": th["c9_rel"]},
    )


CRITERIA: dict[int, Callable] = {
    1: c1_haagerup,
    2: c2_leinert,
    3: c3_sandwich,
    4: c4_monotone,
    5: c5_growth,
    6: c6_interpolation,
    7: c7_projection,
    8: c8_module,
    9: c9_oracle,
}


def run_criterion(number: int, overrides: dict | None = None, seed: int = DEFAULT_SEED) -> CriterionResult:
    unknown = set(overrides or {}) - set(THRESHOLDS)
    if unknown:
        raise KeyError(f"unknown thresholds: {sorted(unknown)}")
    th = {**THRESHOLDS, **(overrides or {})}
    t0 = time.perf_counter()
    res = CRITERIA[number](th, seed=seed)
    res.runtime_s = time.perf_counter() - t0
    res.runtime_limit_s = RUNTIME_LIMITS[number]
    return res


def run_acceptance_suite(only=None, overrides: dict | None = None, seed: int = DEFAULT_SEED) -> list[CriterionResult]:
    numbers = sorted(only) if only else sorted(CRITERIA)
    return [run_criterion(n, overrides, seed) for n in numbers]
