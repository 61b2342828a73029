"""Bounded search for violations of the Leinert condition.

A finite set ``E`` violates the condition at depth ``n`` when some sequence
``y_1, ..., y_2n`` from ``E`` with ``y_i != y_{i+1}`` has alternating product
``y_1 y_2^-1 y_3 ... y_2n^-1`` equal to the identity.  The search here can only
ever say "no violation up to depth n"; it never certifies the unbounded
condition.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from itertools import product

from .errors import ResourceCapError
from .freegroup import (
    IDENTITY,
    GroupElementSet,
    Word,
    _inv,
    _mul,
    alternating_product,
    enumerate_ball,
)
from .regrep import CoefficientFunction

logger = logging.getLogger(__name__)

DEFAULT_STATE_CAP = 10_000_000


@dataclass(frozen=True)
class NoViolationUpTo:
    depth: int

    def to_dict(self):
        return {"verdict": "no_violation", "depth": self.depth, "witness": []}


@dataclass(frozen=True)
class Violation:
    witness: tuple[Word, ...]

    def __post_init__(self):
        if not verify_witness(self.witness):
            raise AssertionError(f"witness does not verify: {self.witness}")

    @property
    def depth(self) -> int:
        return len(self.witness) // 2

    def to_dict(self):
        from .freegroup import format_word

        return {
            "verdict": "violation",
            "depth": self.depth,
            "witness": [format_word(w) for w in self.witness],
        }


LeinertVerdict = NoViolationUpTo | Violation


def verify_witness(seq) -> bool:
    """Exact re-check: even length, adjacent terms distinct, product is e."""
    seq = tuple(seq)
    if not seq or len(seq) % 2:
        return False
    if any(seq[i] == seq[i + 1] for i in range(len(seq) - 1)):
        return False
    return alternating_product(seq).is_identity()


def check_leinert_condition(
    E: GroupElementSet, max_depth: int, state_cap: int = DEFAULT_STATE_CAP
) -> LeinertVerdict:
    """Iterative deepening over n = 1..max_depth.

    At each stage a depth-first search extends the running reduced product.
    A branch is cut when the product is longer than the remaining factors
    could cancel.  Dead states ``(product, steps left, last element)`` are
    remembered across stages, since the subtree below a state does not depend
    on how it was reached or on the stage.
    """
    elems = list(E)
    if not elems:
        raise ValueError("E must be nonempty")
    if max_depth < 1:
        raise ValueError("max_depth must be >= 1")
    fwd = [w.syms for w in elems]
    bwd = [_inv(s) for s in fwd]
    m = max(len(s) for s in fwd)
    k = len(elems)
    dead: set = set()

    def search(prod, left, last, path):
        if left == 0:
            return not prod
        if len(prod) > left * m:
            return False
        key = (prod, left, last)
        if key in dead:
            return False
        # odd positions (counting from 1) multiply by y, even ones by y^-1
        factors = bwd if left % 2 else fwd
        for j in range(k):
            if j == last:
                continue
            path.append(j)
            if search(_mul(prod, factors[j]), left - 1, j, path):
                return True
            path.pop()
        dead.add(key)
        if len(dead) > state_cap:
            raise ResourceCapError("Leinert memo states", len(dead), state_cap)
        return False

    for n in range(1, max_depth + 1):
        path: list[int] = []
        if search((), 2 * n, -1, path):
            witness = tuple(elems[j] for j in path)
            logger.info("violation at depth %d after %d dead states", n, len(dead))
            return Violation(witness)
        logger.debug("no violation at depth %d (%d dead states)", n, len(dead))
    return NoViolationUpTo(max_depth)


def brute_force_violation(E: GroupElementSet, n: int):
    """Enumerate every admissible sequence of length 2n; return the first
    violating one or ``None``.  Exponential, for cross-checking only."""
    elems = list(E)
    for seq in product(elems, repeat=2 * n):
        if verify_witness(seq):
            return seq
    return None


# --- named families --------------------------------------------------------

class Family(str, Enum):
    GENERATORS = "Generators"
    GENERATORS_AND_INVERSES = "GeneratorsAndInverses"
    WORDS_OF_LENGTH_N = "WordsOfLengthN"
    UPPER_TRIANGULAR_WEAK = "UpperTriangularWeak"
    UPPER_TRIANGULAR_STRICT = "UpperTriangularStrict"


@dataclass(frozen=True)
class SetFamilySpec:
    family: Family
    k: int
    n: int | None = None


def generate_family(spec: SetFamilySpec) -> GroupElementSet:
    """Finite truncation of a named family on generators x_1..x_k.

    For ``WordsOfLengthN`` the set is all reduced words of length ``n`` in F_k.
    """
    try:
        fam = Family(spec.family)
    except ValueError:
        raise ValueError(f"unsupported family {spec.family!r}") from None
    k = spec.k
    if k < 1:
        raise ValueError("k must be >= 1")
    x = [None] + [Word.generator(i) for i in range(1, k + 1)]
    if fam is Family.GENERATORS:
        return GroupElementSet(x[1:])
    if fam is Family.GENERATORS_AND_INVERSES:
        return GroupElementSet(w for i in range(1, k + 1) for w in (x[i], x[i].inverse()))
    if fam is Family.WORDS_OF_LENGTH_N:
        if spec.n is None or spec.n < 0:
            raise ValueError("WordsOfLengthN needs n >= 0")
        ball = enumerate_ball(k, spec.n)
        return GroupElementSet(w for w in ball if len(w) == spec.n)
    strict = fam is Family.UPPER_TRIANGULAR_STRICT
    words = (
        x[i] * x[j].inverse()
        for i in range(1, k + 1)
        for j in range(i + (1 if strict else 0), k + 1)
    )
    # i == j always gives e; keep it once
    return GroupElementSet.dedup(words)


def indicator(E: GroupElementSet, radius: int | None = None) -> CoefficientFunction:
    """1_E restricted to the ball of the given radius (all of E if None)."""
    return CoefficientFunction(
        {w: 1.0 for w in E if radius is None or len(w) <= radius}
    )


__all__ = [
    "IDENTITY",
    "Family",
    "LeinertVerdict",
    "NoViolationUpTo",
    "SetFamilySpec",
    "Violation",
    "brute_force_violation",
    "check_leinert_condition",
    "generate_family",
    "indicator",
    "verify_witness",
]
