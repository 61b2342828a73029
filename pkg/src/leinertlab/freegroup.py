"""Reduced words in free groups, parsing, and Cayley-ball enumeration.

A letter is stored as a signed generator index: ``+i`` is ``x_i`` and ``-i``
is ``x_i^-1``.  Generators are indexed from 1 and any positive index is
allowed, so the same type serves ``F_N`` for every ``N`` and ``F_infinity``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import ResourceCapError, WordParseError

DEFAULT_BALL_CAP = 5_000_000


def _mul(a: tuple, b: tuple) -> tuple:
    # cancel only at the boundary; both inputs are reduced
    k = 0
    n = min(len(a), len(b))
    while k < n and a[-1 - k] == -b[k]:
        k += 1
    if k == 0:
        return a + b
    return a[: len(a) - k] + b[k:]


def _inv(a: tuple) -> tuple:
    return tuple(-s for s in reversed(a))


def _is_reduced(syms: Sequence[int]) -> bool:
    return all(syms[i] != -syms[i + 1] for i in range(len(syms) - 1))


@dataclass(frozen=True, slots=True)
class Word:
    """Reduced word; ``syms`` holds signed generator indices."""

    syms: tuple[int, ...] = ()

    def __post_init__(self):
        syms = tuple(self.syms)
        for s in syms:
            if not isinstance(s, int) or s == 0:
                raise ValueError(f"letters must be nonzero ints, got {s!r}")
        if not _is_reduced(syms):
            raise ValueError(f"word {syms} is not reduced")
        object.__setattr__(self, "syms", syms)

    @classmethod
    def _trusted(cls, syms: tuple) -> "Word":
        w = object.__new__(cls)
        object.__setattr__(w, "syms", syms)
        return w

    @classmethod
    def from_letters(cls, letters: Iterable[tuple[int, int]]) -> "Word":
        """Build from ``(generator_index, sign)`` pairs, reducing as needed."""
        syms = []
        for gen, sign in letters:
            if gen < 1 or sign not in (1, -1):
                raise ValueError(f"bad letter {(gen, sign)!r}")
            syms.append(gen * sign)
        return cls.reduce(syms)

    @classmethod
    def reduce(cls, syms: Iterable[int]) -> "Word":
        out: list[int] = []
        for s in syms:
            if s == 0:
                raise ValueError("letter index 0 is not a generator")
            if out and out[-1] == -s:
                out.pop()
            else:
                out.append(s)
        return cls._trusted(tuple(out))

    @classmethod
    def generator(cls, i: int, sign: int = 1) -> "Word":
        return cls.from_letters([(i, sign)])

    @property
    def letters(self) -> tuple[tuple[int, int], ...]:
        return tuple((abs(s), 1 if s > 0 else -1) for s in self.syms)

    @property
    def length(self) -> int:
        return len(self.syms)

    def __len__(self):
        return len(self.syms)

    def is_identity(self) -> bool:
        return not self.syms

    @property
    def max_generator(self) -> int:
        return max((abs(s) for s in self.syms), default=0)

    def __mul__(self, other: "Word") -> "Word":
        if not isinstance(other, Word):
            return NotImplemented
        return Word._trusted(_mul(self.syms, other.syms))

    def inverse(self) -> "Word":
        return Word._trusted(_inv(self.syms))

    def __invert__(self) -> "Word":
        return self.inverse()

    def __str__(self):
        return format_word(self)

    def __repr__(self):
        return f"Word({format_word(self)!r})"


IDENTITY = Word()


def multiply(w1: Word, w2: Word) -> Word:
    return w1 * w2


def inverse(w: Word) -> Word:
    return w.inverse()


def length(w: Word) -> int:
    return len(w.syms)


def alternating_product(words: Sequence[Word]) -> Word:
    """Return ``w1 w2^-1 w3 w4^-1 ...`` reduced."""
    acc: tuple = ()
    for i, w in enumerate(words):
        acc = _mul(acc, w.syms if i % 2 == 0 else _inv(w.syms))
    return Word._trusted(acc)


# --- text form -------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<e>e)|x(?P<gen>\d+)(?:\s*\^\s*(?P<exp>[+-]?\d+))?)")


def format_word(w: Word) -> str:
    if not w.syms:
        return "e"
    parts = []
    i = 0
    syms = w.syms
    while i < len(syms):
        j = i
        while j < len(syms) and syms[j] == syms[i]:
            j += 1
        gen = abs(syms[i])
        power = (j - i) * (1 if syms[i] > 0 else -1)
        parts.append(f"x{gen}" if power == 1 else f"x{gen}^{power}")
        i = j
    return "*".join(parts)


def parse_word(text: str) -> Word:
    """Parse ``"e"`` or ``x<i>[^<k>]`` terms joined by ``*``.

    Whitespace is ignored.  Errors report the 0-based character position.
    """
    pos = 0
    n = len(text)
    syms: list[int] = []
    saw_identity = False
    nterms = 0
    while True:
        m = _TOKEN.match(text, pos)
        if m is None:
            while pos < n and text[pos].isspace():
                pos += 1
            what = "unexpected end of input" if pos >= n else f"unexpected {text[pos]!r}"
            raise WordParseError(text, pos, what)
        if m.group("e") is not None:
            if nterms:
                raise WordParseError(text, m.start("e"), "identity 'e' must stand alone")
            saw_identity = True
        else:
            if saw_identity:
                raise WordParseError(text, m.start("gen") - 1, "identity 'e' must stand alone")
            gen = int(m.group("gen"))
            if gen < 1:
                raise WordParseError(text, m.start("gen"), "generator index must be >= 1")
            exp = int(m.group("exp")) if m.group("exp") is not None else 1
            syms.extend([gen if exp > 0 else -gen] * abs(exp))
        nterms += 1
        pos = m.end()
        while pos < n and text[pos].isspace():
            pos += 1
        if pos >= n:
            break
        if text[pos] != "*":
            raise WordParseError(text, pos, f"expected '*', got {text[pos]!r}")
        pos += 1
    return Word.reduce(syms)


# --- sets of elements ------------------------------------------------------

class GroupElementSet(Sequence[Word]):
    """Finite ordered set of distinct reduced words."""

    def __init__(self, elements: Iterable[Word] = ()):
        elems = list(elements)
        seen = set()
        for w in elems:
            if w in seen:
                raise ValueError(f"duplicate element {w}")
            seen.add(w)
        self._elements = tuple(elems)
        self._members = frozenset(seen)

    @classmethod
    def dedup(cls, elements: Iterable[Word]) -> "GroupElementSet":
        return cls(dict.fromkeys(elements))

    def __getitem__(self, i):
        return self._elements[i]

    def __len__(self):
        return len(self._elements)

    def __iter__(self) -> Iterator[Word]:
        return iter(self._elements)

    def __contains__(self, w) -> bool:
        return w in self._members

    def __eq__(self, other):
        if isinstance(other, GroupElementSet):
            return self._members == other._members
        return NotImplemented

    def __hash__(self):
        return hash(self._members)

    def __repr__(self):
        return "GroupElementSet([" + ", ".join(map(format_word, self._elements)) + "])"

    @property
    def elements(self) -> tuple[Word, ...]:
        return self._elements

    @property
    def contains_identity(self) -> bool:
        return IDENTITY in self._members

    @property
    def max_length(self) -> int:
        return max((len(w) for w in self._elements), default=0)

    def left_translate(self, g: Word) -> "GroupElementSet":
        return GroupElementSet(g * w for w in self._elements)


# --- Cayley balls ----------------------------------------------------------

def ball_size(num_generators: int, radius: int) -> int:
    """Number of reduced words of length <= radius in F_N."""
    n, r = num_generators, radius
    if n < 1 or r < 0:
        raise ValueError("need N >= 1 and r >= 0")
    if n == 1:
        return 2 * r + 1
    return 1 + 2 * n * ((2 * n - 1) ** r - 1) // (2 * n - 2)


class CayleyBall:
    """All reduced words of length <= r in F_N, in breadth-first order.

    Words are kept internally as raw signed-index tuples; ``index_of`` accepts
    either a ``Word`` or such a tuple.
    """

    def __init__(self, num_generators: int, radius: int, keys: list, index: dict):
        self.num_generators = num_generators
        self.radius = radius
        self.keys = keys
        self.index = index

    def __len__(self):
        return len(self.keys)

    def __getitem__(self, i: int) -> Word:
        return Word._trusted(self.keys[i])

    def __iter__(self) -> Iterator[Word]:
        return (Word._trusted(k) for k in self.keys)

    def __contains__(self, w) -> bool:
        key = w.syms if isinstance(w, Word) else w
        return key in self.index

    @property
    def elements(self) -> list[Word]:
        return list(self)

    def index_of(self, w) -> int:
        key = w.syms if isinstance(w, Word) else w
        return self.index[key]


def enumerate_ball(num_generators: int, radius: int, cap: int = DEFAULT_BALL_CAP) -> CayleyBall:
    """Breadth-first enumeration by right multiplication, skipping the inverse
    of the last letter so that every generated word is already reduced."""
    if num_generators < 1:
        raise ValueError("num_generators must be >= 1")
    if radius < 0:
        raise ValueError("radius must be >= 0")
    size = ball_size(num_generators, radius)
    if size > cap:
        raise ResourceCapError("Cayley ball", size, cap)
    letters = [s for i in range(1, num_generators + 1) for s in (i, -i)]
    keys: list[tuple] = [()]
    frontier: list[tuple] = [()]
    for _ in range(radius):
        nxt = []
        for w in frontier:
            last = w[-1] if w else 0
            for s in letters:
                if s != -last:
                    nxt.append(w + (s,))
        keys.extend(nxt)
        frontier = nxt
    index = {k: i for i, k in enumerate(keys)}
    return CayleyBall(num_generators, radius, keys, index)
