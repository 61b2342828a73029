"""Readers and writers for the plain-text input formats.

Words inside data lines must not contain whitespace (``x1*x2^-1``, not
``x1 * x2^-1``); in set files the whole line is one word, so spaces are fine.
"""

from __future__ import annotations

import math
from pathlib import Path

import numpy as np

from .freegroup import GroupElementSet, format_word, parse_word
from .line import FrequencyGrid, IntegerSequence, SampledLineFunction
from .regrep import CoefficientFunction


def _data_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if line and not line.startswith("#"):
            yield lineno, line


def _complex(tok: str) -> complex:
    if "," in tok:
        re_, im = tok.split(",", 1)
        return complex(float(re_), float(im))
    return complex(float(tok), 0.0)


def parse_set(text: str) -> GroupElementSet:
    words = []
    seen = {}
    for lineno, line in _data_lines(text):
        w = parse_word(line)
        if w in seen:
            raise ValueError(f"line {lineno}: {format_word(w)} repeats line {seen[w]}")
        seen[w] = lineno
        words.append(w)
    return GroupElementSet(words)


def format_set(E) -> str:
    return "".join(format_word(w) + "\n" for w in E)


def parse_coefficients(text: str) -> CoefficientFunction:
    """``WORD re im`` for scalars, or ``WORD`` then d^2 ``re,im`` tokens
    (row-major) for d x d blocks."""
    vals = {}
    for lineno, line in _data_lines(text):
        word, *rest = line.split()
        w = parse_word(word)
        if w in vals:
            raise ValueError(f"line {lineno}: duplicate word {word}")
        try:
            if len(rest) == 2 and not any("," in t for t in rest):
                vals[w] = complex(float(rest[0]), float(rest[1]))
            else:
                d = math.isqrt(len(rest))
                if not rest or d * d != len(rest):
                    raise ValueError(f"expected 2 scalars or d^2 entries, got {len(rest)}")
                block = np.array([_complex(t) for t in rest]).reshape(d, d)
                vals[w] = block if d > 1 else complex(block[0, 0])
        except ValueError as exc:
            raise ValueError(f"line {lineno}: {exc}") from None
    return CoefficientFunction(vals)


def parse_matrix(text: str) -> np.ndarray:
    lines = [line for _, line in _data_lines(text)]
    if not lines:
        raise ValueError("empty matrix file")
    n = int(lines[0])
    if len(lines) - 1 != n:
        raise ValueError(f"expected {n} rows, got {len(lines) - 1}")
    rows = []
    for i, line in enumerate(lines[1:], 1):
        toks = line.split()
        if len(toks) != n:
            raise ValueError(f"row {i}: expected {n} entries, got {len(toks)}")
        rows.append([_complex(t) for t in toks])
    A = np.array(rows, dtype=complex).reshape(n, n)
    return A.real if not A.imag.any() else A


def format_matrix(A) -> str:
    A = np.asarray(A, dtype=complex)
    out = [str(A.shape[0])]
    for row in A:
        out.append(" ".join(f"{z.real:.17g},{z.imag:.17g}" for z in row))
    return "\n".join(out) + "\n"


def parse_sequence(text: str) -> IntegerSequence:
    vals = {}
    for lineno, line in _data_lines(text):
        toks = line.split()
        if len(toks) not in (2, 3):
            raise ValueError(f"line {lineno}: expected 'n re [im]'")
        n = int(toks[0])
        if n in vals:
            raise ValueError(f"line {lineno}: duplicate index {n}")
        vals[n] = complex(float(toks[1]), float(toks[2]) if len(toks) == 3 else 0.0)
    return IntegerSequence(vals)


def parse_function(text: str, delta: float) -> SampledLineFunction:
    """Header ``OMEGA DOMEGA``, then one ``re im`` sample per grid point from
    ``-OMEGA`` upward (``OMEGA`` itself excluded).

    Optional lines ``@ n re im`` add ``c * u(x - n)`` terms whose transform is
    kept in closed form; the samples then hold only the remaining part.
    """
    it = _data_lines(text)
    try:
        _, header = next(it)
    except StopIteration:
        raise ValueError("empty function file") from None
    omega, domega = (float(t) for t in header.split())
    grid = FrequencyGrid.from_header(omega, domega)
    samples = []
    lattice = {}
    for lineno, line in it:
        toks = line.split()
        if toks[0] == "@":
            if len(toks) not in (3, 4):
                raise ValueError(f"line {lineno}: expected '@ n re [im]'")
            n = int(toks[1])
            if n in lattice:
                raise ValueError(f"line {lineno}: duplicate lattice index {n}")
            lattice[n] = complex(float(toks[2]), float(toks[3]) if len(toks) == 4 else 0.0)
            continue
        if len(toks) not in (1, 2):
            raise ValueError(f"line {lineno}: expected 're [im]'")
        samples.append(complex(float(toks[0]), float(toks[1]) if len(toks) == 2 else 0.0))
    if len(samples) != grid.size:
        raise ValueError(f"expected {grid.size} samples for this header, got {len(samples)}")
    return SampledLineFunction(grid, np.array(samples), IntegerSequence(lattice), delta=delta)


def format_function(f: SampledLineFunction) -> str:
    out = [f"{f.grid.omega:.17g} {f.grid.spacing:.17g}"]
    out.extend(f"{z.real:.17g} {z.imag:.17g}" for z in f.band)
    out.extend(f"@ {n} {c.real:.17g} {c.imag:.17g}" for n, c in sorted(f.lattice.values.items()))
    return "\n".join(out) + "\n"


def read_text(path) -> str:
    return Path(path).read_text(encoding="utf-8")
