"""Reduction of series denominator exponent vectors to canonical families.

An exponent vector ``(s_1, ..., s_k)`` of nonnegative integers with total
weight >= 2 labels the linear functional sending a quasi-symmetric function
``u`` to ``sum_n u(n) / prod_i (n+i-1+z)^{s_i}``.  Every such functional is a
rational combination of two canonical families: a lone power after leading
zeros, ``(0^a, p)`` with p >= 2, and a pair of ones possibly separated by
zeros, ``(0^a, 1, 0^b, 1)``.

``reduce_index`` performs the reduction with a fixed, deterministic pivot
rule: split the first and last nonzero exponents via the partial-fraction
identity of ``partial_fraction``, strip trailing zeros, and recurse.  Vectors
that are a lone power, have weight 2, or are a trailing run of ones are left
as units; ``canonicalize`` rewrites runs of three or more ones through
``expand_ones_run`` so only the two canonical families remain.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

Index = tuple[int, ...]
Combination = dict[Index, Fraction]


class DivergentSeriesError(ValueError):
    """Raised when an exponent vector has weight < 2 (the series diverges)."""


def _strip(vec) -> Index:
    t = tuple(vec)
    while t and t[-1] == 0:
        t = t[:-1]
    return t


def as_index(s) -> Index:
    """Validate and normalize an exponent vector (strip trailing zeros)."""
    vec = tuple(s)
    if not vec or any(not isinstance(v, int) or v < 0 for v in vec):
        raise ValueError(f"exponents must be nonnegative integers: {s!r}")
    vec = _strip(vec)
    if sum(vec) < 2:
        raise DivergentSeriesError(
            f"exponent vector {tuple(s)!r} has weight {sum(vec)} < 2; "
            "the series diverges"
        )
    return vec


def index_weight(s) -> int:
    return sum(s)


@dataclass(frozen=True)
class PartialFractionExpansion:
    """Coefficients of 1/(x^k (x+a)^m) against 1/x^l and 1/(x+a)^l."""

    pole_at_zero: tuple[tuple[int, Fraction], ...]
    pole_at_a: tuple[tuple[int, Fraction], ...]


def partial_fraction(k: int, m: int, a: int) -> PartialFractionExpansion:
    """Expand 1/(x^k (x+a)^m) into simple poles at 0 and -a.

    For positive integers k, m, a the expansion is exact:
    coefficient ``C(k-l+m-1, m-1) (-1)^(k-l) / a^(m+k-l)`` on ``1/x^l`` and
    ``C(k-l+m-1, k-1) (-1)^k / a^(m+k-l)`` on ``1/(x+a)^l``.
    """
    if k < 1 or m < 1 or a < 1:
        raise ValueError("partial_fraction requires positive k, m, a")
    at_zero = tuple(
        (l, Fraction(math.comb(k - l + m - 1, m - 1) * (-1) ** (k - l), a ** (m + k - l)))
        for l in range(1, k + 1)
    )
    at_a = tuple(
        (l, Fraction(math.comb(k - l + m - 1, k - 1) * (-1) ** k, a ** (m + k - l)))
        for l in range(1, m + 1)
    )
    return PartialFractionExpansion(at_zero, at_a)


def classify(key: Index) -> tuple:
    """Shape of a reduced unit.

    Returns ("power", a, p) for (0^a, p); ("pair", a, b) for (0^a, 1, 0^b, 1);
    ("ones", a, c) for a trailing run of c >= 3 ones; ("general", None, None)
    otherwise.
    """
    key = _strip(key)
    nz = [i for i, v in enumerate(key) if v]
    if len(nz) == 1:
        return ("power", nz[0], key[nz[0]])
    if nz and all(key[i] == 1 for i in nz):
        if len(nz) == 2:
            return ("pair", nz[0], nz[1] - nz[0] - 1)
        if nz == list(range(nz[0], len(key))):
            return ("ones", nz[0], len(nz))
    return ("general", None, None)


def _is_unit(key: Index) -> bool:
    kind = classify(key)[0]
    return kind != "general" or sum(key) == 2


def reduce_index(s) -> Combination:
    """Rewrite an exponent vector as a combination of reduction units.

    Output keys are lone powers (0^a, p), weight-2 pairs (0^a, 1, 0^b, 1) and
    runs of ones (0^a, 1^c); apply `canonicalize` to also expand the runs.
    The pivot is always (first nonzero, last nonzero), which pins the output
    uniquely; the memo table lives only for the duration of the call.
    """
    start = as_index(s)
    memo: dict[Index, Combination] = {}

    def rec(t: Index) -> Combination:
        hit = memo.get(t)
        if hit is not None:
            return hit
        if _is_unit(t):
            res: Combination = {t: Fraction(1)}
        else:
            nz = [i for i, v in enumerate(t) if v]
            i, j = nz[0], nz[-1]
            scale = Fraction(1, j - i)
            res = {}
            for pos, sign in ((j, 1), (i, -1)):
                child = list(t)
                child[pos] -= 1
                for key, c in rec(_strip(child)).items():
                    res[key] = res.get(key, Fraction(0)) + sign * scale * c
            res = {k: v for k, v in res.items() if v}
        memo[t] = res
        return res

    return dict(rec(start))


def expand_double_one(a: int, b: int) -> Combination:
    """Average of shifted adjacent pairs equal to (0^a, 1, 0^b, 1)."""
    if a < 0 or b < 0:
        raise ValueError("expand_double_one requires a, b >= 0")
    coeff = Fraction(1, b + 1)
    return {(0,) * (r + a) + (1, 1): coeff for r in range(b + 1)}


def expand_ones_run(a: int, c: int) -> Combination:
    """Expansion of the run (0^a, 1^(c+2)) into shifted adjacent pairs."""
    if a < 0 or c < 0:
        raise ValueError("expand_ones_run requires a, c >= 0")
    scale = Fraction(1, math.factorial(c + 1))
    return {
        (0,) * (r + a) + (1, 1): scale * (-1) ** r * math.comb(c, r)
        for r in range(c + 1)
    }


def canonicalize(obj) -> Combination:
    """Fully canonical combination: only (0^a, p) and (0^a, 1, 0^b, 1) keys.

    Accepts an exponent vector or any combination; general keys are reduced
    first, runs of ones are expanded.
    """
    if isinstance(obj, dict):
        comb = obj
    else:
        comb = reduce_index(obj)
    out: Combination = {}

    def add(key: Index, coeff: Fraction) -> None:
        if key in out:
            out[key] += coeff
        else:
            out[key] = coeff

    for key, coeff in comb.items():
        key = as_index(key)
        kind, x, y = classify(key)
        if kind in ("power", "pair"):
            add(key, Fraction(coeff))
        elif kind == "ones":
            for k2, c2 in expand_ones_run(x, y - 2).items():
                add(k2, Fraction(coeff) * c2)
        else:
            for k2, c2 in reduce_index(key).items():
                kind2, x2, y2 = classify(k2)
                if kind2 == "ones":
                    for k3, c3 in expand_ones_run(x2, y2 - 2).items():
                        add(k3, Fraction(coeff) * c2 * c3)
                else:
                    add(k2, Fraction(coeff) * c2)
    return {k: v for k, v in out.items() if v}
