"""Closed-form evaluation of harmonic-number series.

Given a polynomial ``F``, a harmonic order ``m``, a rational shift ``z`` in
(-1, 0] and a denominator exponent vector ``s``, the series

    sum_{n>=1} F(H_n^(m)(z), H_n^(2m)(z), ...) / prod_i (n+i-1+z)^{s_i}

equals an exact rational constant plus a rational combination of multiple
Hurwitz zeta values ``zeta(v_1, ..., v_k; z)``.  ``closed_form`` computes that
combination exactly: the polynomial becomes a quasi-symmetric function in the
monomial basis, the exponent vector is reduced to canonical families, and each
(family, basis element) pair is evaluated by telescoping and partial-fraction
recursions whose only atoms are zeta vectors and finite harmonic values.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from typing import Mapping, Optional

from .qsym import Composition, Polynomial, as_shift, poly_to_qsym
from .reducer import (
    Index,
    as_index,
    canonicalize,
    classify,
    expand_double_one,
)

ZetaVector = tuple[int, ...]
ZetaMonomial = tuple[ZetaVector, ...]  # sorted multiset of vectors


def check_vector(v: ZetaVector) -> ZetaVector:
    vec = tuple(v)
    if not vec or any(not isinstance(e, int) or e < 1 for e in vec) or vec[-1] < 2:
        raise ValueError(
            f"zeta vector must have entries >= 1 and last entry >= 2: {v!r}"
        )
    return vec


def vector_sort_key(v: ZetaVector) -> tuple:
    return (sum(v), len(v), v)


def monomial_key(factors) -> ZetaMonomial:
    return tuple(sorted((check_vector(v) for v in factors), key=vector_sort_key))


def monomial_sort_key(mono: ZetaMonomial) -> tuple:
    return (sum(sum(v) for v in mono), sum(len(v) for v in mono), mono)


def harmonic_value(a: int, ell: int, z) -> Fraction:
    """Exact finite harmonic value: sum of 1/(j+z)^ell for j = 1..a."""
    zq = as_shift(z)
    if a < 0 or ell < 1:
        raise ValueError("harmonic_value requires a >= 0 and ell >= 1")
    return sum((Fraction(1) / (j + zq) ** ell for j in range(1, a + 1)), Fraction(0))


@dataclass
class ClosedForm:
    """Exact rational constant plus zeta-monomial combination at fixed (z, m)."""

    constant: Fraction
    terms: dict
    shift: Fraction
    order: int

    def __post_init__(self):
        self.constant = Fraction(self.constant)
        self.shift = Fraction(self.shift)
        clean = {}
        for mono, coeff in self.terms.items():
            key = monomial_key(mono)
            c = Fraction(coeff)
            if c:
                clean[key] = clean.get(key, Fraction(0)) + c
        self.terms = {k: v for k, v in clean.items() if v}

    def _check_compatible(self, other: "ClosedForm") -> None:
        if self.shift != other.shift or self.order != other.order:
            raise ValueError(
                "cannot combine closed forms with different (shift, order): "
                f"({self.shift}, {self.order}) vs ({other.shift}, {other.order})"
            )

    def __add__(self, other: "ClosedForm") -> "ClosedForm":
        if not isinstance(other, ClosedForm):
            return NotImplemented
        self._check_compatible(other)
        terms = dict(self.terms)
        for mono, coeff in other.terms.items():
            terms[mono] = terms.get(mono, Fraction(0)) + coeff
        return ClosedForm(self.constant + other.constant, terms, self.shift, self.order)

    def __sub__(self, other: "ClosedForm") -> "ClosedForm":
        return self + (-1) * other

    def scaled(self, scalar) -> "ClosedForm":
        c = Fraction(scalar)
        return ClosedForm(
            c * self.constant,
            {mono: c * coeff for mono, coeff in self.terms.items()},
            self.shift,
            self.order,
        )

    def __mul__(self, scalar):
        if isinstance(scalar, (int, Fraction)):
            return self.scaled(scalar)
        return NotImplemented

    __rmul__ = __mul__

    def zeta_coefficient(self, vector) -> Fraction:
        """Coefficient of a single zeta value (depth-one monomial)."""
        return self.terms.get((check_vector(vector),), Fraction(0))

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: monomial_sort_key(kv[0]))

    def is_constant(self) -> bool:
        return not self.terms

    def max_weight(self) -> int:
        return max((sum(sum(v) for v in mono) for mono in self.terms), default=0)


@dataclass(frozen=True)
class SeriesSpec:
    """One series instance: numerator polynomial, order, shift, exponents."""

    F: Polynomial
    m: int
    z: Fraction
    s: Index

    def __post_init__(self):
        if not isinstance(self.F, Polynomial):
            raise TypeError("F must be a Polynomial")
        if not isinstance(self.m, int) or self.m < 1:
            raise ValueError("m must be a positive integer")
        object.__setattr__(self, "z", as_shift(self.z))
        object.__setattr__(self, "s", as_index(self.s))


class _Evaluator:
    """Per-pipeline-call evaluator for canonical families on basis elements.

    Memoizes the two recursions (adjacent-pair values and telescoping steps)
    for the fixed (m, z) of one closed_form invocation.
    """

    def __init__(self, m: int, z: Fraction):
        self.m = m
        self.z = Fraction(z)
        self._pair: dict = {}
        self._t: dict = {}

    def _empty(self) -> ClosedForm:
        return ClosedForm(Fraction(0), {}, self.z, self.m)

    def _const(self, value: Fraction) -> ClosedForm:
        return ClosedForm(value, {}, self.z, self.m)

    def _zeta(self, vector: ZetaVector, coeff: Fraction) -> ClosedForm:
        return ClosedForm(Fraction(0), {(check_vector(vector),): coeff}, self.z, self.m)

    def pair_value(self, b: int, comp: Composition) -> ClosedForm:
        """Value of the adjacent-pair family (0^b, 1, 1) on a basis element.

        The series sum_n M_comp(n) / ((n+b+z)(n+b+1+z)).  For b = 0 a single
        telescoping collapses the tail; for b >= 1, splitting
        1/((n+z)^m (n+b+z)) into simple poles yields a recursion that lowers
        either the last part or the depth of the composition.
        """
        key = (b, comp)
        hit = self._pair.get(key)
        if hit is not None:
            return hit
        m, z = self.m, self.z
        if not comp:
            cf = self._const(Fraction(1, 1) / (b + 1 + z))
        elif b == 0:
            vec = tuple(m * a for a in comp[:-1]) + (m * comp[-1] + 1,)
            cf = self._zeta(vec, Fraction(1))
        elif comp == (1,):
            cf = self._const(
                Fraction((-1) ** (m - 1), b**m) * harmonic_value(b, 1, z)
            )
            for r in range(m - 1):
                cf = cf + self._zeta((m - r,), Fraction((-1) ** r, b ** (r + 1)))
        elif comp[-1] == 1:
            prefix = comp[:-1]
            cf = self._empty()
            for r in range(1, b + 1):
                cf = cf + self.pair_value(r, prefix)
            cf = cf.scaled(Fraction((-1) ** (m - 1), b**m))
            pv = tuple(m * a for a in prefix)
            for r in range(m - 1):
                cf = cf + self._zeta(pv + (m - r,), Fraction((-1) ** r, b ** (r + 1)))
        else:
            lowered = comp[:-1] + (comp[-1] - 1,)
            cf = self.pair_value(b, lowered).scaled(Fraction((-1) ** m, b**m))
            base = tuple(m * a for a in comp)
            for r in range(m):
                vec = base[:-1] + (base[-1] - r,)
                cf = cf + self._zeta(vec, Fraction((-1) ** r, b ** (r + 1)))
        self._pair[key] = cf
        return cf

    def t_value(self, a: int, p: int, comp: Composition) -> ClosedForm:
        """Telescoping step: the (0^a, p) value minus the (0^(a+1), p) value.

        Defined for a >= 1, p >= 1; for p = 1 it coincides with the
        adjacent-pair family at shift a.  Splitting the two trailing factors
        1/((n_k+z)^{m*last} (n_k+a+z)^p) by partial fractions reduces depth.
        """
        if p == 1:
            return self.pair_value(a, comp)
        key = (a, p, comp)
        hit = self._t.get(key)
        if hit is not None:
            return hit
        m, z = self.m, self.z
        if not comp:
            cf = self._const(Fraction(1, 1) / (a + 1 + z) ** p)
        elif len(comp) == 1:
            w = m * comp[0]
            cf = self._empty()
            for l in range(2, w + 1):
                c = Fraction(
                    math.comb(w + p - l - 1, p - 1) * (-1) ** (w - l), a ** (p + w - l)
                )
                cf = cf + self._zeta((l,), c)
            for l in range(2, p + 1):
                c = Fraction(
                    math.comb(w + p - l - 1, w - 1) * (-1) ** w, a ** (p + w - l)
                )
                cf = cf + self._zeta((l,), c)
            const = Fraction(0)
            for l in range(1, p + 1):
                c = Fraction(
                    math.comb(w + p - l - 1, w - 1) * (-1) ** (w - 1), a ** (p + w - l)
                )
                const += c * harmonic_value(a, l, z)
            cf = cf + self._const(const)
        else:
            w = m * comp[-1]
            prefix = comp[:-1]
            pv = tuple(m * x for x in prefix)
            cf = self._empty()
            for l in range(2, w + 1):
                c = Fraction(
                    math.comb(w + p - l - 1, p - 1) * (-1) ** (w - l), a ** (p + w - l)
                )
                cf = cf + self._zeta(pv + (l,), c)
            for l in range(2, p + 1):
                c = Fraction(
                    math.comb(w + p - l - 1, w - 1) * (-1) ** w, a ** (p + w - l)
                )
                cf = cf + self._zeta(pv + (l,), c)
            for l in range(1, p + 1):
                c = Fraction(
                    math.comb(w + p - l - 1, w - 1) * (-1) ** (w - 1), a ** (p + w - l)
                )
                inner = self._empty()
                for j in range(1, a + 1):
                    inner = inner + self.t_value(j, l, prefix)
                cf = cf + inner.scaled(c)
        self._t[key] = cf
        return cf

    def power_value(self, a: int, p: int, comp: Composition) -> ClosedForm:
        """Value of the lone-power family (0^a, p), p >= 2, on a basis element."""
        if p < 2:
            raise ValueError("power family requires p >= 2")
        m, z = self.m, self.z
        if not comp:
            return self._zeta((p,), Fraction(1)) + self._const(-harmonic_value(a, p, z))
        base = tuple(m * x for x in comp)
        if a == 0:
            return self._zeta(base[:-1] + (base[-1] + p,), Fraction(1)) + self._zeta(
                base + (p,), Fraction(1)
            )
        cf = self._zeta(base + (p,), Fraction(1))
        for j in range(1, a):
            cf = cf - self.t_value(j, p, comp)
        return cf

    def key_value(self, key: Index, comp: Composition) -> ClosedForm:
        kind, x, y = classify(key)
        if kind == "power":
            return self.power_value(x, y, comp)
        if kind == "pair":
            cf = self._empty()
            for k2, c2 in expand_double_one(x, y).items():
                b = len(k2) - 2
                cf = cf + self.pair_value(b, comp).scaled(c2)
            return cf
        raise ValueError(f"not a canonical key: {key!r}")


def _max_emitted_weight(m: int, comp: Composition, s: Index) -> int:
    return m * sum(comp) + sum(s)


def closed_form(spec: SeriesSpec) -> ClosedForm:
    """Full pipeline: exact closed form of the series described by `spec`."""
    u = poly_to_qsym(spec.F)
    comb = canonicalize(spec.s)
    ev = _Evaluator(spec.m, spec.z)
    total = ClosedForm(Fraction(0), {}, spec.z, spec.m)
    for key, c1 in sorted(comb.items(), key=lambda kv: (len(kv[0]), kv[0])):
        for comp, c2 in sorted(u.terms.items(), key=lambda kv: (len(kv[0]), kv[0])):
            part = ev.key_value(key, comp).scaled(c1 * c2)
            bound = _max_emitted_weight(spec.m, comp, spec.s)
            if part.max_weight() > bound:
                raise AssertionError(
                    f"emitted weight {part.max_weight()} exceeds bound {bound}"
                )
            total = total + part
    return total


def index_value(index, comp, m: int, z) -> ClosedForm:
    """Closed form of one exponent-vector functional on one basis element."""
    zq = as_shift(z)
    ev = _Evaluator(m, zq)
    total = ClosedForm(Fraction(0), {}, zq, m)
    for key, coeff in canonicalize(as_index(index)).items():
        total = total + ev.key_value(key, tuple(comp)).scaled(coeff)
    return total


def telescope_value(a: int, p: int, comp, m: int, z) -> ClosedForm:
    """Closed form of the telescoping step on one basis element (a >= 1)."""
    if a < 1:
        raise ValueError("telescope_value requires a >= 1")
    if p < 1:
        raise ValueError("telescope_value requires p >= 1")
    return _Evaluator(m, as_shift(z)).t_value(a, p, tuple(comp))


def pair_family_value(b: int, comp, m: int, z) -> ClosedForm:
    """Closed form of the adjacent-pair family (0^b, 1, 1) on a basis element."""
    if b < 0:
        raise ValueError("pair_family_value requires b >= 0")
    return _Evaluator(m, as_shift(z)).pair_value(b, tuple(comp))


def power_family_value(a: int, p: int, comp, m: int, z) -> ClosedForm:
    """Closed form of the lone-power family (0^a, p) on a basis element."""
    if a < 0:
        raise ValueError("power_family_value requires a >= 0")
    return _Evaluator(m, as_shift(z)).power_value(a, p, tuple(comp))


# ---------------------------------------------------------------------------
# Known-reduction tables
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ReductionRule:
    source: ZetaVector
    constant: Fraction
    terms: tuple  # ((ZetaMonomial, Fraction), ...)


@dataclass(frozen=True)
class ReductionTable:
    shift: Fraction
    rules: Mapping[ZetaVector, ReductionRule]

    def __len__(self) -> int:
        return len(self.rules)


def _table_from_dict(data: dict) -> ReductionTable:
    shift = Fraction(data.get("shift", "0"))
    rules = {}
    for entry in data.get("rules", []):
        source = check_vector(tuple(entry["source"]))
        constant = Fraction(entry.get("constant", "0"))
        terms = tuple(
            (monomial_key(tuple(tuple(v) for v in t["factors"])), Fraction(t["coeff"]))
            for t in entry.get("terms", [])
        )
        rules[source] = ReductionRule(source, constant, terms)
    return ReductionTable(shift, rules)


def load_reduction_table(path) -> ReductionTable:
    """Load a reduction table from a JSON file (rationals as "p/q" strings)."""
    with open(path, "r", encoding="utf-8") as fh:
        return _table_from_dict(json.load(fh))


def default_reduction_table() -> ReductionTable:
    """The shipped z = 0 table: the three depth-two reductions of weight <= 5."""
    text = resources.files("zetaform").joinpath("data/reductions_z0.json").read_text()
    return _table_from_dict(json.loads(text))


def apply_reductions(cf: ClosedForm, table: Optional[ReductionTable]) -> ClosedForm:
    """Substitute table rules into a closed form, iterating to a fixed point.

    Rules apply only when the table shift matches the closed form's shift;
    vectors without an entry pass through unchanged.
    """
    if table is None or table.shift != cf.shift or not table.rules:
        return cf
    constant = cf.constant
    work = dict(cf.terms)
    for _ in range(100):
        new: dict = {}
        changed = False
        for mono, coeff in work.items():
            pos = next((i for i, v in enumerate(mono) if v in table.rules), None)
            if pos is None:
                new[mono] = new.get(mono, Fraction(0)) + coeff
                continue
            changed = True
            rule = table.rules[mono[pos]]
            rest = mono[:pos] + mono[pos + 1 :]
            if rule.constant:
                if rest:
                    new[rest] = new.get(rest, Fraction(0)) + coeff * rule.constant
                else:
                    constant += coeff * rule.constant
            for tmono, tc in rule.terms:
                combined = monomial_key(rest + tmono)
                new[combined] = new.get(combined, Fraction(0)) + coeff * tc
        work = {k: v for k, v in new.items() if v}
        if not changed:
            break
    else:
        raise RuntimeError("reduction table substitution did not terminate")
    return ClosedForm(constant, work, cf.shift, cf.order)
