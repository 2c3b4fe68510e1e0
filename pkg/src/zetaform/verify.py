"""Independent numeric oracle for closed forms and raw series.

Multiple Hurwitz zeta values are evaluated by nested summation: the innermost
level is an exact Hurwitz zeta tail, and each outer level is accumulated
backward from a cutoff whose tail is corrected with an Euler-Maclaurin style
closure: the level function times its known power decay is fitted to a short
log-polynomial expansion, and the resulting tail sums are exact s-derivatives
of the Hurwitz zeta.  Raw series are summed in high-precision floating point
at geometrically spaced checkpoints and extrapolated with a fitted power-law
model (log-aware at doubling steps), so verification never reuses the symbolic
machinery it is checking.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from mpmath import mp, mpf, matrix, lu_solve, qr_solve, log as mplog, zeta as mpzeta

from .engine import ClosedForm, SeriesSpec, ZetaVector, check_vector
from .qsym import as_shift

DESK_MAX_DEPTH = 5
DESK_MAX_WEIGHT = 10
DESK_MAX_TERMS = 10**6


class DeskLimitError(ValueError):
    """Raised when a request exceeds the documented desk-scale caps."""


@dataclass
class NumericResult:
    value: mpf
    abs_err_bound: float

    def __float__(self) -> float:
        return float(self.value)


@dataclass
class VerificationReport:
    lhs_estimate: NumericResult
    rhs_value: NumericResult
    discrepancy: float
    passed: bool
    n_used: int
    message: str = ""


def _check_desk_vector(v) -> ZetaVector:
    vec = check_vector(v)
    if len(vec) > DESK_MAX_DEPTH:
        raise DeskLimitError(f"vector depth {len(vec)} exceeds {DESK_MAX_DEPTH}")
    if sum(vec) > DESK_MAX_WEIGHT:
        raise DeskLimitError(f"vector weight {sum(vec)} exceeds {DESK_MAX_WEIGHT}")
    return vec


def _mhz_once(svec: ZetaVector, zq: Fraction, cutoff: int) -> mpf:
    """One evaluation at a fixed cutoff; precision from the ambient context."""
    zz = mpf(zq.numerator) / zq.denominator
    k = len(svec)
    if k == 1:
        return mpzeta(svec[0], 1 + zz)
    # decay order of each level function
    omega = [0] * (k + 1)
    omega[k - 1] = svec[k - 1] - 1
    for j in range(k - 2, -1, -1):
        omega[j] = svec[j] + omega[j + 1] - 1
    nxt: list = []
    for j in range(k - 1, -1, -1):
        s = svec[j]
        cur = [mpf(0)] * (cutoff + 1)
        if j == k - 1:
            cur[cutoff] = mpzeta(s, cutoff + 1 + zz)
            for n in range(cutoff, 0, -1):
                cur[n - 1] = cur[n] + (n + zz) ** (-s)
        else:
            cur[cutoff] = _fitted_tail(nxt, s, omega[j + 1], zz, cutoff, k - 1 - j)
            for n in range(cutoff, 0, -1):
                cur[n - 1] = cur[n] + (n + zz) ** (-s) * nxt[n]
        nxt = cur
    return nxt[0]


def _fitted_tail(values, s, omega, zz, cutoff, logdeg) -> mpf:
    """Tail of sum_{t>cutoff} (t+z)^-s * values[t] via a log-power fit.

    values[t]*(t+z)^omega is fitted on [cutoff/2, cutoff] against
    ln^d(t+z) / (t+z)^q for d <= logdeg, q <= 2; each basis tail is an exact
    s-derivative of the Hurwitz zeta at cutoff+1+z.
    """
    logdeg = min(logdeg, 3)
    basis = [(d, q) for q in range(3) for d in range(logdeg + 1)]
    npts = len(basis)
    pts = [cutoff - round(i * (cutoff / 2) / (npts - 1)) for i in range(npts)]
    rows, rhs = [], []
    for t in pts:
        x = t + zz
        L = mplog(x)
        rows.append([L**d * x ** (-q) for (d, q) in basis])
        rhs.append(values[t] * x**omega)
    coeffs = lu_solve(matrix(rows), matrix(rhs))
    tail = mpf(0)
    for c, (d, q) in zip(coeffs, basis):
        tail += c * (-1) ** d * mpzeta(s + omega + q, cutoff + 1 + zz, d)
    return tail


_MHZ_CACHE: dict = {}


def _cutoff_for(abs_err: float, depth: int) -> int:
    if depth == 1:
        return 0
    if abs_err >= 1e-7:
        return 3000
    if abs_err >= 1e-11:
        return 10000
    return 20000


def mhz_numeric(v, z, abs_err: float = 1e-12) -> NumericResult:
    """Multiple Hurwitz zeta value with a heuristic error bound.

    Desk-scale only (depth <= 5, weight <= 10).  The bound is taken from the
    change under a cutoff doubling, plus the requested target; the cutoff is
    escalated until that change is within budget.
    """
    vec = _check_desk_vector(v)
    zq = as_shift(z)
    if abs_err <= 0:
        raise ValueError("abs_err must be positive")
    key = (vec, zq, round(-mp.log10(mpf(abs_err))))
    hit = _MHZ_CACHE.get(key)
    if hit is not None:
        return hit
    dps = max(30, int(-mp.log10(mpf(abs_err))) + 12)
    with mp.workdps(dps):
        if len(vec) == 1:
            value = _mhz_once(vec, zq, 0)
            result = NumericResult(value, float(mpf(10) ** (5 - dps)))
        else:
            cutoff = _cutoff_for(abs_err, len(vec))
            coarse = _mhz_once(vec, zq, cutoff // 2)
            value = _mhz_once(vec, zq, cutoff)
            delta = abs(value - coarse)
            for _ in range(2):
                if delta <= abs_err / 4:
                    break
                cutoff *= 2
                coarse, value = value, _mhz_once(vec, zq, cutoff)
                delta = abs(value - coarse)
            bound = float(delta + mpf(10) ** (5 - dps))
            result = NumericResult(value, bound)
    _MHZ_CACHE[key] = result
    return result


def closed_form_numeric(cf: ClosedForm, abs_err: float = 1e-10) -> NumericResult:
    """Evaluate a closed form numerically, propagating per-term bounds."""
    nterms = sum(len(mono) for mono in cf.terms) + 1
    budget = abs_err / max(nterms, 1)
    dps = max(30, int(-mp.log10(mpf(abs_err))) + 12)
    with mp.workdps(dps):
        total = mpf(cf.constant.numerator) / cf.constant.denominator
        bound = mpf(0)
        for mono, coeff in cf.sorted_terms():
            prod = mpf(1)
            prod_bound = mpf(0)
            for v in mono:
                r = mhz_numeric(v, cf.shift, budget)
                prod_bound = prod_bound * abs(r.value) + abs(prod) * r.abs_err_bound
                prod *= r.value
            c = mpf(coeff.numerator) / coeff.denominator
            total += c * prod
            bound += abs(c) * prod_bound
        return NumericResult(total, float(bound))


def series_partial_sum(spec: SeriesSpec, N: int) -> Fraction:
    """Exact rational partial sum of the series through n = N."""
    if N < 1:
        raise ValueError("N must be positive")
    if N > DESK_MAX_TERMS:
        raise DeskLimitError(f"N={N} exceeds desk cap {DESK_MAX_TERMS}")
    z = spec.z
    ell = spec.F.max_variable()
    harmonics = [Fraction(0)] * ell
    total = Fraction(0)
    for n in range(1, N + 1):
        base = Fraction(1, 1) / (n + z) ** spec.m
        power = Fraction(1)
        for i in range(ell):
            power *= base
            harmonics[i] += power
        den = Fraction(1)
        for i, e in enumerate(spec.s):
            if e:
                den *= (n + i + z) ** e
        total += spec.F.evaluate(harmonics) / den
    return total


class _SeriesSummer:
    """Incremental floating-point partial sums of one series."""

    def __init__(self, spec: SeriesSpec):
        self.spec = spec
        self.zz = mpf(spec.z.numerator) / spec.z.denominator
        self.ell = spec.F.max_variable()
        self.coeffs = {
            exps: mpf(c.numerator) / c.denominator for exps, c in spec.F.terms.items()
        }
        self.harmonics = [mpf(0)] * self.ell
        self.total = mpf(0)
        self.n = 0

    def advance_to(self, M: int) -> mpf:
        zz = self.zz
        spec = self.spec
        while self.n < M:
            self.n += 1
            n = self.n
            base = (n + zz) ** (-spec.m)
            power = mpf(1)
            for i in range(self.ell):
                power *= base
                self.harmonics[i] += power
            num = mpf(0)
            for exps, c in self.coeffs.items():
                term = c
                for i, e in enumerate(exps):
                    if e:
                        term *= self.harmonics[i] ** e
                num += term
            den = mpf(1)
            for i, e in enumerate(spec.s):
                if e:
                    den *= (n + i + zz) ** e
            self.total += num / den
        return self.total


def series_checkpoints(spec: SeriesSpec, checkpoints: Sequence[int]) -> list:
    """Partial sums at increasing checkpoints, in floating point."""
    summer = _SeriesSummer(spec)
    return [summer.advance_to(M) for M in checkpoints]


def _fit_limit(values: Sequence, levels: Sequence[int], logdeg: int) -> mpf:
    """Fit S_i = S_inf + sum_{q in levels} poly_d(i) 2^(-q i), return S_inf.

    At doubling checkpoints a remainder expansion in log^d(M)/M^q becomes a
    polynomial in the index times 2^(-q i), so the model is linear.
    """
    rows, rhs = [], []
    for i, si in enumerate(values):
        row = [mpf(1)]
        for q in levels:
            g = mpf(2) ** (-q * i)
            for d in range(logdeg + 1):
                row.append(g * i**d)
        rows.append(row)
        rhs.append(si)
    cols = 1 + len(levels) * (logdeg + 1)
    A, b = matrix(rows), matrix(rhs)
    if len(values) == cols:
        x = lu_solve(A, b)
    else:
        x, _ = qr_solve(A, b)
    return x[0]


def _dominant_order(vals: Sequence) -> int:
    """Round the observed decay order of the checkpoint increments."""
    d1 = vals[-2] - vals[-3]
    d2 = vals[-1] - vals[-2]
    if d1 == 0 or d2 == 0 or (d1 > 0) != (d2 > 0):
        return 1
    ratio = abs(d2) / abs(d1)
    if not 0 < ratio < 1:
        return 1
    q = -mp.log(ratio) / mp.log(2)
    return min(6, max(1, int(mp.nint(q))))


def _aitken(vals: Sequence) -> mpf:
    d1 = vals[-2] - vals[-3]
    d2 = vals[-1] - vals[-2]
    denom = d1 - d2
    if denom == 0:
        return vals[-1]
    return vals[-1] + d2 * d2 / denom


def extrapolate_checkpoints(values: Sequence) -> tuple:
    """Limit estimate from partial sums at doubling checkpoints.

    Returns (estimate, error_estimate).  The remainder model is a power law
    with fitted order q and log-polynomial corrections; the error estimate
    compares the richest feasible fit against the same fit with the first
    checkpoint dropped (or against plain geometric extrapolation when only
    three points are available).
    """
    vals = [mpf(v) for v in values]
    if len(vals) < 3:
        raise ValueError("need at least three checkpoints")
    floor = abs(vals[-1]) * mp.eps * 100 + mpf(10) ** (-mp.dps)
    d_last = abs(vals[-1] - vals[-2])
    if d_last <= floor:
        return vals[-1], abs(vals[-1] - vals[-3]) + floor
    q0 = _dominant_order(vals)
    ladder = [
        ((q0,), 1),
        ((q0, q0 + 1), 1),
        ((q0, q0 + 1), 2),
        ((max(1, q0 - 1), q0, q0 + 1), 2),
    ]
    feasible = [
        (levels, deg)
        for levels, deg in ladder
        if 1 + len(levels) * (deg + 1) <= len(vals)
    ]
    levels, deg = feasible[-1]
    est = _fit_limit(vals, levels, deg)
    cols = 1 + len(levels) * (deg + 1)
    if len(vals) - 1 >= cols:
        partner = _fit_limit(vals[1:], levels, deg)
    elif len(feasible) >= 2:
        partner = _fit_limit(vals, *feasible[-2])
    else:
        partner = _aitken(vals)
    return est, abs(est - partner) + floor


def _oscillation_failure(values: Sequence) -> bool:
    diffs = [values[i + 1] - values[i] for i in range(len(values) - 1)]
    flips = sum(
        1 for a, b in zip(diffs, diffs[1:]) if a * b < 0 and abs(b) >= abs(a)
    )
    return flips >= 2


def verify_identity(
    spec: SeriesSpec,
    cf: ClosedForm,
    tol: float = 1e-8,
    N: int = 10000,
) -> VerificationReport:
    """Numerically certify that a closed form matches its series.

    The raw series is summed at checkpoints N, 2N, 4N, ... and the limit is
    extrapolated with the fitted power-law model; checkpoints are extended
    (within desk caps) until the model's own error estimate is within tol/2.
    """
    if cf.shift != spec.z or cf.order != spec.m:
        raise ValueError("closed form metadata does not match the series spec")
    if tol <= 0:
        raise ValueError("tol must be positive")
    rhs = closed_form_numeric(cf, abs_err=min(tol / 8, 1e-10))
    with mp.workdps(30):
        summer = _SeriesSummer(spec)
        checkpoints = [N, 2 * N, 4 * N]
        sums = [summer.advance_to(M) for M in checkpoints]
        while True:
            est, err = extrapolate_checkpoints(sums)
            nxt = checkpoints[-1] * 2
            converged = err <= tol / 4 and (
                len(checkpoints) >= 5 or abs(sums[-1] - sums[-2]) <= err
            )
            if converged or len(checkpoints) > 9 or nxt > DESK_MAX_TERMS:
                break
            checkpoints.append(nxt)
            sums.append(summer.advance_to(nxt))
        message = ""
        if _oscillation_failure(sums):
            return VerificationReport(
                NumericResult(est, float(err)),
                rhs,
                float("inf"),
                False,
                checkpoints[-1],
                "non-convergent extrapolation: oscillating increments",
            )
        discrepancy = float(abs(est - rhs.value))
        combined = tol + float(err) + rhs.abs_err_bound
        passed = discrepancy <= combined
        if not passed:
            message = f"discrepancy {discrepancy:.3e} exceeds budget {combined:.3e}"
    return VerificationReport(
        NumericResult(est, float(err)), rhs, discrepancy, passed, checkpoints[-1], message
    )
