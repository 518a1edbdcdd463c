"""Strichartz exponent bookkeeping for the one-dimensional contraction argument.

The working set of spatial exponents r is

    I(sigma, gamma) = (2, 2/sigma) & [3/(1+sigma), 6/(1+2 sigma)] & [gamma, 2 gamma].

The first factor comes from the potential estimate, the second from requiring
the nonlocal term's dual exponents to be admissible, the third from the power
term.  Inputs given as int, Fraction or "p/q" strings are handled in exact
rational arithmetic; floats use a 1e-12 tolerance on endpoint comparisons.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from .errors import ConfigurationError, DomainError

Number = Union[int, float, Fraction]
TOL = 1e-12
INF = math.inf

SUBCRITICAL, CRITICAL, SUPERCRITICAL = "subcritical", "critical", "supercritical"


def as_number(x) -> Number:
    """Parse ``x``; strings such as "1/3" become exact Fractions."""
    if isinstance(x, str):
        s = x.strip().lower()
        if s in ("inf", "infinity", "+inf"):
            return INF
        try:
            return Fraction(s)
        except ValueError:
            return float(s)
    if isinstance(x, (bool, np.bool_)):
        raise TypeError("booleans are not exponents")
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, Fraction):
        return x
    return float(x)


def _exact(*xs) -> bool:
    return all(isinstance(x, (int, Fraction)) for x in xs)


def _inv(x):
    if x == INF:
        return 0
    return Fraction(1) / x if _exact(x) else 1.0 / x


def _from_inv(y):
    if y == 0:
        return INF
    return Fraction(1) / y if _exact(y) else 1.0 / y


def _eq(a, b, exact):
    return a == b if exact else abs(a - b) <= TOL * max(1.0, abs(a), abs(b))


def _le(a, b, exact):
    return a <= b if exact else a <= b + TOL * max(1.0, abs(a), abs(b))


def _lt(a, b, exact):
    return a < b if exact else a < b - TOL * max(1.0, abs(a), abs(b))


@dataclass(frozen=True)
class Interval:
    lo: Number
    hi: Number
    lo_open: bool = False
    hi_open: bool = False

    def contains(self, r, exact=None) -> bool:
        if exact is None:
            exact = _exact(self.lo, self.hi, r)
        above = _lt(self.lo, r, exact) if self.lo_open else _le(self.lo, r, exact)
        below = _lt(r, self.hi, exact) if self.hi_open else _le(r, self.hi, exact)
        return above and below

    def is_empty(self, exact=None) -> bool:
        if exact is None:
            exact = _exact(self.lo, self.hi)
        if self.lo_open or self.hi_open:
            return not _lt(self.lo, self.hi, exact)
        return not _le(self.lo, self.hi, exact)

    @property
    def width(self) -> float:
        return float(self.hi - self.lo)

    def midpoint(self):
        if _exact(self.lo, self.hi):
            return (Fraction(self.lo) + Fraction(self.hi)) / 2
        return 0.5 * (self.lo + self.hi)


def intersect(intervals: Sequence[Interval], exact: bool) -> Interval:
    lo, lo_open = intervals[0].lo, intervals[0].lo_open
    hi, hi_open = intervals[0].hi, intervals[0].hi_open
    for iv in intervals[1:]:
        if _eq(iv.lo, lo, exact):
            lo_open = lo_open or iv.lo_open
        elif iv.lo > lo:
            lo, lo_open = iv.lo, iv.lo_open
        if _eq(iv.hi, hi, exact):
            hi_open = hi_open or iv.hi_open
        elif iv.hi < hi:
            hi, hi_open = iv.hi, iv.hi_open
    return Interval(lo, hi, lo_open, hi_open)


def is_admissible(q, r, n: int = 1) -> bool:
    """Schroedinger admissibility: 2/q = n/2 - n/r with the n-dependent r-range."""
    if int(n) != n or n <= 0:
        raise ConfigurationError(f"dimension n must be a positive integer, got {n!r}")
    q, r = as_number(q), as_number(r)
    exact = _exact(q, r)
    if not (_le(2, q, exact) and _le(2, r, exact)):
        return False
    if n == 1:
        in_range = True
    elif n == 2:
        in_range = r != INF
    else:
        in_range = r != INF and _le(r, Fraction(2 * n, n - 2) if exact else 2 * n / (n - 2), exact)
    half = Fraction(n, 2) if exact else n / 2
    return in_range and _eq(2 * _inv(q), half - n * _inv(r), exact)


def _check_domain(sigma, gamma):
    if not 0 < sigma < 1:
        raise DomainError(f"sigma must lie strictly inside (0,1), got {sigma!r}")
    if not 1 < gamma <= 5:
        raise DomainError(f"gamma must lie in (1, 5], got {gamma!r}")


def component_intervals(sigma, gamma) -> Tuple[Interval, Interval, Interval]:
    sigma, gamma = as_number(sigma), as_number(gamma)
    one = Fraction(1) if _exact(sigma) else 1.0
    return (Interval(2, 2 * one / sigma, True, True),
            Interval(3 * one / (1 + sigma), 6 * one / (1 + 2 * sigma)),
            Interval(gamma, 2 * gamma))


@dataclass(frozen=True)
class DerivedExponents:
    r_t: Number      # dual spatial exponent for the nonlocal term
    q_t: Number
    r_t1: Number     # dual spatial exponent for the power term
    q_t1: Number
    dual_pairs: Tuple[Tuple[Number, Number], Tuple[Number, Number]]
    q: Number        # time exponent admissible with the working r
    consistent: bool
    displayed_local_identity: bool


@dataclass(frozen=True)
class ExponentReport:
    sigma: Number
    gamma: Number
    interval: Optional[Interval]
    feasible: bool
    sample_r: Optional[Number] = None
    derived: Optional[DerivedExponents] = None


def working_interval(sigma, gamma) -> ExponentReport:
    sigma, gamma = as_number(sigma), as_number(gamma)
    _check_domain(sigma, gamma)
    exact = _exact(sigma, gamma)
    iv = intersect(component_intervals(sigma, gamma), exact)
    if iv.is_empty(exact):
        return ExponentReport(sigma, gamma, None, False)
    r = iv.lo if _eq(iv.lo, iv.hi, exact) else iv.midpoint()
    return ExponentReport(sigma, gamma, iv, True, r, derived_exponents(r, sigma, gamma))


def derived_exponents(r, sigma, gamma) -> DerivedExponents:
    """Dual exponents used to close the Strichartz estimates at spatial exponent r.

    1/r~' = 3/r - sigma and 1/r~1' = gamma/r; the time exponents follow from
    dual admissibility 1/q~' = 5/4 - 1/(2 r~').  ``consistent`` additionally
    cross-checks against the Hoelder identities
    1/q~' = (1+sigma)/2 + 3/q and 1/q~1' = (5-gamma)/4 + gamma/q.
    ``displayed_local_identity`` records whether the form (5-gamma)/2 + 3/q
    also holds (it generally does not).
    """
    r, sigma, gamma = as_number(r), as_number(sigma), as_number(gamma)
    _check_domain(sigma, gamma)
    exact = _exact(r, sigma, gamma)
    if not all(iv.contains(r, exact) for iv in component_intervals(sigma, gamma)):
        raise DomainError(f"r={r!r} is outside the working interval for "
                          f"sigma={sigma!r}, gamma={gamma!r}")
    c = (lambda a, b: Fraction(a, b)) if exact else (lambda a, b: a / b)
    inv_r = _inv(r)
    inv_q = c(1, 4) - inv_r / 2
    inv_rt = 3 * inv_r - sigma
    inv_qt = c(5, 4) - inv_rt / 2
    inv_rt1 = gamma * inv_r
    inv_qt1 = c(5, 4) - inv_rt1 / 2
    pairs = ((_from_inv(1 - inv_qt), _from_inv(1 - inv_rt)),
             (_from_inv(1 - inv_qt1), _from_inv(1 - inv_rt1)))
    nonlocal_ok = _eq(inv_qt, (1 + sigma) / c(2, 1) + 3 * inv_q, exact)
    local_ok = _eq(inv_qt1, (5 - gamma) / c(4, 1) + gamma * inv_q, exact)
    displayed = _eq(inv_qt1, (5 - gamma) / c(2, 1) + 3 * inv_q, exact)
    duals_ok = all(is_admissible(qq, rr, 1) for qq, rr in pairs)
    return DerivedExponents(
        r_t=_from_inv(inv_rt), q_t=_from_inv(inv_qt),
        r_t1=_from_inv(inv_rt1), q_t1=_from_inv(inv_qt1),
        dual_pairs=pairs, q=_from_inv(inv_q),
        consistent=bool(nonlocal_ok and local_ok and duals_ok),
        displayed_local_identity=bool(displayed))


def classify(gamma) -> str:
    gamma = as_number(gamma)
    if not gamma > 1:
        raise DomainError(f"gamma must exceed 1, got {gamma!r}")
    if gamma < 5:
        return SUBCRITICAL
    if gamma == 5:
        return CRITICAL
    return SUPERCRITICAL


@dataclass(frozen=True)
class ScalingPath:
    sigma: Optional[Number]
    amplitude_exponent: Number
    raw_sigma: Number


def scaling_sigma(gamma) -> ScalingPath:
    """sigma = 2(3-gamma)/(gamma-1) making the system scale invariant.

    ``sigma`` is None when the value falls outside (0,1); ``amplitude_exponent``
    is the power 2/(1-gamma) of lambda in the rescaled solution.
    """
    gamma = as_number(gamma)
    if not gamma > 1:
        raise DomainError(f"gamma must exceed 1, got {gamma!r}")
    two = Fraction(2) if _exact(gamma) else 2.0
    raw = two * (3 - gamma) / (gamma - 1)
    amp = two / (1 - gamma)
    return ScalingPath(raw if 0 < raw < 1 else None, amp, raw)


@dataclass
class RegionRaster:
    sigma: List[Number]
    gamma: List[Number]
    reports: List[List[ExponentReport]]  # indexed [gamma][sigma]

    @property
    def feasible(self) -> np.ndarray:
        return np.array([[rep.feasible for rep in row] for row in self.reports])

    @property
    def widths(self) -> np.ndarray:
        return np.array([[rep.interval.width if rep.feasible else np.nan for rep in row]
                         for row in self.reports])

    def rows(self):
        """CSV rows: sigma, gamma, feasible, interval_lo, interval_hi, lo_open, hi_open."""
        for row in self.reports:
            for rep in row:
                iv = rep.interval
                yield (rep.sigma, rep.gamma, rep.feasible,
                       None if iv is None else iv.lo, None if iv is None else iv.hi,
                       None if iv is None else iv.lo_open,
                       None if iv is None else iv.hi_open)

    def monotonicity_counterexamples(self):
        """(gamma, sigma) cells that turn feasible again after a feasible run
        ended at a smaller sigma in the same row (sigma grid assumed ascending)."""
        bad = []
        for g, row in zip(self.gamma, self.reports):
            seen_feasible = seen_gap = False
            for s, rep in zip(self.sigma, row):
                if rep.feasible:
                    if seen_gap:
                        bad.append((g, s))
                    seen_feasible = True
                elif seen_feasible:
                    seen_gap = True
        return bad


def region_raster(sigma_grid, gamma_grid) -> RegionRaster:
    sigmas = [as_number(s) for s in sigma_grid]
    gammas = [as_number(g) for g in gamma_grid]
    reports = [[working_interval(s, g) for s in sigmas] for g in gammas]
    return RegionRaster(sigmas, gammas, reports)
