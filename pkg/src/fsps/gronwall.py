"""L^p-L^q Gronwall bounds and discrete verifiers.

Two bounds:

* ``gamma_bound``: if ||v||_{L^p(0,t)} <= C1 + ||a v||_{L^q(0,t)} for all t,
  then ||v||_{L^p(0,t)} <= 2 C1 Gamma(2 + 2^rho ||a||_{L^rho(0,t)}^rho),
  with 1/rho = 1/q - 1/p.
* ``exp_bound``: if ||v||^q_{L^p(0,1)} <= C2 and
  ||v||^q_{L^p(0,t)} <= C2 + int_1^t a v^q for t > 1, then
  ||v||_{L^p(0,t)} <= (p/(p-q))^{1/p} C2^{1/q}
                      exp((1/p) (p/q)^{p/(p-q)} ||a||_{L^{p/(p-q)}(1,t)}^{p/(p-q)}).
  At p = inf this becomes C2^{1/q} exp(||a||_{L^1(1,t)} / q).

Instances are piecewise constant on a uniform mesh (value on [t_j, t_j+dt) is
the left-endpoint sample).  The verifiers evaluate both hypothesis and
conclusion exactly for such step functions at every mesh point and at
``substeps`` interior points per cell.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np
from scipy.optimize import brentq

from .errors import ConfigurationError, DomainError

INF = math.inf
REL_SLACK = 1e-12


def rho_from(p, q) -> float:
    """The exponent rho with 1/rho = 1/q - 1/p."""
    inv = 1.0 / q - (0.0 if p == INF else 1.0 / p)
    if not inv > 0:
        raise DomainError(f"need q < p, got p={p!r}, q={q!r}")
    return 1.0 / inv


def gamma_bound(C1: float, rho: float, a_norm: float) -> float:
    """2 C1 Gamma(2 + 2^rho a_norm^rho); returns math.inf on overflow."""
    if not C1 > 0:
        raise DomainError(f"C1 must be positive, got {C1!r}")
    if not rho >= 1:
        raise DomainError(f"rho must be >= 1, got {rho!r}")
    if not a_norm >= 0:
        raise DomainError(f"a_norm must be nonnegative, got {a_norm!r}")
    try:
        arg = 2.0 + (2.0 * a_norm) ** rho
        return 2.0 * C1 * math.gamma(arg)
    except OverflowError:
        return INF


def exp_bound(C2: float, p: float, q: float, a_norm_pprime: float) -> float:
    """Exponential bound; ``a_norm_pprime`` is ||a|| in L^{p/(p-q)}(1,t)
    (the L^1 norm when p is infinite)."""
    if not C2 > 0:
        raise DomainError(f"C2 must be positive, got {C2!r}")
    if not 1 <= q < p:
        raise DomainError(f"need 1 <= q < p, got p={p!r}, q={q!r}")
    if not a_norm_pprime >= 0:
        raise DomainError(f"a norm must be nonnegative, got {a_norm_pprime!r}")
    if p == INF:
        expo = a_norm_pprime / q
        pre = C2 ** (1.0 / q)
    else:
        ap = p / (p - q)
        expo = (1.0 / p) * (p / q) ** ap * a_norm_pprime ** ap
        pre = ap ** (1.0 / p) * C2 ** (1.0 / q)
    try:
        return pre * math.exp(expo)
    except OverflowError:
        return INF


@dataclass
class GronwallInstance:
    """Step functions v, a on the uniform mesh j*dt, j = 0..n-1 of (0, n*dt)."""
    dt: float
    v: np.ndarray
    a: np.ndarray
    p: float
    q: float
    constant: float
    rho: Optional[float] = None

    def __post_init__(self):
        self.v = np.asarray(self.v, dtype=float)
        self.a = np.asarray(self.a, dtype=float)
        if self.v.shape != self.a.shape or self.v.ndim != 1:
            raise ConfigurationError("v and a must be 1-D arrays of equal length")
        if (self.v < 0).any() or (self.a < 0).any():
            raise ConfigurationError("v and a samples must be nonnegative")
        if not self.dt > 0:
            raise ConfigurationError(f"dt must be positive, got {self.dt!r}")
        if not self.constant > 0:
            raise ConfigurationError("the constant C1/C2 must be positive")
        rho = rho_from(self.p, self.q)
        if self.rho is not None and abs(1.0 / self.rho - 1.0 / rho) > 1e-12:
            raise ConfigurationError(
                f"exponents violate 1/rho = 1/q - 1/p (rho={self.rho}, expected {rho})")
        self.rho = rho

    @property
    def T(self) -> float:
        return self.dt * self.v.size


@dataclass
class LemmaReport:
    lemma: str
    checked: int = 0
    violations: List[Tuple[float, float, float]] = field(default_factory=list)
    vacuous: bool = False
    hypothesis_failed_at: Optional[float] = None
    max_ratio: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.violations


def _sample_times(n, dt, substeps):
    theta = np.arange(1, substeps + 1) / substeps
    return (np.arange(n)[:, None] + theta[None, :]) * dt, theta


def _step_norm(values, dt, p, theta):
    """||f||_{L^p(0, t)} for step f at t = (j + theta) dt, shape (n, len(theta))."""
    if p == INF:
        prev = np.concatenate([[0.0], np.maximum.accumulate(values)[:-1]])
        return np.maximum(prev[:, None], values[:, None] * np.ones_like(theta)[None, :])
    pw = values ** p * dt
    prev = np.concatenate([[0.0], np.cumsum(pw)[:-1]])
    return (prev[:, None] + pw[:, None] * theta[None, :]) ** (1.0 / p)


def _leq(x, y):
    return x <= y * (1 + REL_SLACK) + 1e-300


def _scan(report, t, hyp_ok, lhs, bound):
    """Walk sample times in order; check the conclusion while the hypothesis
    has held at every earlier sample time."""
    t, hyp_ok, lhs, bound = (np.ravel(x) for x in (t, hyp_ok, lhs, bound))
    fails = np.flatnonzero(~hyp_ok)
    stop = fails[0] if fails.size else t.size
    if fails.size:
        report.hypothesis_failed_at = float(t[stop])
    if stop == 0:
        report.vacuous = True
        return report
    lhs, bound, t = lhs[:stop], bound[:stop], t[:stop]
    report.checked = int(stop)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(np.isinf(bound), 0.0, lhs / bound)
    report.max_ratio = float(np.max(ratio))
    bad = np.flatnonzero(~_leq(lhs, bound))
    report.violations = [(float(t[i]), float(lhs[i]), float(bound[i])) for i in bad]
    return report


def verify_gamma_lemma(inst: GronwallInstance, substeps: int = 4) -> LemmaReport:
    n, dt = inst.v.size, inst.dt
    t, theta = _sample_times(n, dt, substeps)
    lhs = _step_norm(inst.v, dt, inst.p, theta)
    rhs = inst.constant + _step_norm(inst.a * inst.v, dt, inst.q, theta)
    a_norm = _step_norm(inst.a, dt, inst.rho, theta)
    bound = np.vectorize(lambda x: gamma_bound(inst.constant, inst.rho, x))(a_norm)
    return _scan(LemmaReport("gamma"), t, _leq(lhs, rhs), lhs, bound)


def verify_exp_lemma(inst: GronwallInstance, substeps: int = 4) -> LemmaReport:
    n, dt = inst.v.size, inst.dt
    n1 = int(round(1.0 / dt))
    if abs(n1 * dt - 1.0) > 1e-9 or n1 >= n:
        raise ConfigurationError("mesh must contain t = 1 strictly inside (0, T)")
    p, q, C2 = inst.p, inst.q, inst.constant
    t, theta = _sample_times(n, dt, substeps)
    lp = _step_norm(inst.v, dt, p, theta)
    # int_1^t a v^q, zero before t = 1
    g = inst.a * inst.v ** q
    g[:n1] = 0.0
    cum = np.concatenate([[0.0], np.cumsum(g * dt)[:-1]])
    integral = cum[:, None] + (g * dt)[:, None] * theta[None, :]
    lhs_q = lp ** q
    hyp = np.where(t <= 1.0 + 1e-12, _leq(lhs_q, C2), _leq(lhs_q, C2 + integral))
    ap = 1.0 if p == INF else p / (p - q)
    a1 = inst.a.copy()
    a1[:n1] = 0.0
    a_norm = _step_norm(a1, dt, ap, theta)
    bound = np.vectorize(lambda x: exp_bound(C2, p, q, x))(a_norm)
    return _scan(LemmaReport("exp"), t, hyp, lp, bound)


# -- brute-force constructions -------------------------------------------------

def _largest_root(g, start=1.0):
    """Largest v > 0 with g(v) = 0 where g < 0 near 0 and g > 0 for large v."""
    hi = start
    for _ in range(200):
        if g(hi) > 0:
            break
        hi *= 2.0
    else:
        return None
    lo = hi / 2.0
    while lo > 1e-300 and g(lo) > 0:
        hi, lo = lo, lo / 2.0
    return brentq(g, lo, hi, xtol=1e-15, rtol=1e-13)


CHECK_FRACTIONS = np.arange(1, 17) / 16.0


def _shrink_until(x, ok):
    """Largest of x, 0.9x, 0.81x, ... satisfying ``ok`` at every sub-cell point."""
    while x > 0 and not ok(x):
        x = 0.9 * x if x > 1e-300 else 0.0
    return x


def construct_gamma_instance(a, dt, p, q, C1, slack) -> GronwallInstance:
    """Build v cell by cell as ``slack[j]`` times the largest value keeping the
    hypothesis true at the end of the cell, shrunk further if needed so that it
    also holds at sixteen equally spaced points inside the cell."""
    n = a.size
    v = np.zeros(n)
    sp = sq = 0.0  # running sums of v^p dt and (a v)^q dt, or running max for p=inf
    for j in range(n):
        aj = a[j]

        def g(x):
            lhs = max(sp, x) if p == INF else (sp + x ** p * dt) ** (1.0 / p)
            return lhs - C1 - (sq + (aj * x) ** q * dt) ** (1.0 / q)

        def ok(x):
            th = CHECK_FRACTIONS * dt
            lhs = np.maximum(sp, x) if p == INF else (sp + x ** p * th) ** (1.0 / p)
            return bool(np.all(_leq(lhs, C1 + (sq + (aj * x) ** q * th) ** (1.0 / q))))

        root = _largest_root(g, start=max(C1, 1.0))
        x = _shrink_until(slack[j] * root, ok) if root is not None else 0.0
        v[j] = x
        sp = max(sp, x) if p == INF else sp + x ** p * dt
        sq += (aj * x) ** q * dt
    return GronwallInstance(dt, v, a, p, q, C1)


def construct_exp_instance(a, dt, p, q, C2, slack, head) -> GronwallInstance:
    """v on (0,1) is ``head`` rescaled to use a fraction ``slack[0]`` of C2;
    after t = 1 each cell takes ``slack[j]`` times its largest admissible value
    (shrunk as in ``construct_gamma_instance``)."""
    n = a.size
    n1 = int(round(1.0 / dt))
    v = np.zeros(n)
    head = np.abs(np.asarray(head, dtype=float))
    norm = head.max() if p == INF else (np.sum(head ** p) * dt) ** (1.0 / p)
    v[:n1] = head * (slack[0] * C2) ** (1.0 / q) / norm
    sp = v[:n1].max() if p == INF else float(np.sum(v[:n1] ** p) * dt)
    integral = 0.0
    for j in range(n1, n):
        aj = a[j]

        def g(x):
            lhs = (max(sp, x) if p == INF else (sp + x ** p * dt) ** (1.0 / p)) ** q
            return lhs - C2 - integral - aj * x ** q * dt

        def ok(x):
            th = CHECK_FRACTIONS * dt
            lhs = (np.maximum(sp, x) if p == INF else (sp + x ** p * th) ** (1.0 / p)) ** q
            return bool(np.all(_leq(lhs, C2 + integral + aj * x ** q * th)))

        root = _largest_root(g, start=max(C2, 1.0))
        x = _shrink_until(slack[j] * root, ok) if root is not None else 0.0
        v[j] = x
        sp = max(sp, x) if p == INF else sp + x ** p * dt
        integral += aj * x ** q * dt
    return GronwallInstance(dt, v, a, p, q, C2)


EXPONENT_PAIRS = ((2.0, 1.0), (3.0, 1.5), (4.0, 1.0), (4.0, 2.0), (6.0, 2.0),
                  (INF, 1.0), (INF, 2.0))


def random_gamma_instance(rng, n, T=1.0):
    p, q = EXPONENT_PAIRS[rng.integers(len(EXPONENT_PAIRS))]
    rho = rho_from(p, q)
    dt = T / n
    shape = rng.random(n) + 0.1
    target = rng.uniform(0.05, 1.5)  # ||a||_rho, straddling the 1/2 branch point
    a = shape * target / (np.sum(shape ** rho) * dt) ** (1.0 / rho)
    C1 = rng.uniform(0.5, 2.0)
    slack = rng.uniform(0.5, 1.0, n)
    return construct_gamma_instance(a, dt, p, q, C1, slack)


def random_exp_instance(rng, n, T=3.0):
    p, q = EXPONENT_PAIRS[rng.integers(len(EXPONENT_PAIRS))]
    dt = T / n
    n_unit = int(round(1.0 / dt))
    if abs(n_unit * dt - 1.0) > 1e-12:
        raise ConfigurationError("T/n must divide 1 so that t = 1 is a mesh point")
    a = rng.uniform(0.05, 1.0, n) * rng.uniform(0.2, 2.0)
    C2 = rng.uniform(0.5, 2.0)
    slack = rng.uniform(0.5, 1.0, n)
    head = rng.random(n_unit) + 0.1
    return construct_exp_instance(a, dt, p, q, C2, slack, head)


def run_ensembles(instances=100, mesh_sizes=(128, 256, 512), seed=0,
                  gamma_T=1.0, exp_T=2.0, substeps=4):
    """Verify both lemmas on random constructed instances.

    Returns a JSON-ready summary with per-lemma, per-mesh violation counts.
    """
    rng = np.random.default_rng(seed)
    out = {"seed": seed, "instances": instances, "mesh_sizes": list(mesh_sizes),
           "lemmas": {}}
    total = 0
    for name, make, verify, T in (
            ("gamma", random_gamma_instance, verify_gamma_lemma, gamma_T),
            ("exp", random_exp_instance, verify_exp_lemma, exp_T)):
        per_mesh = {}
        for n in mesh_sizes:
            viol = vac = 0
            worst = 0.0
            for _ in range(instances):
                rep = verify(make(rng, n, T), substeps=substeps)
                viol += len(rep.violations)
                vac += rep.vacuous
                worst = max(worst, rep.max_ratio)
            per_mesh[str(n)] = {"violations": viol, "vacuous": vac, "max_ratio": worst}
            total += viol
        out["lemmas"][name] = per_mesh
    out["total_violations"] = total
    out["passed"] = total == 0
    return out


def compare_bounds(a_level, p, q, T_values):
    """Both bounds for a == a_level on (0, T) with C1 = C2 = 1.

    Returns ``(gamma_values, exp_values, crossover_T)`` where crossover_T is
    the first T at which the exponential bound is the smaller one (or None).
    """
    rho = rho_from(p, q)
    ap = 1.0 if p == INF else p / (p - q)
    gam, ex = [], []
    cross = None
    for T in T_values:
        g = gamma_bound(1.0, rho, a_level * T ** (1.0 / rho))
        e = exp_bound(1.0, p, q, a_level * max(T - 1.0, 0.0) ** (1.0 / ap))
        gam.append(g)
        ex.append(e)
        if cross is None and e < g:
            cross = T
    return np.array(gam), np.array(ex), cross
