"""Panel quadrature for integrals against w(x; t) over the real line.

The line is cut at every singular point.  Each singular point gets a pair
of mirror-image "window" panels of half-width delta_j whose Gauss-Jacobi
rules absorb |x - t_j|^gamma_j exactly; the remaining intervals and both
tails are covered by Gauss-Legendre panels, graded so that no panel is
wider than twice its distance to the nearest singular point (and never
wider than 1).  The tails are truncated where the Gaussian has decayed
below the working precision.

Breakpoints are stored as affine functions of the positions t, so one
:class:`PartitionPlan` can be re-evaluated at perturbed positions.  This
keeps the discretisation error a smooth function of t, which the
finite-difference checks rely on.
"""

import threading
import warnings
from dataclasses import dataclass, field

from mpmath import mp, mpf
from scipy.special import roots_jacobi

from . import kernels
from .errors import NoConvergence, StepCollision

CLOSE_SINGULARITY_GAP = 1e-6
DEFAULT_START_ORDER = 16
MAX_DOUBLINGS = 12
MAX_ORDER = 1024

_rule_cache = {}
_rule_lock = threading.Lock()


def gauss_jacobi(m, a, b, prec):
    """m-point Gauss rule on [-1, 1] for the weight (1 - s)^a (1 + s)^b.

    Nodes are polished by Newton's method on the Jacobi three-term
    recurrence at ``prec`` bits, starting from double-precision roots.
    Rules are cached per (a, b, m, prec); (a, b) and (b, a) are exact
    mirror images of each other.
    """
    with mp.workprec(prec):
        a = mpf(a)
        b = mpf(b)
        if a > b:
            nodes, weights = gauss_jacobi(m, b, a, prec)
            return [-x for x in reversed(nodes)], list(reversed(weights))
        key = (a, b, m, prec)
        with _rule_lock:
            hit = _rule_cache.get(key)
        if hit is not None:
            return list(hit[0]), list(hit[1])
        x0, _ = roots_jacobi(m, float(a), float(b))
        nodes, derivs = kernels.jacobi_newton(a, b, m, [mpf(float(x)) for x in x0], prec)
        log_c = ((a + b + 1) * mp.log(2) + mp.loggamma(m + a + 1) + mp.loggamma(m + b + 1)
                 - mp.loggamma(m + a + b + 1) - mp.loggamma(m + 1))
        c = mp.exp(log_c)
        weights = [c / ((1 - x * x) * d * d) for x, d in zip(nodes, derivs)]
        order = sorted(range(m), key=lambda i: nodes[i])
        nodes = [nodes[i] for i in order]
        weights = [weights[i] for i in order]
        with _rule_lock:
            _rule_cache[key] = (tuple(nodes), tuple(weights))
        return nodes, weights


class Affine:
    """c0 + sum_k c_k t_k, a breakpoint that moves with the positions."""

    __slots__ = ("c0", "coef")

    def __init__(self, c0, coef):
        self.c0 = mpf(c0)
        self.coef = tuple(mpf(c) for c in coef)

    @classmethod
    def const(cls, value, n):
        return cls(value, (0,) * n)

    @classmethod
    def position(cls, j, n):
        return cls(0, tuple(1 if k == j else 0 for k in range(n)))

    def __add__(self, other):
        return Affine(self.c0 + other.c0, [a + b for a, b in zip(self.coef, other.coef)])

    def __sub__(self, other):
        return Affine(self.c0 - other.c0, [a - b for a, b in zip(self.coef, other.coef)])

    def scale(self, s):
        return Affine(self.c0 * s, [a * s for a in self.coef])

    def at(self, ts):
        return self.c0 + mp.fsum(c * t for c, t in zip(self.coef, ts) if c)


@dataclass(frozen=True)
class Panel:
    left: Affine
    right: Affine
    # index of the singular point sitting at the left/right end, if any
    left_sing: object = None
    right_sing: object = None


@dataclass
class PartitionPlan:
    """Panel layout (as functions of t), rule order and tail cut-off."""

    panels: list
    order: int
    cutoff: object
    degree: int
    window_scale: object
    base_ts: tuple
    warnings: list = field(default_factory=list)

    def breakpoints(self, ts):
        pts = [self.panels[0].left.at(ts)]
        pts.extend(p.right.at(ts) for p in self.panels)
        return pts

    def with_order(self, order):
        return PartitionPlan(self.panels, order, self.cutoff, self.degree,
                             self.window_scale, self.base_ts, list(self.warnings))


def tail_cutoff(spec, degree):
    """Symmetric cut-off L such that the dropped Gaussian tails are negligible.

    The tail half-length beyond max|t_j| starts at 4 and doubles until a
    bound on the neglected mass of x^degree * w(x), relative to the full
    moment, falls below 2^-prec.
    """
    eps = mpf(2) ** (-spec.precision_bits)
    tmax = max(abs(t) for t in spec.ts)
    grow = degree + sum(max(g, 0) for g in spec.gammas)
    s = (grow + 1) / 2
    full = mp.gamma(s)
    half = mpf(4)
    for _ in range(MAX_DOUBLINGS):
        cut = tmax + half
        bound = mpf(2) ** grow * mp.gammainc(s, cut * cut) / full
        if bound < eps:
            return cut
        half *= 2
    raise NoConvergence("tail truncation did not converge")


def make_plan(spec, order=DEFAULT_START_ORDER, degree=32, window_scale=1):
    """Lay out panels for ``spec``; see the module docstring."""
    with mp.workprec(spec.precision_bits):
        ts = spec.ts
        n = spec.N
        notes = []
        window_scale = mpf(window_scale)
        halfgaps = []
        for j in range(n):
            cands = [(mpf(1), Affine.const(1, n))]
            if j + 1 < n:
                cands.append(((ts[j + 1] - ts[j]) / 2,
                              (Affine.position(j + 1, n) - Affine.position(j, n)).scale(mpf(1) / 2)))
            if j > 0:
                cands.append(((ts[j] - ts[j - 1]) / 2,
                              (Affine.position(j, n) - Affine.position(j - 1, n)).scale(mpf(1) / 2)))
            halfgaps.append(min(cands, key=lambda c: c[0])[1].scale(window_scale))
        for j in range(n - 1):
            if ts[j + 1] - ts[j] < CLOSE_SINGULARITY_GAP:
                notes.append(f"singular points {j} and {j + 1} closer than "
                             f"{CLOSE_SINGULARITY_GAP:g}; conditioning degrades")
        for msg in notes:
            warnings.warn(msg, RuntimeWarning, stacklevel=2)

        cut = tail_cutoff(spec, degree)
        panels = []
        left_end = Affine.position(0, n) - halfgaps[0]
        panels.extend(_regular(Affine.const(-cut, n), left_end, ts))
        for j in range(n):
            tj = Affine.position(j, n)
            panels.append(Panel(tj - halfgaps[j], tj, right_sing=j))
            panels.append(Panel(tj, tj + halfgaps[j], left_sing=j))
            if j + 1 < n:
                a = tj + halfgaps[j]
                b = Affine.position(j + 1, n) - halfgaps[j + 1]
                panels.extend(_regular(a, b, ts))
        panels.extend(_regular(Affine.position(n - 1, n) + halfgaps[-1], Affine.const(cut, n), ts))
        return PartitionPlan(panels, order, cut, degree, window_scale, tuple(ts), notes)


def _regular(a, b, ts):
    """Gauss-Legendre panels covering [a, b], graded towards singular points."""
    lo, hi = a.at(ts), b.at(ts)
    length = hi - lo
    if length <= mpf(2) ** (-mp.prec // 2) * (1 + abs(lo) + abs(hi)):
        return []
    pieces = int(mp.ceil(length))
    out = []
    for i in range(pieces):
        u = a + (b - a).scale(mpf(i) / pieces)
        v = a + (b - a).scale(mpf(i + 1) / pieces)
        out.extend(_graded(u, v, ts))
    return out


def _graded(a, b, ts):
    lo, hi = a.at(ts), b.at(ts)
    dist = min(max(lo - t, t - hi, mpf(0)) for t in ts)
    if hi - lo <= 2 * dist:
        return [Panel(a, b)]
    mid = (a + b).scale(mpf(1) / 2)
    return _graded(a, mid, ts) + _graded(mid, b, ts)


@dataclass
class DiscreteMeasure:
    """Nodes and positive weights with sum W_i f(x_i) ~ integral of f w."""

    nodes: list
    weights: list
    spec: object
    plan: PartitionPlan

    def __len__(self):
        return len(self.nodes)

    def integrate(self, values):
        return mp.fdot(self.weights, values)


def discretize(spec, plan):
    """Evaluate ``plan`` at the positions of ``spec`` and build the measure."""
    prec = spec.precision_bits
    with mp.workprec(prec):
        ts = spec.ts
        nodes, weights = [], []
        for panel in plan.panels:
            lo, hi = panel.left.at(ts), panel.right.at(ts)
            if not hi > lo:
                raise StepCollision("perturbed positions invert a quadrature panel")
            sing = panel.left_sing if panel.left_sing is not None else panel.right_sing
            gamma = spec.gammas[sing] if sing is not None else mpf(0)
            if panel.left_sing is not None:
                s, om = gauss_jacobi(plan.order, 0, gamma, prec)
            elif panel.right_sing is not None:
                s, om = gauss_jacobi(plan.order, gamma, 0, prec)
            else:
                s, om = gauss_jacobi(plan.order, 0, 0, prec)
            half = (hi - lo) / 2
            mid = (hi + lo) / 2
            xs = [mid + half * si for si in s]
            vals = kernels.weight_values(xs, ts, spec.gammas, -1 if sing is None else sing, prec)
            scale = half ** (1 + gamma)
            nodes.extend(xs)
            weights.extend(o * v * scale for o, v in zip(om, vals))
        return DiscreteMeasure(nodes, weights, spec, plan)


_measure_cache = {}
_measure_lock = threading.Lock()


def measure_for(spec, order, degree=32, window_scale=1):
    key = (spec, order, degree, mpf(window_scale))
    with _measure_lock:
        hit = _measure_cache.get(key)
    if hit is None:
        plan = make_plan(spec, order, degree, window_scale)
        hit = discretize(spec, plan)
        with _measure_lock:
            if len(_measure_cache) > 64:
                _measure_cache.clear()
            _measure_cache[key] = hit
    return hit


def _refine(spec, evaluate, degree, start_order, tol):
    order = start_order
    previous = evaluate(measure_for(spec, order, degree))
    for _ in range(MAX_DOUBLINGS):
        if 2 * order > MAX_ORDER:
            break
        order *= 2
        current = evaluate(measure_for(spec, order, degree))
        value, scale = current
        if abs(value - previous[0]) <= tol * scale:
            return value
        previous = current
    raise NoConvergence(f"weighted quadrature failed to converge by order {order}")


def integrate_weighted(spec, f, degree=64, start_order=DEFAULT_START_ORDER):
    """Integral of f(x) w(x; t) over the real line.

    Rule orders m, 2m, ... are compared until two successive results agree
    to ``spec.quad_tol`` relative to the integral of |f| w; the finer
    result is returned.  ``degree`` bounds the polynomial growth of f for
    the tail truncation.
    """
    with mp.workprec(spec.precision_bits):
        def evaluate(measure):
            vals = [f(x) for x in measure.nodes]
            return (measure.integrate(vals),
                    mp.fdot(measure.weights, [abs(v) for v in vals]) or mpf(1))

        return _refine(spec, evaluate, degree, start_order, spec.quad_tol)


def integrate_weighted_complex(spec, f, degree=64, start_order=DEFAULT_START_ORDER):
    """Complex-valued version of :func:`integrate_weighted`."""
    with mp.workprec(spec.precision_bits):
        def evaluate(measure):
            vals = [mp.mpc(f(x)) for x in measure.nodes]
            re = mp.fdot(measure.weights, [v.real for v in vals])
            im = mp.fdot(measure.weights, [v.imag for v in vals])
            return (mp.mpc(re, im),
                    mp.fdot(measure.weights, [abs(v) for v in vals]) or mpf(1))

        return _refine(spec, evaluate, degree, start_order, spec.quad_tol)


def node_avoidance_ok(measure):
    ts = set(measure.spec.ts)
    return not any(x in ts for x in measure.nodes)
