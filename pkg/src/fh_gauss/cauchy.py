"""Cauchy-type integrals against w: principal values at the t_j and
transforms at complex points.

The principal value at t_j is taken on the mirrored window panels that
the quadrature layer places around every singular point.  Because the two
halves of a window carry exactly mirrored nodes and weights, the plain sum
of W_i / (x_i - t_j) over the window already is the odd-part extraction

    int_0^delta u^gamma [g(t+u) - g(t-u)] / u du,

so no special casing is needed beyond using that measure.

R_{n,j} and r_{n,j} are computed primarily by exact polynomial division
(regular moments plus one principal value per t_j).  A second, direct path
sums the singular integrand on a different panel layout and exists only to
cross-check the first.
"""

from dataclasses import dataclass

from mpmath import mp, mpf

from . import kernels
from .errors import NoConvergence, PrecisionExhausted, RealAxisPole
from .quadrature import (DEFAULT_START_ORDER, MAX_DOUBLINGS, MAX_ORDER,
                         integrate_weighted_complex, measure_for)
from .records import AuxQuantities

DIRECT_WINDOW_SCALE = mpf(1) / 2


@dataclass
class PVConstants:
    values: list
    half_widths: list
    # |pv(m) - pv(2m)| at the accepted order
    errors: list
    order: int


def pv_from_measure(measure, j):
    """sum_i W_i / (x_i - t_j) on a measure with mirrored windows."""
    t = measure.spec.ts[j]
    with mp.workprec(measure.spec.precision_bits):
        return mp.fsum(w / (x - t) for x, w in zip(measure.nodes, measure.weights))


def _window_half_width(measure, j):
    t = measure.spec.ts[j]
    for panel in measure.plan.panels:
        if panel.left_sing == j:
            return panel.right.at(measure.spec.ts) - t
    raise ValueError(f"no window panel for singular point {j}")


def pv_constants(spec, start_order=DEFAULT_START_ORDER, window_scale=1):
    """PV integral of w(y)/(y - t_j) for every j, each converged to quad_tol."""
    with mp.workprec(spec.precision_bits):
        order = start_order
        meas = measure_for(spec, order, 8, window_scale)
        prev = [pv_from_measure(meas, j) for j in range(spec.N)]
        for _ in range(MAX_DOUBLINGS):
            if 2 * order > MAX_ORDER:
                break
            order *= 2
            meas = measure_for(spec, order, 8, window_scale)
            cur = [pv_from_measure(meas, j) for j in range(spec.N)]
            errs = [abs(a - b) for a, b in zip(cur, prev)]
            if all(e <= spec.quad_tol * max(1, abs(v)) for e, v in zip(errs, cur)):
                widths = [_window_half_width(meas, j) for j in range(spec.N)]
                return PVConstants(cur, widths, errs, order)
            prev = cur
        raise NoConvergence("principal value did not converge")


def pv_weight_transform(spec, j, start_order=DEFAULT_START_ORDER):
    """PV integral of w(y)/(y - t_j) dy (j is 0-based)."""
    if not 0 <= j < spec.N:
        raise IndexError(f"singularity index {j} out of range")
    return pv_constants(spec, start_order).values[j]


def cauchy_complex(spec, f, z, start_order=DEFAULT_START_ORDER):
    """Integral of f(y) w(y) / (z - y) for Im z != 0."""
    with mp.workprec(spec.precision_bits):
        z = mp.mpc(z)
        if z.imag == 0:
            raise RealAxisPole("z must be off the real axis")
        return integrate_weighted_complex(spec, lambda y: f(y) / (z - y), start_order=start_order)


def _product(a, b):
    out = [mpf(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for k, y in enumerate(b):
            out[i + k] += x * y
    return out


def synthetic_division(coeffs, t):
    """Split ascending ``coeffs`` as Q(y)(y - t) + remainder; returns (Q, remainder)."""
    d = len(coeffs) - 1
    if d == 0:
        return [], coeffs[0]
    q = [mpf(0)] * d
    q[d - 1] = coeffs[d]
    for k in range(d - 1, 0, -1):
        q[k - 1] = coeffs[k] + t * q[k]
    return q, coeffs[0] + t * q[0]


def _division_integral(sys, coeffs, j, pv):
    q, rem = synthetic_division(coeffs, sys.spec.ts[j])
    if len(q) > len(sys.moments):
        raise PrecisionExhausted("not enough moments for the division path")
    regular = mp.fdot(q, sys.moments[:len(q)]) if q else mpf(0)
    return regular + rem * pv


def aux_integral(sys, n, j, kind, pv=None):
    """R_{n,j} (kind "R") or r_{n,j} (kind "r") by polynomial division."""
    spec = sys.spec
    if n > sys.n_max:
        raise ValueError(f"degree {n} exceeds n_max = {sys.n_max}")
    with mp.workprec(spec.precision_bits):
        if pv is None:
            pv = pv_from_measure(sys.measure, j)
        g = spec.gammas[j]
        if kind == "R":
            c = _product(sys.poly_coeffs[n], sys.poly_coeffs[n])
            return g * _division_integral(sys, c, j, pv) / sys.h[n]
        if kind == "r":
            if n == 0:
                return mpf(0)
            c = _product(sys.poly_coeffs[n], sys.poly_coeffs[n - 1])
            return g * _division_integral(sys, c, j, pv) / sys.h[n - 1]
        raise ValueError(f"kind must be 'R' or 'r', got {kind!r}")


def aux_quantities(sys):
    """AuxQuantities for n = 0..n_max by the division path on ``sys.measure``."""
    spec = sys.spec
    with mp.workprec(spec.precision_bits):
        pv = [pv_from_measure(sys.measure, j) for j in range(spec.N)]
        R, r = [], []
        for n in range(sys.n_max + 1):
            R.append([aux_integral(sys, n, j, "R", pv[j]) for j in range(spec.N)])
            r.append([aux_integral(sys, n, j, "r", pv[j]) for j in range(spec.N)])
        return AuxQuantities(R, r, pv)


def _direct_sums(sys, meas):
    prec = sys.spec.precision_bits
    out = []
    for t in sys.spec.ts:
        cs = [w / (x - t) for x, w in zip(meas.nodes, meas.weights)]
        out.append(kernels.poly_sums(meas.nodes, cs, sys.alpha, sys.beta, sys.n_max, prec))
    return out


def aux_quantities_direct(sys, start_order=None):
    """R, r by summing the singular integrand on a narrower-window layout.

    Independent of the division path: different breakpoints, rule order
    chosen by its own m versus 2m comparison, no moments involved.
    """
    spec = sys.spec
    with mp.workprec(spec.precision_bits):
        order = start_order or DEFAULT_START_ORDER
        degree = 2 * sys.n_max + 4

        def table(meas):
            sums = _direct_sums(sys, meas)
            R = [[spec.gammas[j] * sums[j][0][n] / sys.h[n] for j in range(spec.N)]
                 for n in range(sys.n_max + 1)]
            r = [[spec.gammas[j] * sums[j][1][n] / sys.h[n - 1] if n else mpf(0)
                  for j in range(spec.N)] for n in range(sys.n_max + 1)]
            return R, r

        prev = table(measure_for(spec, order, degree, DIRECT_WINDOW_SCALE))
        for _ in range(MAX_DOUBLINGS):
            if 2 * order > MAX_ORDER:
                break
            order *= 2
            cur = table(measure_for(spec, order, degree, DIRECT_WINDOW_SCALE))
            if _tables_agree(prev, cur, spec.quad_tol):
                return AuxQuantities(cur[0], cur[1], source="direct")
            prev = cur
        raise NoConvergence("direct singular quadrature did not converge")


def _tables_agree(a, b, tol):
    for ta, tb in zip(a, b):
        for ra, rb in zip(ta, tb):
            for x, y in zip(ra, rb):
                if abs(x - y) > tol * max(1, abs(y)):
                    return False
    return True


def cauchy_poly_sums(sys, z):
    """int P_k^2 w / (z - y) and int P_k P_{k-1} w / (z - y) for k = 0..n_max.

    Rule order is doubled from the system's order until successive results
    agree to quad_tol relative to the integral of |P_k^2 w / (z - y)|.
    """
    spec = sys.spec
    prec = spec.precision_bits
    with mp.workprec(prec):
        z = mp.mpc(z)
        if z.imag == 0:
            raise RealAxisPole("z must be off the real axis")
        degree = 2 * sys.n_max + 4

        def sums(meas):
            inv = [1 / (z - x) for x in meas.nodes]
            cre = [w * c.real for w, c in zip(meas.weights, inv)]
            cim = [w * c.imag for w, c in zip(meas.weights, inv)]
            cab = [w * abs(c) for w, c in zip(meas.weights, inv)]
            s2r, s11r = kernels.poly_sums(meas.nodes, cre, sys.alpha, sys.beta, sys.n_max, prec)
            s2i, s11i = kernels.poly_sums(meas.nodes, cim, sys.alpha, sys.beta, sys.n_max, prec)
            s2a, _ = kernels.poly_sums(meas.nodes, cab, sys.alpha, sys.beta, sys.n_max, prec)
            s2 = [mp.mpc(a, b) for a, b in zip(s2r, s2i)]
            s11 = [mp.mpc(a, b) for a, b in zip(s11r, s11i)]
            return s2, s11, s2a

        order = sys.order
        prev = sums(measure_for(spec, order, degree))
        for _ in range(MAX_DOUBLINGS):
            if 2 * order > MAX_ORDER:
                break
            order *= 2
            cur = sums(measure_for(spec, order, degree))
            scale = cur[2]
            ok = all(abs(a - b) <= spec.quad_tol * s for a, b, s in zip(cur[0], prev[0], scale))
            # |P_k P_{k-1}| <= (P_k^2 + P_{k-1}^2) / 2
            ok = ok and all(abs(cur[1][k] - prev[1][k]) <= spec.quad_tol * (scale[k] + scale[k - 1])
                            for k in range(1, len(scale)))
            if ok:
                return cur[0], cur[1]
            prev = cur
        raise NoConvergence("complex Cauchy transform did not converge")
