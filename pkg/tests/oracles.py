"""Independent reference computations used by several test modules."""

from fractions import Fraction

from mpmath import mp, mpf


def gaussian_moment(k):
    """int x^k e^{-x^2} dx / sqrt(pi) as an exact rational."""
    if k % 2:
        return Fraction(0)
    out = Fraction(1)
    for i in range(1, k, 2):
        out *= Fraction(i, 2)
    return out


def poly_mul(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def even_weight_poly(ts, gammas):
    """prod (x - t)^gamma for even integer gamma, ascending rational coefficients."""
    poly = [Fraction(1)]
    for t, g in zip(ts, gammas):
        assert g % 2 == 0 and g >= 0
        for _ in range(g):
            poly = poly_mul(poly, [-Fraction(str(t)), Fraction(1)])
    return poly


def even_weight_moments(ts, gammas, kmax):
    """mu_k / sqrt(pi) exactly, k = 0..kmax."""
    poly = even_weight_poly(ts, gammas)
    return [sum(c * gaussian_moment(k + i) for i, c in enumerate(poly)) for k in range(kmax + 1)]


def fraction_det(rows):
    """Exact determinant by fraction-free-enough Gaussian elimination."""
    m = [list(r) for r in rows]
    n = len(m)
    det = Fraction(1)
    for c in range(n):
        piv = next(i for i in range(c, n) if m[i][c] != 0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det *= m[c][c]
        for i in range(c + 1, n):
            f = m[i][c] / m[c][c]
            for k in range(c, n):
                m[i][k] -= f * m[c][k]
    return det


def even_weight_hankel(ts, gammas, n):
    """D_n for an even-exponent weight: exact rational times pi^{n/2}."""
    q = even_weight_moments(ts, gammas, 2 * n)
    if n == 0:
        return mpf(1)
    d = fraction_det([[q[i + j] for j in range(n)] for i in range(n)])
    return mpf(d.numerator) / d.denominator * mp.pi ** (mpf(n) / 2)


def hermite_h(n):
    """sqrt(pi) n! / 2^n."""
    return mp.sqrt(mp.pi) * mp.factorial(n) / mpf(2) ** n


def gaussian_hankel(n):
    """(2 pi)^{n/2} 2^{-n^2/2} prod_{j<n} j!."""
    return (2 * mp.pi) ** (mpf(n) / 2) * mpf(2) ** (-mpf(n * n) / 2) * mp.fprod(
        mp.factorial(j) for j in range(n))


def gaussian_cauchy_cf(z, terms=4000):
    """int e^{-y^2}/(z - y) dy for Im z > 0 by its continued fraction."""
    z = mp.mpc(z)
    cf = z
    for k in range(terms, 0, -1):
        cf = z - (mpf(k) / 2) / cf
    return mp.sqrt(mp.pi) / cf


def excision_pv(ts, gammas, j, dps=60, ks=tuple(range(1, 12))):
    """PV int w/(y - t_j) by symmetric excision and extrapolation in eps.

    S(eps) - PV is a series in eps^{gamma_j + 1 + 2m}; the excised integrals
    are computed by mpmath.quad with breakpoints at every t_k.
    """
    with mp.workdps(dps):
        ts = [mpf(str(t)) for t in ts]
        gs = [mpf(str(g)) for g in gammas]
        t = ts[j]

        def f(y):
            v = mp.exp(-y * y) / (y - t)
            for tk, g in zip(ts, gs):
                v *= abs(y - tk) ** g
            return v

        cut = max(abs(x) for x in ts) + 12
        samples = []
        for k in ks:
            eps = mpf(2) ** -k
            pts = sorted(set([-cut] + [x for x in ts if x != t] + [t - eps, t + eps] + [cut]))
            total = mpf(0)
            for a, b in zip(pts, pts[1:]):
                if a == t - eps and b == t + eps:
                    continue
                total += mp.quad(f, [a, b])
            samples.append((eps, total))
        g = gs[j]
        expo = [g + 1 + 2 * m for m in range(len(samples) - 1)]
        A = mp.matrix([[1] + [e ** p for p in expo] for e, _ in samples])
        b = mp.matrix([s for _, s in samples])
        return mp.lu_solve(A, b)[0]
