"""Pure-Python (mpmath) implementations of the multiprecision hot loops.

Every function here has a twin in ``_ckernels.pyx`` with identical
arguments and results.  ``prec`` is the binary working precision; all
inputs and outputs are mpmath ``mpf`` values.
"""

from mpmath import mp, mpf


def jacobi_newton(a, b, m, x0, prec, maxit=12):
    """Polish approximate zeros of the Jacobi polynomial P_m^{(a,b)}.

    Returns ``(nodes, derivs)`` where ``derivs[i]`` is P_m'(nodes[i]) in the
    standard (non-monic) normalisation.
    """
    with mp.workprec(prec):
        a = mpf(a)
        b = mpf(b)
        ab = a + b
        tol = mpf(2) ** (10 - prec)
        nodes = []
        derivs = []
        for guess in x0:
            x = mpf(guess)
            for _ in range(maxit):
                p, dp = _jacobi_eval(a, b, ab, m, x)
                dx = p / dp
                x -= dx
                if abs(dx) <= tol:
                    break
            p, dp = _jacobi_eval(a, b, ab, m, x)
            nodes.append(x)
            derivs.append(dp)
        return nodes, derivs


def _jacobi_eval(a, b, ab, m, x):
    p0, d0 = mpf(1), mpf(0)
    if m == 0:
        return p0, d0
    p1 = (a - b) / 2 + (ab + 2) * x / 2
    d1 = (ab + 2) / 2
    for n in range(2, m + 1):
        c = 2 * n + ab
        den = 2 * n * (n + ab) * (c - 2)
        lin = (c - 1) * c * (c - 2)
        off = (c - 1) * (a * a - b * b)
        back = 2 * (n + a - 1) * (n + b - 1) * c
        p2 = ((lin * x + off) * p1 - back * p0) / den
        d2 = ((lin * x + off) * d1 + lin * p1 - back * d0) / den
        p0, p1, d0, d1 = p1, p2, d1, d2
    return p1, d1


def weight_values(xs, ts, gammas, skip, prec):
    """exp(-x^2) * prod_{k != skip} |x - t_k|^gamma_k at every node."""
    with mp.workprec(prec):
        out = []
        for x in xs:
            s = -x * x
            for k, (t, g) in enumerate(zip(ts, gammas)):
                if k == skip or not g:
                    continue
                s += g * mp.log(abs(x - t))
            out.append(mp.exp(s))
        return out


def power_sums(xs, ws, kmax, prec):
    with mp.workprec(prec):
        sums = [mpf(0)] * (kmax + 1)
        for x, w in zip(xs, ws):
            v = w
            for k in range(kmax + 1):
                sums[k] += v
                v *= x
        return sums


def stieltjes(xs, ws, n, prec):
    """Discretised Stieltjes procedure: monic recurrence data up to degree n.

    Returns ``(alpha, h)`` with ``alpha[k] = <x P_k, P_k> / h[k]`` and
    ``h[k] = <P_k, P_k>`` for k = 0..n.
    """
    with mp.workprec(prec):
        size = len(xs)
        p_prev = [mpf(0)] * size
        p_cur = [mpf(1)] * size
        alpha, h = [], []
        for k in range(n + 1):
            hk = mpf(0)
            xk = mpf(0)
            for x, w, p in zip(xs, ws, p_cur):
                wp2 = w * p * p
                hk += wp2
                xk += wp2 * x
            ak = xk / hk
            alpha.append(ak)
            h.append(hk)
            if k == n:
                break
            bk = hk / h[k - 1] if k else mpf(0)
            p_next = [(x - ak) * p - bk * q for x, p, q in zip(xs, p_cur, p_prev)]
            p_prev, p_cur = p_cur, p_next
        return alpha, h


def poly_sums(xs, cs, alpha, beta, n, prec):
    """Sums of c_i P_k(x_i)^2 and c_i P_k(x_i) P_{k-1}(x_i), k = 0..n.

    ``beta[k]`` is the recurrence coefficient multiplying P_{k-1}; beta[0]
    is ignored.
    """
    with mp.workprec(prec):
        size = len(xs)
        p_prev = [mpf(0)] * size
        p_cur = [mpf(1)] * size
        s2, s11 = [], []
        for k in range(n + 1):
            a2 = mpf(0)
            a11 = mpf(0)
            for c, p, q in zip(cs, p_cur, p_prev):
                cp = c * p
                a2 += cp * p
                a11 += cp * q
            s2.append(a2)
            s11.append(a11)
            if k == n:
                break
            ak = alpha[k]
            bk = beta[k] if k else mpf(0)
            p_next = [(x - ak) * p - bk * q for x, p, q in zip(xs, p_cur, p_prev)]
            p_prev, p_cur = p_cur, p_next
        return s2, s11
