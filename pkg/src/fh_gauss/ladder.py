"""A_n(z), B_n(z) at complex points, the ladder relations and the
compatibility conditions S1, S2, S2'.

    A_n(z) = 2 + sum_j R_{n,j}/(z - t_j)
               + sum_j gamma_j/(h_n (z - t_j)) int P_n^2 w/(z - y) dy
    B_n(z) = sum_j r_{n,j}/(z - t_j)
               + sum_j gamma_j/(h_{n-1} (z - t_j)) int P_n P_{n-1} w/(z - y) dy

Residuals are |LHS - RHS| divided by max(1, largest term).
"""

from dataclasses import dataclass

from mpmath import mp, mpf

from .cauchy import cauchy_poly_sums
from .errors import RealAxisPole
from .orthopoly import eval_P_pair
from .records import normalized, report

TEST_POINTS = ("2j", "0.3+1.1j", "-1+0.8j")


def test_points():
    pts = [mp.mpc(complex(p)) for p in TEST_POINTS]
    return pts + [p.conjugate() for p in pts]


@dataclass
class LadderPair:
    z: object
    n: int
    A: object
    B: object

    @property
    def a(self):
        return self.A - 2

    @property
    def b(self):
        return self.B


class LadderTable:
    """All A_k(z), B_k(z), k = 0..n_max, sharing one Cauchy-transform pass."""

    def __init__(self, sys, aux, z):
        spec = sys.spec
        self.sys = sys
        with mp.workprec(spec.precision_bits):
            z = mp.mpc(z)
            if z.imag == 0:
                raise RealAxisPole("A_n, B_n are evaluated off the real axis only")
            self.z = z
            s2, s11 = cauchy_poly_sums(sys, z)
            inv = [1 / (z - t) for t in spec.ts]
            self.A, self.B = [], []
            for n in range(sys.n_max + 1):
                a = 2 + mp.fsum(R * c for R, c in zip(aux.R[n], inv))
                a += mp.fsum(g * c for g, c in zip(spec.gammas, inv)) * s2[n] / sys.h[n]
                self.A.append(a)
                if n == 0:
                    self.B.append(mp.mpc(0))
                    continue
                b = mp.fsum(r * c for r, c in zip(aux.r[n], inv))
                b += mp.fsum(g * c for g, c in zip(spec.gammas, inv)) * s11[n] / sys.h[n - 1]
                self.B.append(b)

    def pair(self, n):
        return LadderPair(self.z, n, self.A[n], self.B[n])


def eval_ladder(sys, aux, n, z):
    if n > sys.n_max:
        raise ValueError(f"degree {n} exceeds n_max = {sys.n_max}")
    return LadderTable(sys, aux, z).pair(n)


def _terms_lowering(tab, n):
    sys, z = tab.sys, tab.z
    p, dp, pm, _ = eval_P_pair(sys, n, z)
    t1 = dp
    t2 = tab.B[n] * p
    t3 = sys.beta[n] * tab.A[n] * pm
    return t1 + t2 - t3, (t1, t2, t3)


def _terms_raising(tab, n):
    sys, z = tab.sys, tab.z
    p, _, pm, dpm = eval_P_pair(sys, n, z)
    t1 = dpm
    t2 = (tab.B[n] + 2 * z) * pm
    t3 = tab.A[n - 1] * p
    return t1 - t2 + t3, (t1, t2, t3)


def _terms_s1(tab, n):
    sys, z = tab.sys, tab.z
    t1, t2 = tab.B[n + 1], tab.B[n]
    t3 = (z - sys.alpha[n]) * tab.A[n]
    t4 = 2 * z
    return t1 + t2 - t3 + t4, (t1, t2, t3, t4)


def _terms_s2(tab, n):
    sys, z = tab.sys, tab.z
    t1 = (z - sys.alpha[n]) * (tab.B[n + 1] - tab.B[n])
    t2 = sys.beta[n + 1] * tab.A[n + 1]
    t3 = sys.beta[n] * tab.A[n - 1] if n else mpf(0)
    return 1 + t1 - t2 + t3, (mpf(1), t1, t2, t3)


def _terms_s2prime(tab, n):
    sys, z = tab.sys, tab.z
    t1 = tab.B[n] ** 2
    t2 = 2 * z * tab.B[n]
    t3 = mp.fsum(tab.A[:n])
    t4 = sys.beta[n] * tab.A[n] * tab.A[n - 1]
    return t1 + t2 + t3 - t4, (t1, t2, t3, t4)


CHECKS = {
    "lowering": (_terms_lowering, "P_n' + B_n P_n = beta_n A_n P_{n-1}", 1, 0),
    "raising": (_terms_raising, "P_{n-1}' - (B_n + 2z) P_{n-1} = -A_{n-1} P_n", 1, 0),
    "S1": (_terms_s1, "B_{n+1} + B_n = (z - alpha_n) A_n - 2z", 0, 1),
    "S2": (_terms_s2, "1 + (z - alpha_n)(B_{n+1} - B_n) = beta_{n+1} A_{n+1} - beta_n A_{n-1}", 0, 1),
    "S2'": (_terms_s2prime, "B_n^2 + 2z B_n + sum_{k<n} A_k = beta_n A_n A_{n-1}", 1, 0),
}


def _residual(kind, sys, aux, n, z, tab=None):
    fn, _, lo, ahead = CHECKS[kind]
    if n < lo or n + ahead > sys.n_max:
        raise ValueError(f"{kind} check needs {lo} <= n <= n_max - {ahead}")
    tab = tab or LadderTable(sys, aux, z)
    with mp.workprec(sys.spec.precision_bits):
        diff, terms = fn(tab, n)
        return normalized(diff, *terms)


def lowering_residual(sys, aux, n, z):
    return _residual("lowering", sys, aux, n, z)


def raising_residual(sys, aux, n, z):
    return _residual("raising", sys, aux, n, z)


def s1_residual(sys, aux, n, z):
    return _residual("S1", sys, aux, n, z)


def s2_residual(sys, aux, n, z):
    return _residual("S2", sys, aux, n, z)


def s2prime_residual(sys, aux, n, z):
    return _residual("S2'", sys, aux, n, z)


def verify_ladder(sys, aux, ns=None, points=None, tolerance=None):
    """Reports for all five relations at every (n, z) that the data allow."""
    spec = sys.spec
    tol = tolerance if tolerance is not None else 1000 * spec.quad_tol
    points = points if points is not None else test_points()
    ns = list(ns) if ns is not None else list(range(sys.n_max + 1))
    out = []
    with mp.workprec(spec.precision_bits):
        for z in points:
            tab = LadderTable(sys, aux, z)
            zs = mp.nstr(tab.z, 6)
            for n in ns:
                for kind, (fn, anchor, lo, ahead) in CHECKS.items():
                    if n < lo or n + ahead > sys.n_max:
                        continue
                    diff, terms = fn(tab, n)
                    out.append(report(f"ladder.{kind}", anchor, {"n": n, "z": zs},
                                      diff, terms, tol))
    return out
