"""Derivatives in the positions t by finite differences, and the
differential relations they must satisfy.

Every perturbed system reuses the panel layout of the base point (see
:mod:`fh_gauss.quadrature`), so quadrature error is a smooth function of t
and does not pollute the difference quotients.  With 256-bit arithmetic
and h = 1e-8 the truncation error of the stencil dominates by many orders.

``delta`` is the aggregate derivative sum_k d/dt_k; delta^2 is taken as the
second difference along the all-ones direction.
"""

from dataclasses import dataclass

from mpmath import mp, mpf

from .cauchy import aux_quantities
from .errors import (ConfigError, DegenerateDenominator, DegenerateR, StepCollision)
from .identities import p_expression
from .orthopoly import build_system
from .records import normalized, report

DEFAULT_STEP = "1e-8"
DEFAULT_C = 100
ORDER_WINDOWS = {False: (1.8, 2.2), True: (3.8, 4.2)}
DISCRIMINANT_FLOOR = mpf("1e-20")


@dataclass(frozen=True)
class DerivativeStencil:
    """Step, Richardson switch and direction (None means the aggregate delta)."""

    h: object = DEFAULT_STEP
    richardson: bool = True
    direction: object = None

    def step(self, prec):
        with mp.workprec(prec):
            return mpf(self.h)


class Evaluator:
    """Systems and auxiliary tables at the base point and perturbations of it."""

    def __init__(self, spec, n_max, base=None):
        self.spec = spec
        self.n_max = n_max
        self.prec = spec.precision_bits
        if base is None:
            base = build_system(spec, n_max)
        self.base = base
        self.plan = base.plan
        self._cache = {tuple(spec.ts): (base, aux_quantities(base))}

    def at(self, ts):
        key = tuple(ts)
        hit = self._cache.get(key)
        if hit is None:
            try:
                spec = self.spec.with_ts(key)
            except ConfigError as exc:
                raise StepCollision(f"perturbed positions are invalid: {exc}") from None
            sys = build_system(spec, self.n_max, plan=self.plan, check=False)
            hit = (sys, aux_quantities(sys))
            self._cache[key] = hit
        return hit

    def value(self, fn, shift=None):
        ts = self.spec.ts
        if shift is not None:
            ts = tuple(t + s for t, s in zip(ts, shift))
        sys, aux = self.at(ts)
        with mp.workprec(self.prec):
            return fn(sys, aux)

    def direction(self, which):
        N = self.spec.N
        if which is None:
            return [mpf(1)] * N
        if isinstance(which, int):
            return [mpf(1) if k == which else mpf(0) for k in range(N)]
        return [mpf(c) for c in which]

    # stencils

    def first(self, fn, which, h, richardson=True):
        d = self.direction(which)
        with mp.workprec(self.prec):
            def central(s):
                up = self.value(fn, [s * c for c in d])
                dn = self.value(fn, [-s * c for c in d])
                return (up - dn) / (2 * s)

            if not richardson:
                return central(h)
            return (4 * central(h) - central(2 * h)) / 3

    def second(self, fn, which, h, richardson=True):
        d = self.direction(which)
        with mp.workprec(self.prec):
            mid = self.value(fn)

            def central(s):
                up = self.value(fn, [s * c for c in d])
                dn = self.value(fn, [-s * c for c in d])
                return (up - 2 * mid + dn) / (s * s)

            if not richardson:
                return central(h)
            return (4 * central(h) - central(2 * h)) / 3

    def mixed(self, fn, which_a, which_b, h, richardson=True):
        da = self.direction(which_a)
        db = self.direction(which_b)
        with mp.workprec(self.prec):
            def cross(s):
                acc = mpf(0)
                for sa, sb, sign in ((1, 1, 1), (1, -1, -1), (-1, 1, -1), (-1, -1, 1)):
                    shift = [s * (sa * a + sb * b) for a, b in zip(da, db)]
                    acc += sign * self.value(fn, shift)
                return acc / (4 * s * s)

            if not richardson:
                return cross(h)
            return (4 * cross(h) - cross(2 * h)) / 3


def t_derivative(quantity, spec, stencil, n_max=None, evaluator=None):
    """First derivative of ``quantity(sys, aux)`` along ``stencil.direction``."""
    if evaluator is None:
        evaluator = Evaluator(spec, n_max if n_max is not None else 4)
    h = stencil.step(spec.precision_bits)
    return evaluator.first(quantity, stencil.direction, h, stencil.richardson)


# scalar probes

def log_h(n):
    return lambda sys, aux: mp.log(sys.h[n])


def p_of(n):
    return lambda sys, aux: sys.p_coeff[n]


def alpha_of(n):
    return lambda sys, aux: sys.alpha[n]


def log_beta(n):
    return lambda sys, aux: mp.log(sys.beta[n])


def beta_of(n):
    return lambda sys, aux: sys.beta[n]


def R_of(n, j):
    return lambda sys, aux: aux.R[n][j]


def r_of(n, j):
    return lambda sys, aux: aux.r[n][j]


def sigma_of(n):
    return lambda sys, aux: 2 * sys.p_coeff[n]


def log_D(n):
    return lambda sys, aux: sys.log_D(n)


def _order(r_coarse, r_fine, floor):
    if r_coarse <= floor or r_fine <= floor:
        return None
    return float(mp.log(r_coarse / r_fine, 2))


class Checker:
    """Runs finite-difference identity checks and their convergence study."""

    def __init__(self, evaluator, h=DEFAULT_STEP, richardson=True, C=DEFAULT_C,
                 measure_order=False):
        self.ev = evaluator
        self.spec = evaluator.spec
        self.prec = evaluator.prec
        with mp.workprec(self.prec):
            self.h = mpf(h)
            self.C = mpf(C)
            self.tol = self.C * self.h ** 2
        self.richardson = richardson
        self.measure_order = measure_order

    @property
    def sys(self):
        return self.ev.base

    @property
    def aux(self):
        return self.ev.at(self.spec.ts)[1]

    def run(self, name, anchor, params, check, derivative_order=1, extra_tol=0, note=""):
        """``check(h, richardson) -> (diff, terms)``; one report with optional order study."""
        with mp.workprec(self.prec):
            diff, terms = check(self.h, self.richardson)
            tol = self.tol + extra_tol
            rep = report(name, anchor, params, diff, terms, tol, note)
            if self.measure_order:
                floor = mpf(2) ** (40 - self.prec) / self.h ** derivative_order
                orders = {}
                ok = True
                for rich in (False, True):
                    coarse = normalized(*_split(check(self.h, rich)))
                    fine = normalized(*_split(check(self.h / 2, rich)))
                    o = _order(coarse, fine, floor)
                    key = "order_richardson" if rich else "order_central"
                    orders[key] = "noise" if o is None else f"{o:.3f}"
                    lo, hi = ORDER_WINDOWS[rich]
                    ok = ok and (o is None or lo <= o <= hi)
                rep.params.update(orders)
                rep.passed = rep.passed and ok
            return rep

    # first derivatives along a coordinate or delta

    def d(self, fn, which, h, rich):
        return self.ev.first(fn, which, h, rich)


def _split(pair):
    diff, terms = pair
    return (diff,) + tuple(terms)


def verify_lemma41(chk, n):
    """d/dt_j of log h_n, p(n), log beta_n, alpha_n against R, r."""
    sys, aux, spec = chk.sys, chk.aux, chk.spec
    out = []
    for j in range(spec.N):
        prm = {"n": n, "j": j + 1}

        def c1(h, rich, j=j):
            d = chk.d(log_h(n), j, h, rich)
            return d + aux.R[n][j], (d, aux.R[n][j])

        out.append(chk.run("dynamics.dlog_h", "d/dt_j log h_n = -R_{n,j}", prm, c1))

        def c2(h, rich, j=j):
            d = chk.d(p_of(n), j, h, rich)
            return d - aux.r[n][j], (d, aux.r[n][j])

        out.append(chk.run("dynamics.dp", "d/dt_j p(n) = r_{n,j}", prm, c2))
        if n >= 1:
            def c3(h, rich, j=j):
                d = chk.d(log_beta(n), j, h, rich)
                rhs = aux.R[n - 1][j] - aux.R[n][j]
                return d - rhs, (d, aux.R[n - 1][j], aux.R[n][j])

            out.append(chk.run("dynamics.dlog_beta", "d/dt_j log beta_n = R_{n-1,j} - R_{n,j}",
                               prm, c3))
        if n + 1 <= sys.n_max:
            def c4(h, rich, j=j):
                d = chk.d(alpha_of(n), j, h, rich)
                rhs = aux.r[n][j] - aux.r[n + 1][j]
                return d - rhs, (d, aux.r[n][j], aux.r[n + 1][j])

            out.append(chk.run("dynamics.dalpha", "d/dt_j alpha_n = r_{n,j} - r_{n+1,j}", prm, c4))
    return out


def verify_cross_partials(chk, n):
    out = []
    N = chk.spec.N
    for j in range(N):
        for k in range(j + 1, N):
            prm = {"n": n, "j": j + 1, "k": k + 1}
            for label, probe in (("R", R_of), ("r", r_of)):
                def c(h, rich, j=j, k=k, probe=probe):
                    a = chk.d(probe(n, k), j, h, rich)
                    b = chk.d(probe(n, j), k, h, rich)
                    return a - b, (a, b)

                out.append(chk.run(f"dynamics.cross_{label}",
                                   f"d/dt_j {label}_{{n,k}} = d/dt_k {label}_{{n,j}}", prm, c))
    return out


def verify_toda(chk, n):
    sys = chk.sys
    out = []
    if n >= 1:
        def c1(h, rich):
            d = chk.d(log_beta(n), None, h, rich)
            rhs = 2 * (sys.alpha[n - 1] - sys.alpha[n])
            return d - rhs, (d, rhs)

        out.append(chk.run("dynamics.toda_beta", "delta log beta_n = 2(alpha_{n-1} - alpha_n)",
                           {"n": n}, c1))
    if n + 1 <= sys.n_max:
        def c2(h, rich):
            d = chk.d(alpha_of(n), None, h, rich)
            rhs = 1 + 2 * (sys.beta[n] - sys.beta[n + 1])
            return d - rhs, (d, mpf(1), 2 * sys.beta[n], 2 * sys.beta[n + 1])

        out.append(chk.run("dynamics.toda_alpha", "delta alpha_n = 1 + 2(beta_n - beta_{n+1})",
                           {"n": n}, c2))
    return out


def _check_R(spec, R, n, j, prec):
    if abs(R) < mpf(2) ** (-prec // 2):
        raise DegenerateR(f"R_{{{n},{j + 1}}} vanishes; relation divides by it")


def verify_riccati(chk, n):
    spec, aux = chk.spec, chk.aux
    out = []
    R, r = aux.R[n], aux.r[n]
    sR, sr = mp.fsum(R), mp.fsum(r)
    for j in range(spec.N):
        prm = {"n": n, "j": j + 1}
        g, t = spec.gammas[j], spec.ts[j]

        def c1(h, rich, j=j, g=g, t=t):
            d = chk.d(R_of(n, j), None, h, rich)
            terms = (4 * r[j], (2 * t - sR) * R[j], 2 * g)
            return d - (terms[0] - terms[1] - terms[2]), (d,) + terms

        out.append(chk.run("dynamics.riccati_R",
                           "delta R_{n,j} = 4 r_{n,j} - (2 t_j - sum R) R_{n,j} - 2 gamma_j", prm, c1))
        _check_R(spec, R[j], n, j, chk.prec)

        def c2(h, rich, j=j, g=g):
            d = chk.d(r_of(n, j), None, h, rich)
            terms = (2 * r[j] * (r[j] - g) / R[j], (n + sr) * R[j])
            return d - (terms[0] - terms[1]), (d,) + terms

        out.append(chk.run("dynamics.riccati_r",
                           "delta r_{n,j} = 2 r(r - gamma_j)/R - (n + sum r) R", prm, c2))
    return out


def verify_pde_R(chk, n):
    """The second-order PDE for R_{n,j}; for N = 1 also the ODE and its
    Painleve IV form in the variable t = -t_1."""
    spec, aux = chk.spec, chk.aux
    R = aux.R[n]
    sR = mp.fsum(R)
    half = sR / 2
    out = []
    bracket = mp.fsum((t - half) * Rk + g for t, Rk, g in zip(spec.ts, R, spec.gammas))
    for j in range(spec.N):
        _check_R(spec, R[j], n, j, chk.prec)
        g, t = spec.gammas[j], spec.ts[j]
        prm = {"n": n, "j": j + 1}

        def c(h, rich, j=j, g=g, t=t):
            d1 = chk.d(R_of(n, j), None, h, rich)
            d2 = chk.ev.second(R_of(n, j), None, h, rich)
            terms = (d1 * d1 / (4 * R[j]), bracket * R[j], (t - half) ** 2 * R[j],
                     (2 * n + 1) * R[j], g * g / R[j])
            rhs = terms[0] - terms[1] + terms[2] - terms[3] - terms[4]
            return d2 / 2 - rhs, (d2 / 2,) + terms

        out.append(chk.run("dynamics.pde_R", "(1/2) delta^2 R_{n,j} = second-order PDE in R",
                           prm, c, derivative_order=2))
    if spec.N == 1:
        out.extend(_n1_reductions(chk, n))
    return out


def _n1_reductions(chk, n):
    spec, aux = chk.spec, chk.aux
    R = aux.R[n][0]
    t1, g = spec.ts[0], spec.gammas[0]

    def ode(h, rich):
        d1 = chk.d(R_of(n, 0), 0, h, rich)
        d2 = chk.ev.second(R_of(n, 0), 0, h, rich)
        terms = (d1 * d1 / (2 * R), ((2 * t1 - R) * R + 2 * g) * R,
                 2 * (t1 - R / 2) ** 2 * R, 2 * (2 * n + 1) * R, 2 * g * g / R)
        rhs = terms[0] - terms[1] + terms[2] - terms[3] - terms[4]
        return d2 - rhs, (d2,) + terms

    def p4(h, rich):
        t = -t1
        # R_n(t) := R_{n,1}(-t): first derivative flips sign, second does not
        d1 = -chk.d(R_of(n, 0), 0, h, rich)
        d2 = chk.ev.second(R_of(n, 0), 0, h, rich)
        terms = (d1 * d1 / (2 * R), mpf(3) / 2 * R ** 3, 4 * t * R * R,
                 2 * (t * t - 2 * n - 1 - g) * R, 2 * g * g / R)
        rhs = terms[0] + terms[1] + terms[2] + terms[3] - terms[4]
        return d2 - rhs, (d2,) + terms

    return [
        chk.run("dynamics.ode_R_N1", "R'' for N = 1 (single-point reduction)", {"n": n}, ode,
                derivative_order=2),
        chk.run("dynamics.painleve_iv", "R_n(t) := R_{n,1}(-t) obeys Painleve IV", {"n": n}, p4,
                derivative_order=2),
    ]


def compute_sigma(sys, n):
    """sigma_n = delta log D_n, reported through its closed form 2 p(n)."""
    with mp.workprec(sys.spec.precision_bits):
        return 2 * sys.p_coeff[n]


def _sign(x):
    return 1 if x > 0 else -1


def verify_sigma_suite(chk, n):
    """sigma_n three ways, its first-derivative link to r, the closed-form
    reconstruction of R, the discriminant sign, and the sigma PDE."""
    spec, sys, aux = chk.spec, chk.sys, chk.aux
    prec = chk.prec
    if n < 1:
        raise ValueError("sigma suite needs n >= 1")
    tol_q = 1000 * spec.quad_tol
    out = []
    R, Rm, r = aux.R[n], aux.R[n - 1], aux.r[n]
    sigma = compute_sigma(sys, n)

    def fd_path(h, rich):
        d = chk.d(log_D(n), None, h, rich)
        return d - sigma, (d, sigma)

    out.append(chk.run("sigma.fd_vs_p", "delta log D_n = 2 p(n)", {"n": n}, fd_path))
    value, terms = p_expression(spec, R, r, n)
    out.append(report("sigma.aux_vs_p", "sigma_n = 2 sum t r - (n + sum r) sum R - 2 sum (r^2 - gamma r)/R",
                      {"n": n}, 2 * value - sigma, [sigma] + [2 * t for t in terms], tol_q))

    sig = sigma_of(n)
    h, rich = chk.h, chk.richardson

    def derivs(h, rich):
        ds = chk.d(sig, None, h, rich)
        dj = [chk.d(sig, j, h, rich) for j in range(spec.N)]
        mj = [chk.ev.mixed(sig, j, None, h, rich) for j in range(spec.N)]
        return ds, dj, mj

    for j in range(spec.N):
        def c_r(h, rich, j=j):
            d = chk.d(sig, j, h, rich)
            return r[j] - d / 2, (r[j], d / 2)

        out.append(chk.run("sigma.r_from_sigma", "r_{n,j} = (1/2) d sigma_n / dt_j",
                           {"n": n, "j": j + 1}, c_r))

    ds, dj, mj = derivs(h, rich)
    den = 2 * n + ds
    if abs(den) < mpf(2) ** (-prec // 2):
        raise DegenerateDenominator("2n + delta sigma_n vanishes")
    sgn_tol = tol_q

    def discriminant(j, ds, dj, mj):
        return mj[j] ** 2 + 4 * (2 * n + ds) * dj[j] * (dj[j] - 2 * spec.gammas[j])

    signs = []
    for j in range(spec.N):
        prm = {"n": n, "j": j + 1}
        delta_j = discriminant(j, ds, dj, mj)
        out.append(report("sigma.discriminant", "Delta_j >= 0", prm,
                          min(delta_j, mpf(0)), [], DISCRIMINANT_FLOOR))
        root = mp.sqrt(max(delta_j, mpf(0)))
        s = R[j] + Rm[j]
        cands = [_sign(s)] if abs(s) >= sgn_tol else [1, -1]
        best = None
        for sg in cands:
            rec = (-mj[j] + sg * root) / (2 * den)
            res = normalized(rec - R[j], rec, R[j])
            if best is None or res < best[0]:
                best = (res, sg, rec)
        note = "sign ambiguous: R_{n,j} + R_{n-1,j} ~ 0" if len(cands) > 1 else ""
        signs.append(best[1])

        def c_rec(h, rich, j=j, sg=best[1]):
            ds_, dj_, mj_ = derivs(h, rich)
            d_ = discriminant(j, ds_, dj_, mj_)
            rec = (-mj_[j] + sg * mp.sqrt(max(d_, mpf(0)))) / (2 * (2 * n + ds_))
            return rec - R[j], (rec, R[j])

        out.append(chk.run("sigma.R_reconstruction",
                           "R_{n,j} = [-(d_j delta sigma) + sgn(R_{n,j}+R_{n-1,j}) sqrt(Delta_j)] / (2(2n + delta sigma))",
                           prm, c_rec, derivative_order=2, extra_tol=tol_q, note=note))

        def c_quad(h, rich, j=j):
            dr = chk.d(r_of(n, j), None, h, rich)
            terms = ((n + mp.fsum(r)) * R[j] ** 2, dr * R[j], 2 * r[j] * (r[j] - spec.gammas[j]))
            return terms[0] + terms[1] - terms[2], terms

        out.append(chk.run("sigma.quadratic_root", "(n + sum r) R^2 + delta r R - 2 r (r - gamma) = 0",
                           prm, c_quad))

    def c_pde(h, rich):
        ds_, dj_, mj_ = derivs(h, rich)
        euler = mp.fsum(t * d for t, d in zip(spec.ts, dj_))
        roots = [sg * mp.sqrt(max(discriminant(j, ds_, dj_, mj_), mpf(0)))
                 for j, sg in enumerate(signs)]
        return sigma - euler + mp.fsum(roots) / 2, [sigma, euler] + [x / 2 for x in roots]

    out.append(chk.run("sigma.pde", "sigma_n = sum t_j d_j sigma_n - (1/2) sum sgn sqrt(Delta_j)",
                       {"n": n}, c_pde, derivative_order=2))

    if spec.N == 1:
        t1, g = spec.ts[0], spec.gammas[0]

        def c_form(h, rich):
            s1 = chk.d(sig, 0, h, rich)
            s2 = chk.ev.second(sig, 0, h, rich)
            terms = (s2 * s2, 4 * (t1 * s1 - sigma) ** 2, 4 * s1 * (s1 - 2 * g) * (s1 + 2 * n))
            return terms[0] - terms[1] + terms[2], terms

        out.append(chk.run("sigma.sigma_form_N1",
                           "(sigma'')^2 = 4(t sigma' - sigma)^2 - 4 sigma'(sigma' - 2 gamma)(sigma' + 2n)",
                           {"n": n}, c_form, derivative_order=2))
    return out


def verify_dynamics(spec, ns, n_max=None, h=DEFAULT_STEP, richardson=True, C=DEFAULT_C,
                    measure_order=False, base=None, sigma=True):
    """Every finite-difference suite at each degree in ``ns``."""
    ns = list(ns)
    top = max(ns) + 1 if n_max is None else n_max
    ev = Evaluator(spec, top, base)
    chk = Checker(ev, h, richardson, C, measure_order)
    out = []
    with mp.workprec(spec.precision_bits):
        for n in ns:
            out += verify_lemma41(chk, n)
            out += verify_cross_partials(chk, n)
            out += verify_toda(chk, n)
            if any(spec.gammas):
                out += _guarded(verify_riccati, chk, n)
                out += _guarded(verify_pde_R, chk, n)
                if sigma and n >= 1:
                    out += _guarded(verify_sigma_suite, chk, n)
    return out


def _guarded(fn, chk, n):
    try:
        return fn(chk, n)
    except DegenerateR as exc:
        return [report(f"dynamics.{fn.__name__}", "skipped", {"n": n}, mpf(0), [], mpf(0),
                       f"skipped: {exc}")]


__all__ = [
    "DerivativeStencil", "Evaluator", "Checker", "t_derivative", "verify_lemma41",
    "verify_cross_partials", "verify_toda", "verify_riccati", "verify_pde_R",
    "compute_sigma", "verify_sigma_suite", "verify_dynamics",
]
