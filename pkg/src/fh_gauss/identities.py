"""Algebraic relations among alpha_n, beta_n, p(n) and the auxiliary
quantities R_{n,j}, r_{n,j}, plus the forward iteration of R, r in n.
"""

from mpmath import mp, mpf

from .errors import DegenerateR, DivisionBreakdown
from .records import AuxQuantities, report


def _tol(sys, tolerance):
    return tolerance if tolerance is not None else 1000 * sys.spec.quad_tol


def verify_section3(sys, aux, n, tolerance=None):
    """Residuals of the sum rules, the shifted relations in n and the
    quadratic relation r^2 - gamma r = beta R_n R_{n-1}.

    Relations that need level n+1 are skipped when n = n_max; those that
    need n-1 are skipped at n = 0.
    """
    spec = sys.spec
    tol = _tol(sys, tolerance)
    N = spec.N
    out = []
    with mp.workprec(spec.precision_bits):
        al, be = sys.alpha, sys.beta
        R, r = aux.R, aux.r
        sR = mp.fsum(R[n])
        sr = mp.fsum(r[n])
        out.append(report("section3.sum_R", "sum_j R_{n,j} = 2 alpha_n", {"n": n},
                          sR - 2 * al[n], R[n] + [2 * al[n]], tol))
        out.append(report("section3.alpha_from_R", "alpha_n = (1/2) sum_j R_{n,j}", {"n": n},
                          al[n] - sR / 2, [al[n], sR / 2], tol))
        if n >= 1:
            out.append(report("section3.sum_r", "n + sum_j r_{n,j} = 2 beta_n", {"n": n},
                              n + sr - 2 * be[n], r[n] + [mpf(n), 2 * be[n]], tol))
            out.append(report("section3.beta_from_r", "beta_n = n/2 + (1/2) sum_j r_{n,j}",
                              {"n": n}, be[n] - mpf(n) / 2 - sr / 2, [be[n], mpf(n) / 2, sr / 2], tol))
            for j in range(N):
                lhs = r[n][j] ** 2 - spec.gammas[j] * r[n][j]
                rhs = be[n] * R[n][j] * R[n - 1][j]
                out.append(report("section3.quadratic", "r^2 - gamma_j r = beta_n R_{n,j} R_{n-1,j}",
                                  {"n": n, "j": j + 1}, lhs - rhs,
                                  [r[n][j] ** 2, spec.gammas[j] * r[n][j], rhs], tol))
        if n + 1 <= min(sys.n_max, aux.n_max):
            total_l, total_r = [], []
            for j in range(N):
                t = spec.ts[j]
                lhs = r[n + 1][j] + r[n][j]
                rhs = (t - al[n]) * R[n][j] + spec.gammas[j]
                total_l.append(lhs)
                total_r.append(rhs)
                out.append(report("section3.r_step", "r_{n+1,j} + r_{n,j} = (t_j - alpha_n) R_{n,j} + gamma_j",
                                  {"n": n, "j": j + 1}, lhs - rhs,
                                  [r[n + 1][j], r[n][j], rhs], tol))
            out.append(report("section3.r_step_summed", "sum over j of the r step relation",
                              {"n": n}, mp.fsum(total_l) - mp.fsum(total_r), total_l + total_r, tol))
            lhs = 1 + mp.fsum(r[n + 1]) - sr
            rhs = 2 * (be[n + 1] - be[n])
            out.append(report("section3.beta_step", "1 + sum_j (r_{n+1,j} - r_{n,j}) = 2(beta_{n+1} - beta_n)",
                              {"n": n}, lhs - rhs, r[n + 1] + r[n] + [be[n + 1], be[n]], tol))
            agg_l, agg_r = [], []
            for j in range(N):
                t = spec.ts[j]
                lhs = (t - al[n]) * (r[n + 1][j] - r[n][j])
                prev = be[n] * R[n - 1][j] if n else mpf(0)
                rhs = be[n + 1] * R[n + 1][j] - prev
                agg_l.append(lhs)
                agg_r.append(rhs)
                out.append(report("section3.R_step",
                                  "(t_j - alpha_n)(r_{n+1,j} - r_{n,j}) = beta_{n+1} R_{n+1,j} - beta_n R_{n-1,j}",
                                  {"n": n, "j": j + 1}, lhs - rhs,
                                  [lhs, be[n + 1] * R[n + 1][j], prev], tol))
            out.append(report("section3.R_step_summed", "sum over j of the R step relation",
                              {"n": n}, mp.fsum(agg_l) - mp.fsum(agg_r), agg_l + agg_r, tol))
    return out


def p_expression(spec, R, r, n):
    """sum t_j r_j - (1/2)(n + sum r) sum R - sum (r_j^2 - gamma_j r_j)/R_j, with its terms."""
    floor = mpf(2) ** (-spec.precision_bits // 2)
    for j, Rj in enumerate(R):
        if abs(Rj) < floor:
            raise DegenerateR(f"|R_{{{n},{j + 1}}}| too small to divide by")
    t1 = mp.fsum(t * x for t, x in zip(spec.ts, r))
    t2 = (n + mp.fsum(r)) * mp.fsum(R) / 2
    t3 = mp.fsum((x * x - g * x) / Rj for x, g, Rj in zip(r, spec.gammas, R))
    return t1 - t2 - t3, (t1, t2, t3)


def verify_p_expression(sys, aux, n, tolerance=None):
    """p(n) from the coefficient table against its expression in R, r."""
    spec = sys.spec
    tol = _tol(sys, tolerance)
    with mp.workprec(spec.precision_bits):
        value, terms = p_expression(spec, aux.R[n], aux.r[n], n)
        p = sys.p_coeff[n]
        return report("section3.p_expression",
                      "p(n) = sum t_j r_j - (n + sum r)(sum R)/2 - sum (r_j^2 - gamma_j r_j)/R_j",
                      {"n": n}, p - value, (p,) + terms, tol)


def verify_p_consistency(sys, n, tolerance=None):
    """p(n) from the coefficient table against -(alpha_0 + ... + alpha_{n-1})."""
    tol = _tol(sys, tolerance)
    with mp.workprec(sys.spec.precision_bits):
        a = sys.p_coeff[n]
        b = sys.p_from_alpha(n)
        return report("orthopoly.p_sum_alpha", "p(n) = -sum_{k<n} alpha_k", {"n": n},
                      a - b, [a, b] + list(sys.alpha[:n]), tol)


def _relabel(spec):
    """Permutation putting the largest |gamma| first (stable among ties)."""
    order = sorted(range(spec.N), key=lambda j: (-abs(spec.gammas[j]), j))
    return order


def iterate_difference_system(spec, n_max, R0, R1=None):
    """Run R, r forward in n from R_{0,.} (and r_{0,.} = 0).

    r_{n+1,.} comes from the r step relation with alpha_n = (1/2) sum R_n;
    R_{n+1,1} from the quadratic relation with beta_{n+1} expressed through
    r_{n+1,.}; the remaining R_{n+1,j} from the ratio of quadratic relations.
    The singularity with the largest |gamma| plays the role of index 1;
    results are returned in the caller's labelling.

    ``R1`` optionally replaces the computed first level (a bootstrap seed).
    On a vanishing denominator :class:`DivisionBreakdown` is raised with
    the partial table attached.
    """
    prec = spec.precision_bits
    N = spec.N
    perm = _relabel(spec)
    ts = [spec.ts[k] for k in perm]
    gs = [spec.gammas[k] for k in perm]
    floor = mpf(2) ** (-prec // 2)
    with mp.workprec(prec):
        R = [[mpf(R0[k]) for k in perm]]
        r = [[mpf(0)] * N]

        def back(table):
            out = []
            for row in table:
                new = [None] * N
                for pos, k in enumerate(perm):
                    new[k] = row[pos]
                out.append(new)
            return out

        if not any(gs):
            zeros = [[mpf(0)] * N for _ in range(n_max + 1)]
            return AuxQuantities(zeros, [list(z) for z in zeros], source="iterated")
        for n in range(n_max):
            half = mp.fsum(R[n]) / 2
            r_next = [(t - half) * Rj + g - rj for t, g, Rj, rj in zip(ts, gs, R[n], r[n])]
            m = n + 1
            if m == 1 and R1 is not None:
                R_next = [mpf(R1[k]) for k in perm]
            else:
                q1 = r_next[0] * (r_next[0] - gs[0])
                den = (m + mp.fsum(r_next)) * R[n][0]
                if abs(den) < floor or abs(q1) < floor:
                    raise DivisionBreakdown(f"vanishing denominator at n = {m}",
                                            AuxQuantities(back(R), back(r), source="iterated"))
                R_next = [2 * q1 / den]
                for j in range(1, N):
                    if abs(R[n][j]) < floor:
                        raise DivisionBreakdown(f"vanishing R_{{{n},{j + 1}}} at n = {m}",
                                                AuxQuantities(back(R), back(r), source="iterated"))
                    qj = r_next[j] * (r_next[j] - gs[j])
                    R_next.append(qj / q1 * R_next[0] * R[n][0] / R[n][j])
            R.append(R_next)
            r.append(r_next)
        return AuxQuantities(back(R), back(r), source="iterated")


def iteration_deviation(iterated, reference):
    """Per-n max over j of the relative gap between two aux tables."""
    out = []
    for n in range(min(iterated.n_max, reference.n_max) + 1):
        worst = mpf(0)
        for a, b in zip(iterated.R[n] + iterated.r[n], reference.R[n] + reference.r[n]):
            worst = max(worst, abs(a - b) / max(abs(b), mpf(2) ** -64))
        out.append(worst)
    return out


def verify_iteration(sys, aux, bound="1e-12", n_top=None):
    """Iterate from the quadrature R_{0,.} and compare level by level.

    Also checks alpha_n = (1/2) sum R and beta_n = n/2 + (1/2) sum r for the
    iterated values against the recurrence data of ``sys``.
    """
    spec = sys.spec
    n_top = sys.n_max if n_top is None else n_top
    with mp.workprec(spec.precision_bits):
        bound = mpf(bound)
        it = iterate_difference_system(spec, n_top, aux.R[0])
        dev = iteration_deviation(it, aux)
        it.deviation = dev
        out = []
        for n in range(n_top + 1):
            out.append(report("iteration.deviation", "iterated vs quadrature R_{n,.}, r_{n,.}",
                              {"n": n}, dev[n], [], bound))
            a = mp.fsum(it.R[n]) / 2
            out.append(report("iteration.alpha", "alpha_n = (1/2) sum_j R_{n,j} (iterated)",
                              {"n": n}, sys.alpha[n] - a, [sys.alpha[n], a], bound))
            if n:
                b = (n + mp.fsum(it.r[n])) / 2
                out.append(report("iteration.beta", "beta_n = (n + sum_j r_{n,j})/2 (iterated)",
                                  {"n": n}, sys.beta[n] - b, [sys.beta[n], b], bound))
        return it, out
