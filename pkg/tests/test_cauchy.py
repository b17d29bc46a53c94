import pytest
from hypothesis import given, settings, strategies as st
from mpmath import mp, mpf

from fh_gauss.cauchy import (aux_integral, aux_quantities, aux_quantities_direct, cauchy_complex,
                             pv_constants, pv_weight_transform, synthetic_division)
from fh_gauss.errors import RealAxisPole
from fh_gauss.orthopoly import build_system
from fh_gauss.weight import WeightSpec

from oracles import excision_pv, gaussian_cauchy_cf

with mp.workprec(256):
    TOL = mpf("1e-30")


@pytest.mark.parametrize("g", [0.5, -0.5, 2])
def test_pv_vanishes_at_symmetry_centre(g):
    assert abs(pv_weight_transform(WeightSpec((0,), (g,)), 0)) < TOL


def test_pv_even_exponent_exact():
    # |y - 1/2|^2 / (y - 1/2) = y - 1/2, so the PV is -sqrt(pi)/2
    got = pv_weight_transform(WeightSpec((0.5,), (2,)), 0)
    assert abs(got + mp.sqrt(mp.pi) / 2) < TOL


@pytest.mark.parametrize("gs", [(0.5, 1.5), (-0.5, 1.5)])
@pytest.mark.parametrize("j", [0, 1])
def test_pv_against_excision(gs, j):
    got = pv_weight_transform(WeightSpec((-0.6, 0.8), gs), j)
    ref = excision_pv((-0.6, 0.8), gs, j)
    assert abs(got - ref) < mpf("1e-25")


def test_pv_constants_record():
    c = pv_constants(WeightSpec((-0.6, 0.8), (0.5, 1.5)))
    assert len(c.values) == 2 and all(e <= TOL for e in c.errors)
    assert all(abs(h - mpf("0.7")) < TOL for h in c.half_widths)


@settings(max_examples=6, deadline=None)
@given(st.decimals("-1.5", "-0.1", places=2), st.decimals("0.1", "1.5", places=2),
       st.decimals("-0.9", 3, places=2), st.decimals("-0.9", 3, places=2))
def test_pv_odd_under_reflection(a, b, g1, g2):
    spec = WeightSpec((a, b), (g1, g2))
    ref = spec.reflected()
    p = pv_constants(spec).values
    q = pv_constants(ref).values
    assert abs(p[0] + q[1]) <= TOL * max(1, abs(p[0]))
    assert abs(p[1] + q[0]) <= TOL * max(1, abs(p[1]))


def test_gaussian_cauchy_transform():
    spec = WeightSpec((0,), (0,))
    got = cauchy_complex(spec, lambda y: 1, 1j)
    # Faddeeva: -i pi w(i) with w(i) = e erfc(1)
    assert abs(got + 1j * mp.pi * mp.e * mp.erfc(1)) < TOL
    with mp.workdps(30):
        cf = gaussian_cauchy_cf(1j)
    assert abs(got - cf) < mpf("1e-25")


def test_cauchy_conjugate_symmetry():
    spec = WeightSpec((-0.6, 0.8), (0.5, 1.5))
    f = lambda y: y * y - y
    z = mp.mpc("0.3", "1.1")
    assert abs(cauchy_complex(spec, f, z.conjugate()) - cauchy_complex(spec, f, z).conjugate()) < TOL


def test_cauchy_large_argument():
    spec = WeightSpec((0.5,), (1,))
    z = mp.mpc(0, 10 ** 6)
    got = cauchy_complex(spec, lambda y: 1, z)
    a = mpf("0.5")
    mass = mp.exp(-a * a) + a * mp.sqrt(mp.pi) * mp.erf(a)
    assert abs(got * z / mass - 1) < mpf("1e-5")


def test_real_axis_rejected():
    with pytest.raises(RealAxisPole):
        cauchy_complex(WeightSpec((0,), (1,)), lambda y: 1, 0.5)


def test_synthetic_division():
    c = [mpf(v) for v in (3, -2, 0, 5)]
    q, rem = synthetic_division(c, mpf(2))
    assert rem == 3 - 4 + 40
    for y in (mpf(-1), mpf(7)):
        lhs = sum(ck * y ** k for k, ck in enumerate(c))
        rhs = sum(qk * y ** k for k, qk in enumerate(q)) * (y - 2) + rem
        assert lhs == rhs


def test_r0_vanishes(n2):
    _, sys, aux = n2
    assert all(x == 0 for x in aux.r[0])
    assert aux_integral(sys, 0, 1, "r") == 0


def test_symmetric_sum_of_R_vanishes():
    sys = build_system(WeightSpec((0,), (1.5,)), 8)
    aux = aux_quantities(sys)
    assert all(abs(sum(row)) < 1000 * TOL for row in aux.R)


@pytest.mark.parametrize("fx", ["n1", "n2", "pv"])
def test_division_and_direct_paths_agree(fx, request):
    _, sys, aux = request.getfixturevalue(fx)
    direct = aux_quantities_direct(sys)
    for n in range(13):
        for a, b in zip(aux.R[n] + aux.r[n], direct.R[n] + direct.r[n]):
            assert abs(a - b) <= 1000 * TOL * max(1, abs(b))


@pytest.mark.parametrize("fx", ["n1", "n2", "pv"])
def test_sum_rules(fx, request):
    _, sys, aux = request.getfixturevalue(fx)
    for n in range(13):
        assert abs(mp.fsum(aux.R[n]) - 2 * sys.alpha[n]) <= 1000 * TOL
        assert abs(mp.fsum(aux.r[n]) - 2 * sys.beta[n] + n) <= 1000 * TOL * max(1, n)


def test_single_integral_matches_table(n2):
    _, sys, aux = n2
    assert aux_integral(sys, 5, 0, "R") == aux.R[5][0]
    with pytest.raises(ValueError):
        aux_integral(sys, 5, 0, "x")
