import pytest
from mpmath import mp, mpf

from fh_gauss.cauchy import aux_quantities
from fh_gauss.errors import RealAxisPole
from fh_gauss.ladder import (LadderTable, eval_ladder, lowering_residual, raising_residual,
                             s1_residual, s2_residual, s2prime_residual,
                             verify_ladder)
from fh_gauss.ladder import test_points as ladder_points
from fh_gauss.orthopoly import build_system
from fh_gauss.weight import WeightSpec

with mp.workprec(256):
    TOL = mpf("1e-30")


def test_gaussian_limit_is_trivial(gauss):
    _, sys, aux = gauss
    tab = LadderTable(sys, aux, mp.mpc("0.3", "1.1"))
    assert all(abs(a - 2) < TOL for a in tab.A)
    assert all(abs(b) < TOL for b in tab.B)


def test_b0_vanishes(n2):
    _, sys, aux = n2
    assert eval_ladder(sys, aux, 0, 2j).B == 0


def test_ladder_pair_fields(n2):
    _, sys, aux = n2
    lp = eval_ladder(sys, aux, 4, mp.mpc("0.3", "1.1"))
    assert lp.a == lp.A - 2 and lp.b == lp.B


def test_schwarz_symmetry(n2):
    _, sys, aux = n2
    z = mp.mpc("-1", "0.8")
    a = eval_ladder(sys, aux, 5, z)
    b = eval_ladder(sys, aux, 5, z.conjugate())
    assert abs(a.A - b.A.conjugate()) < TOL and abs(a.B - b.B.conjugate()) < TOL


def test_large_z_decay(n2):
    _, sys, aux = n2
    d3 = abs(eval_ladder(sys, aux, 3, mp.mpc(0, 10 ** 3)).A - 2)
    d6 = abs(eval_ladder(sys, aux, 3, mp.mpc(0, 10 ** 6)).A - 2)
    assert 900 < d3 / d6 < 1100


def test_real_axis_rejected(n2):
    _, sys, aux = n2
    with pytest.raises(RealAxisPole):
        eval_ladder(sys, aux, 2, mpf("0.4"))


def test_hermite_relations(gauss):
    _, sys, aux = gauss
    assert lowering_residual(sys, aux, 3, 1j) <= TOL
    assert raising_residual(sys, aux, 3, 1j) <= TOL
    assert s1_residual(sys, aux, 3, 1j) <= TOL


def test_n1_example():
    sys = build_system(WeightSpec((0.5,), (1,)), 4)
    aux = aux_quantities(sys)
    assert lowering_residual(sys, aux, 2, 1 + 1j) <= 1000 * TOL


def test_lowest_degree(n2):
    _, sys, aux = n2
    assert lowering_residual(sys, aux, 1, 2j) <= TOL
    assert s2prime_residual(sys, aux, 1, 2j) <= TOL


def test_n2_compatibility(n2):
    _, sys, aux = n2
    z = mp.mpc("0.7", "0.9")
    for fn in (s1_residual, s2_residual, s2prime_residual):
        assert fn(sys, aux, 5, z) <= 1000 * TOL


def test_degree_guard(n2):
    _, sys, aux = n2
    with pytest.raises(ValueError):
        s1_residual(sys, aux, sys.n_max, 2j)


def test_fixed_point_set(n2):
    _, sys, aux = n2
    reps = verify_ladder(sys, aux, ns=range(sys.n_max))
    assert len({r.params["z"] for r in reps}) == len(ladder_points())
    assert all(r.passed for r in reps)
