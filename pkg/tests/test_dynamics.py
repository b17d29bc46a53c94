import pytest
from mpmath import mp, mpf

from fh_gauss.dynamics import (Checker, DerivativeStencil, Evaluator, alpha_of, compute_sigma,
                               log_h, verify_dynamics, verify_sigma_suite, t_derivative)
from fh_gauss.errors import StepCollision
from fh_gauss.weight import WeightSpec


def test_constant_has_zero_derivative():
    spec = WeightSpec((0.5,), (1,))
    d = t_derivative(lambda sys, aux: mpf(7), spec, DerivativeStencil(), n_max=2)
    assert d == 0


def test_gaussian_shift_is_trivial():
    # with gamma = 0 nothing depends on t
    spec = WeightSpec((0.2, 0.9), (0, 0))
    ev = Evaluator(spec, 3)
    for j in (0, 1, None):
        assert abs(ev.first(log_h(2), j, mpf("1e-8"))) < mpf("1e-40")


def test_derivative_of_alpha_matches_translation():
    # a common shift of all t_j moves the weight by e^{-x^2} only through the
    # Gaussian factor; alpha_0 = mean, whose delta-derivative is 1 + 2(beta_0 - beta_1)
    spec = WeightSpec((0.5,), (1,))
    ev = Evaluator(spec, 2)
    sys = ev.base
    d = ev.first(alpha_of(0), None, mpf("1e-8"))
    assert abs(d - (1 - 2 * sys.beta[1])) < mpf("1e-12")


@pytest.mark.filterwarnings("ignore::RuntimeWarning")
def test_step_collision():
    spec = WeightSpec((0, mpf("1e-9")), (1, 1))
    ev = Evaluator(spec, 1, base=None)
    with pytest.raises(StepCollision):
        ev.first(log_h(0), 0, mpf("1e-8"))


def _all_pass(reps):
    bad = [r.as_row() for r in reps if not r.passed]
    assert not bad, bad


def test_n1_suite_with_order_study():
    spec = WeightSpec((0.5,), (1,))
    reps = verify_dynamics(spec, [4], measure_order=True)
    _all_pass(reps)
    names = {r.name for r in reps}
    assert {"dynamics.ode_R_N1", "dynamics.painleve_iv", "sigma.sigma_form_N1"} <= names
    orders = [r.params["order_richardson"] for r in reps if "order_richardson" in r.params]
    assert orders and all(o == "noise" or 3.8 <= float(o) <= 4.2 for o in orders)


@pytest.mark.slow
@pytest.mark.parametrize("gs", [(0.5, 1.5), (-0.5, 1.5)])
def test_n2_suite(gs):
    spec = WeightSpec((-0.6, 0.8), gs)
    reps = verify_dynamics(spec, [1, 5, 10], n_max=11)
    _all_pass(reps)
    assert any(r.name == "dynamics.cross_R" for r in reps)
    assert max(r.residual for r in reps) < mpf("1e-14")


def test_sigma_closed_form_matches_fd():
    spec = WeightSpec((-0.6, 0.8), (0.5, 1.5))
    ev = Evaluator(spec, 4)
    chk = Checker(ev)
    reps = verify_sigma_suite(chk, 3)
    _all_pass(reps)
    assert compute_sigma(ev.base, 3) == 2 * ev.base.p_coeff[3]
    with pytest.raises(ValueError):
        verify_sigma_suite(chk, 0)


def test_plain_central_differences_are_weaker():
    spec = WeightSpec((0.5,), (1,))
    ev = Evaluator(spec, 3)
    plain = Checker(ev, richardson=False)
    reps = verify_dynamics(spec, [2], base=ev.base, richardson=False, sigma=False)
    _all_pass(reps)
    assert plain.tol == 100 * mpf("1e-8") ** 2
