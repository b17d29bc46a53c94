import random

import pytest
from mpmath import mp, mpf

from fh_gauss import kernels
from fh_gauss.kernels import _pykernels
from fh_gauss.quadrature import gauss_jacobi

needs_ext = pytest.mark.skipif(kernels.BACKEND != "mpfr", reason="compiled kernels not built")


def _data(n=200, seed=1):
    rng = random.Random(seed)
    with mp.workprec(256):
        xs = sorted(mpf(rng.uniform(-5, 5)) for _ in range(n))
        ws = [mpf(rng.uniform(0, 1)) * mp.exp(-x * x) for x in xs]
    return xs, ws


def _close(a, b, rel=mpf(2) ** -240):
    return all(abs(x - y) <= rel * max(1, abs(y)) for x, y in zip(a, b))


@needs_ext
def test_power_sums_parity():
    c = kernels.backend_module("mpfr")
    xs, ws = _data()
    assert _close(c.power_sums(xs, ws, 12, 256), _pykernels.power_sums(xs, ws, 12, 256))


@needs_ext
def test_stieltjes_parity():
    c = kernels.backend_module("mpfr")
    xs, ws = _data()
    a1, h1 = c.stieltjes(xs, ws, 10, 256)
    a2, h2 = _pykernels.stieltjes(xs, ws, 10, 256)
    assert _close(a1, a2, mpf(2) ** -230) and _close(h1, h2, mpf(2) ** -230)


@needs_ext
def test_poly_sums_parity():
    c = kernels.backend_module("mpfr")
    xs, ws = _data()
    alpha, h = _pykernels.stieltjes(xs, ws, 8, 256)
    beta = [mpf(0)] + [h[k] / h[k - 1] for k in range(1, 9)]
    cs = [w / (x - mpf("0.123")) for x, w in zip(xs, ws)]
    r1 = c.poly_sums(xs, cs, alpha, beta, 8, 256)
    r2 = _pykernels.poly_sums(xs, cs, alpha, beta, 8, 256)
    assert _close(r1[0], r2[0], mpf(2) ** -220) and _close(r1[1], r2[1], mpf(2) ** -220)


@needs_ext
def test_weight_values_and_newton_parity():
    c = kernels.backend_module("mpfr")
    xs, _ = _data(50)
    ts = [mpf("-0.6"), mpf("0.8")]
    gs = [mpf("0.5"), mpf("1.5")]
    assert _close(c.weight_values(xs, ts, gs, 0, 256), _pykernels.weight_values(xs, ts, gs, 0, 256))
    x0 = [mpf(float(x)) for x in mp.linspace(-0.9, 0.9, 5)]
    n1, d1 = c.jacobi_newton(mpf("0.5"), mpf(0), 5, x0, 256)
    n2, d2 = _pykernels.jacobi_newton(mpf("0.5"), mpf(0), 5, x0, 256)
    assert _close(n1, n2) and _close(d1, d2, mpf(2) ** -230)


@pytest.mark.parametrize("a,b", [(0, 0), (mpf("0.5"), 0), (0, mpf("-0.5")), (mpf("1.5"), mpf("2.25"))])
def test_gauss_jacobi_exactness(a, b):
    m = 12
    with mp.workprec(256):
        xs, ws = gauss_jacobi(m, a, b, 256)
        for k in (0, 1, 5, 2 * m - 1):
            got = mp.fdot(ws, [x ** k for x in xs])
            # s^k = ((1 + s) - 1)^k, then Beta integrals
            terms = [mp.binomial(k, i) * (-1) ** (k - i) * mpf(2) ** (a + b + i + 1)
                     * mp.beta(a + 1, b + i + 1) for i in range(k + 1)]
            ref = mp.fsum(terms)
            # the alternating sum cancels, so scale by its absolute size
            assert abs(got - ref) < mpf("1e-70") * mp.fsum(abs(t) for t in terms)


def test_mirrored_rules():
    with mp.workprec(256):
        x1, w1 = gauss_jacobi(10, mpf("0.7"), 0, 256)
        x2, w2 = gauss_jacobi(10, 0, mpf("0.7"), 256)
        assert x1 == [-x for x in reversed(x2)]
        assert w1 == list(reversed(w2))
