import numpy as np
from hypothesis import assume, given, settings, strategies as st

from bireflect import jets

cplx = st.complex_numbers(min_magnitude=0.2, max_magnitude=3.0, allow_nan=False, allow_infinity=False)


@given(cplx, st.integers(-4, 4))
@settings(max_examples=50, deadline=None)
def test_monomial_matches_repeated_products(t0, p):
    L = 5
    x = jets.variable(t0, L)
    ref = jets.const(1.0, L)
    base = x if p >= 0 else jets.recip(x)
    for _ in range(abs(p)):
        ref = jets.mul(ref, base)
    assert np.allclose(jets.monomial(t0, p, L), ref, rtol=1e-10, atol=1e-12)


@given(cplx)
@settings(max_examples=50, deadline=None)
def test_recip_inverts(t0):
    a = jets.monomial(t0, 3, 6) + jets.variable(t0, 6)
    assume(abs(a[0]) > 1e-3)  # t³ + t vanishes at 0, ±i
    one = jets.mul(a, jets.recip(a))
    assert np.allclose(one, jets.const(1.0, 6), atol=1e-10)


def test_deriv_and_derivatives():
    a = jets.monomial(2.0, 4, 5)  # t⁴ about 2
    assert np.allclose(jets.derivatives(a), [16, 32, 48, 48, 24])
    assert np.allclose(jets.deriv(a), jets.monomial(2.0, 3, 4) * 4)


def test_compose_ladder_exp():
    # f = exp, inner = 2t about t0 = 0.3 → exp(2t) jet
    t0, L = 0.3, 5
    inner = 2 * jets.variable(t0, L)
    vals = [np.exp(2 * t0)] * L
    got = jets.compose_ladder(vals, inner)
    want = np.array([np.exp(2 * t0) * 2**n / np.prod(range(1, n + 1)) for n in range(L)])
    assert np.allclose(got, want)


def test_batch_broadcast():
    t0 = np.array([1.0, 2.0, 3.0])
    a = jets.mul(jets.variable(t0, 3), jets.const(np.ones(3), 3))
    assert a.shape == (3, 3)
    assert np.allclose(a[0], t0)
