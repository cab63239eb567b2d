import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import nullcone.numeric as nm
from fdtools import fd_gradient, fd_hessian
from nullcone.errors import DomainError
from nullcone.numeric import (HyperDual, Tensor4, hyperdual_eval,
                              rank_with_tolerance)


def test_cubic():
    v, g, h = hyperdual_eval(lambda t: t ** 3, [2.0])
    assert (v, g[0], h[0, 0]) == (8.0, 12.0, 12.0)


def test_quadratic_form():
    v, g, h = hyperdual_eval(lambda a, b: 0.5 * (a * a - b * b), [3.0, 1.0])
    assert v == 4.0
    assert np.allclose(g, [3.0, -1.0])
    assert np.allclose(h, np.diag([1.0, -1.0]))


def test_sinh_product_cross_term():
    v, g, h = hyperdual_eval(lambda t, c: nm.sinh(t) * c, [1.0, 2.0])
    fd = fd_hessian(lambda x: math.sinh(x[0]) * x[1], [1.0, 2.0])
    assert abs(h[0, 1] - math.cosh(1.0)) < 1e-12
    assert abs(h[0, 1] - fd[0, 1]) < 1e-7


def test_constant_promotion():
    v, g, h = hyperdual_eval(lambda t: 7.5, [1.0])
    assert v == 7.5 and not g.any() and not h.any()


def test_division_and_powers():
    v, g, h = hyperdual_eval(lambda t: 1.0 / t, [0.5])
    assert np.allclose([v, g[0], h[0, 0]], [2.0, -4.0, 16.0])
    v, g, h = hyperdual_eval(lambda t: t ** 0.5, [4.0])
    assert np.allclose([v, g[0]], [2.0, 0.25])


def test_domain_errors():
    with pytest.raises(DomainError):
        hyperdual_eval(lambda t: nm.log(t), [-1.0])
    with pytest.raises(DomainError):
        hyperdual_eval(lambda t: nm.sqrt(t - 2.0), [1.0])
    with pytest.raises(DomainError):
        hyperdual_eval(lambda t: 1.0 / (t - 1.0), [1.0])


def test_atan2_matches_math():
    for y0, x0 in [(0.3, 1.2), (1.2, 0.3), (-0.7, 0.4), (0.5, -1.1), (-0.5, -0.2)]:
        v, g, h = hyperdual_eval(lambda a, b: nm.atan2(a, b), [y0, x0])
        assert abs(v - math.atan2(y0, x0)) < 1e-14
        r2 = x0 * x0 + y0 * y0
        assert np.max(np.abs(g - np.array([x0 / r2, -y0 / r2]))) < 1e-14


# random smooth compositions: hyperdual derivatives match central differences
_UNARIES = [nm.sin, nm.cos, nm.sinh, nm.cosh, nm.tanh, nm.exp, nm.atan]
_UNARIES_F = [math.sin, math.cos, math.sinh, math.cosh, math.tanh,
              math.exp, math.atan]


def _build(fs, coeffs):
    def fn(*xs):
        acc = coeffs[0] * xs[0]
        for c, x in zip(coeffs[1:], xs[1:]):
            acc = acc + c * x
        for i in fs:
            acc = _UNARIES[i](0.5 * acc) + 0.1 * acc * acc
        return acc
    return fn


def _build_float(fs, coeffs):
    def fn(x):
        acc = float(np.dot(coeffs, x))
        for i in fs:
            acc = _UNARIES_F[i](0.5 * acc) + 0.1 * acc * acc
        return acc
    return fn


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(0, len(_UNARIES) - 1), min_size=1, max_size=3),
       st.lists(st.floats(-1.0, 1.0), min_size=2, max_size=4),
       st.integers(0, 10 ** 6))
def test_random_compositions_match_finite_differences(fs, coeffs, seed):
    rng = np.random.default_rng(seed)
    point = rng.uniform(-1.0, 1.0, len(coeffs))
    v, g, h = hyperdual_eval(_build(fs, coeffs), point)
    ffn = _build_float(fs, np.array(coeffs))
    gfd = fd_gradient(ffn, point)
    hfd = fd_hessian(ffn, point)
    scale = max(1.0, np.max(np.abs(gfd)), np.max(np.abs(hfd)))
    assert np.max(np.abs(g - gfd)) < 1e-6 * scale
    assert np.max(np.abs(h - hfd)) < 1e-6 * scale


def test_rank_identity_and_zero():
    assert rank_with_tolerance(np.eye(5), 1e-8) == 5
    assert rank_with_tolerance(np.zeros((4, 6)), 1e-8) == 0
    assert rank_with_tolerance(np.zeros((0, 3)), 1e-8) == 0


def test_rank_outer_product_sum():
    rng = np.random.default_rng(0)
    m = (np.outer(rng.normal(size=10), rng.normal(size=15))
         + np.outer(rng.normal(size=10), rng.normal(size=15)))
    assert rank_with_tolerance(m, 1e-8) == 2


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(1, 5))
def test_rank_invariant_under_orthogonal_mixing(seed, r):
    rng = np.random.default_rng(seed)
    m = sum(np.outer(rng.normal(size=8), rng.normal(size=9)) for _ in range(r))
    q1, _ = np.linalg.qr(rng.normal(size=(8, 8)))
    q2, _ = np.linalg.qr(rng.normal(size=(9, 9)))
    base = rank_with_tolerance(m, 1e-10)
    assert rank_with_tolerance(q1 @ m @ q2, 1e-10) == base
    perm = rng.permutation(8)
    assert rank_with_tolerance(m[perm], 1e-10) == base


def test_tensor4_riemann_check():
    rng = np.random.default_rng(1)
    h = rng.normal(size=(4, 4))
    h = h + h.T
    from nullcone.curvature import kulkarni_nomizu
    t = kulkarni_nomizu(h, h)
    assert t.check_riemann(1e-12)
    bad = Tensor4(rng.normal(size=(4, 4, 4, 4)), "riemann")
    assert not bad.check_riemann(1e-12)
