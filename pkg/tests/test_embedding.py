import math

import numpy as np
import pytest

from nullcone.embedding import (CHART_PRESETS, ChartPoint, DefiningFunction,
                                chart_preset, closed_flrw_metric, cone_c,
                                conformal_action, defining_function_value,
                                embed_point, embedding_jacobian, eta_diag,
                                eta_dot, flrw_to_cartesian, induced_metric,
                                mink_base_conformal_factor,
                                random_group_element,
                                rescale_between_sections, sample_chart_points,
                                section_orientation)
from nullcone.errors import (BranchDomainError, ChartDegeneracyError,
                             DomainError, ScaleFactorError)
from nullcone.numeric import HyperDual
from nullcone.scalefactor import PRESETS, parse_scale_factor, resolve_scale

ONE = PRESETS["einstein"].expr
MATTER = PRESETS["matter_k0"].expr


def test_embed_kp1_origin():
    p = ChartPoint(1, 0.0, 0.0, (0.4, 0.9))
    assert np.allclose(embed_point(1, ONE, p), [1, 0, 0, 0, 1, 0])


def test_embed_k0_matter_point():
    p = ChartPoint(0, 1.0, 2.0, (0.0, 0.0))  # omega = (1, 0, 0)
    y = embed_point(0, MATTER, p)
    assert np.allclose(y, [1, 2, 0, 0, -1, 2])
    assert abs(cone_c(y)) < 1e-14
    f = DefiningFunction.flrw(0, MATTER)
    assert abs(f.value(y) - 1.0) < 1e-14


def test_embed_km1_axis():
    for s in (0.0, 0.7, -1.2):
        p = ChartPoint(-1, s, 0.0, (0.4, 0.9))
        y = embed_point(-1, ONE, p)
        assert np.allclose(y, [1, 0, 0, 0, math.cosh(s), math.sinh(s)])
        f = DefiningFunction.flrw(-1, ONE)
        assert abs(f.value(y) - 1.0) < 1e-14


def test_scale_positivity_enforced():
    with pytest.raises(ScaleFactorError):
        embed_point(0, parse_scale_factor("t - 2"), ChartPoint(0, 1.0, 0.3))


def test_adsm_f2_constant():
    f = DefiningFunction.adsm(1.0)
    ch = chart_preset("ds_half")
    rng = np.random.default_rng(0)
    for _ in range(10):
        xi = rng.uniform(-0.4, 0.4, 4)
        y = ch.map(xi)
        v, grad, hess, f2 = defining_function_value(f, y)
        assert abs(f2 - 1.0) < 1e-14
        assert np.max(np.abs(hess)) < 1e-14


def test_linear_null_covector():
    f = DefiningFunction.linear([0, 0, 0, 0, 1.0, 1.0])
    y = np.array([0.2, 0.1, 0.0, 0.05, 0.8, 0.3])
    _, _, _, f2 = defining_function_value(f, y)
    assert abs(f2) < 1e-15


def test_defining_function_homogeneity():
    rng = np.random.default_rng(3)
    for k, name in [(-1, "ds_km1"), (0, "matter_k0"), (1, "ds_kp1")]:
        p = PRESETS[name]
        f = DefiningFunction.flrw(k, p.expr)
        for pt in sample_chart_points(rng, k, 5, t_domain=p.t_domain):
            y = embed_point(k, p.expr, pt)
            base = f.value(y)
            for lam in (0.5, 2.0, 7.0):
                assert abs(f.value(lam * y) - lam * base) <= 1e-10 * abs(lam * base)


def test_d_of_f_equals_f():
    # Euler relation for degree-1 homogeneity: y . grad f = f
    rng = np.random.default_rng(4)
    for k, name in [(-1, "einstein"), (0, "radiation_k0"), (1, "ds_kp1")]:
        p = PRESETS[name]
        f = DefiningFunction.flrw(k, p.expr)
        for pt in sample_chart_points(rng, k, 5, t_domain=p.t_domain):
            y = embed_point(k, p.expr, pt)
            d = f.data(y)
            assert abs(float(y @ d.grad) - d.value) < 1e-11


def test_branch_domain_errors():
    f = DefiningFunction.flrw(-1, ONE)
    with pytest.raises(BranchDomainError):
        f.value([0.0, 0, 0, 0, 0.5, 0.9])  # |y5| > y4
    f0 = DefiningFunction.flrw(0, ONE)
    with pytest.raises(BranchDomainError):
        f0.value([0.1, 0, 0, 0, -1.0, 0.5])  # y4 + y5 < 0


def test_induced_metric_matches_closed_form():
    p = ChartPoint(0, 1.0, 0.3, (1.0, 0.7))
    g = induced_metric(0, MATTER, p)
    expected = np.diag([1.0, -1.0, -0.09, -0.09 * math.sin(1.0) ** 2])
    assert np.max(np.abs(g - expected)) < 1e-10
    # a = 1: Minkowski in the spherical chart
    g1 = induced_metric(0, ONE, p)
    assert np.max(np.abs(g1 - np.diag([1, -1, -0.09, -0.09 * math.sin(1.0) ** 2]))) < 1e-12
    # k = +1 de Sitter preset
    pk = ChartPoint(1, math.pi / 3, 0.5, (1.0, 0.7))
    a_ds = PRESETS["ds_kp1"].expr
    g2 = induced_metric(1, a_ds, pk)
    assert np.max(np.abs(g2 - closed_flrw_metric(1, a_ds, pk))) < 1e-12


def test_chart_degeneracy():
    with pytest.raises(ChartDegeneracyError):
        induced_metric(0, ONE, ChartPoint(0, 1.0, 0.0, (1.0, 0.7)))


def test_metric_suite_all_presets():
    rng = np.random.default_rng(11)
    for p in PRESETS.values():
        for k in p.k_compatible:
            for pt in sample_chart_points(rng, k, 5, t_domain=p.t_domain):
                g = induced_metric(k, p.expr, pt)
                gc = closed_flrw_metric(k, p.expr, pt)
                assert np.max(np.abs(g - gc)) < 1e-9 * np.max(np.abs(gc))


def test_constraint_suite():
    rng = np.random.default_rng(12)
    for p in PRESETS.values():
        for k in p.k_compatible:
            f = DefiningFunction.flrw(k, p.expr)
            for pt in sample_chart_points(rng, k, 12, t_domain=p.t_domain):
                y = embed_point(k, p.expr, pt)
                assert abs(cone_c(y)) < 1e-12 * float(y @ y)
                assert abs(f.value(y) - 1.0) < 1e-10


def test_rescale_identity_and_error_branch():
    f1 = DefiningFunction.flrw(1, ONE)
    y = embed_point(1, ONE, ChartPoint(1, 0.0, 0.0, (0.3, 0.3)))
    assert np.allclose(rescale_between_sections(y, f1, f1), y)
    f2 = DefiningFunction.adsm(1.0)
    with pytest.raises(DomainError):
        rescale_between_sections(y, f1, f2)  # ray misses the section (y5 = 0)


def test_rescale_onto_ds():
    f1 = DefiningFunction.flrw(1, ONE)
    f2 = DefiningFunction.adsm(1.0)
    y = embed_point(1, ONE, ChartPoint(1, math.pi / 4, 0.0, (0.3, 0.3)))
    img = rescale_between_sections(y, f1, f2)
    assert abs(img[5] - 1.0) < 1e-12
    assert abs(cone_c(img)) < 1e-12
    assert abs(f2.value(img) - 1.0) < 1e-12


def test_conformal_action_identity_and_rotation():
    f = DefiningFunction.flrw(0, MATTER)
    pt = ChartPoint(0, 0.8, 0.5, (1.1, 0.6))
    y = embed_point(0, MATTER, pt)
    img, fac = conformal_action(np.eye(6), f, y)
    assert np.allclose(img, y) and fac == 1.0
    from nullcone.embedding import plane_rotation
    g = plane_rotation(4, 1, 2, 0.7)  # spatial rotation: an isometry
    img, fac = conformal_action(g, f, y)
    assert abs(fac - 1.0) < 1e-12
    assert abs(f.value(img) - 1.0) < 1e-12


def test_conformal_action_boost_on_einstein():
    # boost in the (n, n+1) plane preserves the k=-1 Einstein section
    from nullcone.embedding import plane_rotation
    f = DefiningFunction.flrw(-1, ONE)
    y = embed_point(-1, ONE, ChartPoint(-1, 0.5, 0.8, (1.0, 0.4)))
    g = plane_rotation(4, 4, 5, 0.6)
    img, fac = conformal_action(g, f, y)
    assert abs(fac - 1.0) < 1e-12


def test_conformal_action_requires_group_element():
    f = DefiningFunction.flrw(0, ONE)
    y = embed_point(0, ONE, ChartPoint(0, 0.8, 0.5, (1.1, 0.6)))
    with pytest.raises(ValueError):
        conformal_action(2.0 * np.eye(6), f, y)


def test_conformal_law_pushforward():
    # eta(g*u, g*v) = f(g.y)^-2 eta(u, v) via finite-difference pushforward
    rng = np.random.default_rng(7)
    k, p = 0, PRESETS["matter_k0"]
    a = p.expr
    f = DefiningFunction.flrw(k, a)
    eps = 1e-5
    for _ in range(20):
        g = random_group_element(rng, 4)
        pt = sample_chart_points(rng, k, 1, t_domain=(0.5, 1.2))[0]
        x0 = pt.coords

        def chart_img(x):
            y = embed_point(k, a, ChartPoint(k, x[0], x[1], tuple(x[2:])))
            w = g @ y
            return w / f.value(w)

        y0 = embed_point(k, a, pt)
        fac = 1.0 / f.value(g @ y0)
        J = embedding_jacobian(k, a, pt)
        for i, j in [(0, 1), (0, 2), (1, 3)]:
            e_i = np.eye(4)[i] * eps
            e_j = np.eye(4)[j] * eps
            u = (chart_img(x0 + e_i) - chart_img(x0 - e_i)) / (2 * eps)
            v = (chart_img(x0 + e_j) - chart_img(x0 - e_j)) / (2 * eps)
            lhs = eta_dot(u, v)
            rhs = fac ** 2 * eta_dot(J[:, i], J[:, j])
            assert abs(lhs - rhs) < 1e-6 * max(1.0, abs(rhs))


def test_chart_presets_land_on_sections():
    rng = np.random.default_rng(8)
    for name, cm in CHART_PRESETS.items():
        for _ in range(5):
            if cm.kind == "cartesian":
                coords = rng.uniform(-0.35, 0.35, 4)
            else:
                coords = np.array([rng.uniform(0.4, 1.2), rng.uniform(0.2, 1.0),
                                   rng.uniform(0.4, 2.6), rng.uniform(0.3, 5.5)])
            y = cm.map(coords)
            assert abs(cone_c(y)) < 1e-12 * max(1.0, float(y @ y)), name
            assert abs(cm.section.value(y) - 1.0) < 1e-11, name
            # pullback metric equals the closed form printed for the chart
            J = cm.jacobian(coords)
            g = J.T @ (eta_diag(4)[:, None] * J)
            gc = cm.closed_metric(coords)
            assert np.max(np.abs(g - gc)) < 1e-10 * max(1.0, np.max(np.abs(gc))), name


def test_chart_preset_examples():
    assert np.allclose(chart_preset("mink_global").map([0, 0, 0, 0]),
                       [0, 0, 0, 0, 0.5, 0.5])
    y = chart_preset("ds_flrw_kp1").map([math.pi / 2, 1e-12, 0.5, 0.5])
    assert np.allclose(y, [0, 0, 0, 0, 1.0, 1.0], atol=1e-10)
    y = chart_preset("ads_flrw_km1").map([0.0, 1e-12, 0.5, 0.5])
    assert np.allclose(y, [1.0, 0, 0, 0, 1.0, 0.0], atol=1e-10)


def test_ds_k0_preset_is_simple_embedding_with_swap():
    # same section point as the k=0 FLRW embedding with a = 1/t, with the
    # first and last coordinates exchanged
    cm = chart_preset("ds_flrw_k0")
    a = PRESETS["ds_k0"].expr
    for t, chi in [(0.5, 0.3), (1.1, 0.8)]:
        p = ChartPoint(0, t, chi, (1.0, 0.7))
        y_simple = embed_point(0, a, p)
        y_chart = cm.map([t, chi, 1.0, 0.7])
        swapped = y_chart.copy()
        swapped[0], swapped[5] = y_chart[5], y_chart[0]
        assert np.max(np.abs(swapped - y_simple)) < 1e-12


def test_mink_conformal_factor_k0():
    from nullcone.scalefactor import eval_a
    xi = np.array([0.7, 0.2, -0.1, 0.3])
    a, _, _ = eval_a(MATTER, 0.7)
    assert mink_base_conformal_factor(0, MATTER, xi) == a


def test_mink_conformal_factor_k_limit():
    xi = np.array([0.4, 0.2, 0.1, -0.1])
    base = mink_base_conformal_factor(0, MATTER, xi)
    for kk in (1e-6, -1e-6):
        val = mink_base_conformal_factor(kk, MATTER, xi)
        assert abs(val - base) < 1e-5


def test_mink_conformal_factor_exponential():
    # xi with xi.xi = e^-2 and a = 1 gives e/4
    xi = np.array([math.exp(-1.0), 0.0, 0.0, 0.0])
    val = mink_base_conformal_factor(-1, ONE, xi, exponential=True)
    assert abs(val - math.e / 4.0) < 1e-12


def test_mink_conformal_factor_pullback():
    # Omega^2 eta0 pulled back through the cartesian chart equals the FLRW
    # metric, for k = +-1
    cases = [(1, PRESETS["ds_kp1"].expr, (0.4, 1.1)),
             (-1, PRESETS["ads_km1"].expr, (0.2, 0.9)),
             (-1, parse_scale_factor("t^2 + 1"), (0.2, 0.9))]
    for k, a, dom in cases:
        for t, chi in [(dom[0] + 0.1, 0.4), (dom[1] - 0.1, 0.7)]:
            p = ChartPoint(k, t, chi, (1.0, 0.7))
            m = p.n
            xs = [HyperDual.variable(c, i, m) for i, c in enumerate(p.coords)]
            comps = flrw_to_cartesian(k, xs[0], xs[1], xs[2:])
            xi = np.array([c.v for c in comps])
            Jx = np.array([c.g for c in comps])
            eta4 = np.diag([1.0, -1.0, -1.0, -1.0])
            omega = mink_base_conformal_factor(k, a, xi)
            pullback = omega ** 2 * (Jx.T @ eta4 @ Jx)
            target = closed_flrw_metric(k, a, p)
            assert np.max(np.abs(pullback - target)) < 1e-9 * np.max(np.abs(target))


def test_orientation_signs_are_chart_dependent():
    # the chart order induces the ambient orientation up to a section sign
    am = PRESETS["matter_k0"].expr
    p0 = ChartPoint(0, 1.0, 0.4, (1.0, 0.7))
    s0 = section_orientation(0, am, p0, DefiningFunction.flrw(0, am))
    pm = ChartPoint(-1, 0.8, 0.4, (1.0, 0.7))
    sm = section_orientation(-1, ONE, pm, DefiningFunction.flrw(-1, ONE))
    assert s0 == -1.0 and sm == 1.0
