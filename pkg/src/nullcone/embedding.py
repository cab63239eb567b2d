"""Embeddings of conformally flat spacetimes into the null cone of R^(n+2).

The ambient space carries the flat metric eta = diag(+, -, ..., -, +) with
index order (0, 1..n-1, n, n+1).  A spacetime is the intersection of the
null cone c(y) = y.y/2 = 0 with the unit level set of a homogeneous
degree-1 defining function f; the FLRW families are produced by explicit
chart maps (t, chi, angles) -> y together with their defining functions.
H is fixed to 1 throughout, so curvatures are reported in units of H^2.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from . import numeric
from .errors import (BranchDomainError, ChartDegeneracyError, DomainError,
                     ScaleFactorError)
from .numeric import HyperDual, hyperdual_eval
from .scalefactor import ScaleExpr, eval_scale

__all__ = [
    "DEFAULT_N", "eta_diag", "eta_matrix", "eta_dot", "cone_c",
    "ChartPoint", "embed_point", "embedding_jacobian", "embedding_second_derivatives",
    "DefiningFunction", "FData", "defining_function_value",
    "induced_metric", "closed_flrw_metric", "rescale_between_sections",
    "conformal_action", "plane_rotation", "random_group_element",
    "ChartMap", "chart_preset", "CHART_PRESETS",
    "mink_base_conformal_factor", "flrw_to_cartesian", "sample_chart_points",
    "section_orientation",
]

DEFAULT_N = 4


def eta_diag(n: int = DEFAULT_N) -> np.ndarray:
    """Signature (+, -, ..., -, +) as a diagonal vector of length n+2."""
    d = -np.ones(n + 2)
    d[0] = 1.0
    d[n + 1] = 1.0
    return d


def eta_matrix(n: int = DEFAULT_N) -> np.ndarray:
    return np.diag(eta_diag(n))


def eta_dot(u, v) -> float:
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    n = u.shape[0] - 2
    return float(np.sum(eta_diag(n) * u * v))


def cone_c(y) -> float:
    """c(y) = y.y / 2; the null cone is its zero set."""
    return 0.5 * eta_dot(y, y)


@dataclass(frozen=True)
class ChartPoint:
    """Intrinsic FLRW coordinates (k, t, chi, sphere angles).

    chi is reduced mod 2*pi for k = +1; the nested spherical angles produce
    a unit vector omega in R^(n-1).  The chart is degenerate on chi = 0 and
    on the sphere axes; callers sample away from those sets.
    """

    k: int
    t: float
    chi: float
    angles: tuple = (1.0471975511965976, 0.7853981633974483)  # (pi/3, pi/4)

    def __post_init__(self):
        if self.k not in (-1, 0, 1):
            raise ValueError(f"k must be -1, 0 or +1, got {self.k}")
        if self.k == 1:
            object.__setattr__(self, "chi", float(self.chi) % (2.0 * math.pi))

    @property
    def n(self) -> int:
        return len(self.angles) + 2

    @property
    def coords(self) -> np.ndarray:
        return np.array([self.t, self.chi, *self.angles], dtype=float)

    @property
    def omega(self) -> np.ndarray:
        return np.array(_omega_components(list(self.angles)), dtype=float)


def _omega_components(angles: Sequence) -> list:
    """Nested spherical unit vector in R^(len(angles)+1), generic scalars."""
    comps = []
    prefix = 1.0
    for a in angles:
        comps.append(prefix * numeric.cos(a))
        prefix = prefix * numeric.sin(a)
    comps.append(prefix)
    return comps


def _scale_at(a: ScaleExpr, t):
    av = eval_scale(a, t)
    val = av.v if isinstance(av, HyperDual) else float(av)
    if not math.isfinite(val) or val <= 0.0:
        raise ScaleFactorError(f"a(t) must be positive, got {val}")
    return av


def _embed_components(k: int, a: ScaleExpr, t, chi, angles: Sequence) -> list:
    """Ambient components of the chart map, generic over the scalar type."""
    av = _scale_at(a, t)
    om = _omega_components(angles)
    if k == -1:
        return [av * numeric.cosh(chi),
                *[av * numeric.sinh(chi) * w for w in om],
                av * numeric.cosh(t),
                av * numeric.sinh(t)]
    if k == 0:
        half = 0.5 * av
        q = t * t - chi * chi
        return [av * t,
                *[av * chi * w for w in om],
                half * (1.0 + q),
                half * (1.0 - q)]
    return [av * numeric.cos(t),
            *[av * numeric.sin(chi) * w for w in om],
            av * numeric.cos(chi),
            av * numeric.sin(t)]


def embed_point(k: int, a: ScaleExpr, p: ChartPoint) -> np.ndarray:
    """Map a chart point onto the section: c(y) = 0 and f_k(y) = 1."""
    if p.k != k:
        raise ValueError(f"chart point has k={p.k}, expected {k}")
    return np.array(_embed_components(k, a, p.t, p.chi, p.angles), dtype=float)


def _chart_hyperduals(p: ChartPoint):
    n = p.n
    x = p.coords
    return [HyperDual.variable(x[i], i, n) for i in range(n)]


def embedding_jacobian(k: int, a: ScaleExpr, p: ChartPoint) -> np.ndarray:
    """(n+2) x n matrix dy/d(t, chi, angles), exact via HyperDual."""
    xs = _chart_hyperduals(p)
    comps = _embed_components(k, a, xs[0], xs[1], xs[2:])
    return np.array([c.g for c in comps])


def embedding_second_derivatives(k: int, a: ScaleExpr, p: ChartPoint):
    """(J, S) with S[alpha, mu, nu] = d^2 y^alpha / dx^mu dx^nu."""
    xs = _chart_hyperduals(p)
    comps = _embed_components(k, a, xs[0], xs[1], xs[2:])
    J = np.array([c.g for c in comps])
    S = np.array([0.5 * (c.h + c.h.T) for c in comps])
    return J, S


# -- defining functions -------------------------------------------------

@dataclass
class FData:
    """Pointwise data of a defining function: value, df, Hessian, F^2.

    ``third`` holds d^3 f when requested (exact zeros for linear tags,
    Richardson finite differences of the exact Hessian otherwise).
    """

    value: float
    grad: np.ndarray
    hess: np.ndarray
    f2: float
    third: Optional[np.ndarray] = None


class DefiningFunction:
    """Homogeneous degree-1 scalar field on R^(n+2) with exact derivatives."""

    def __init__(self, dim: int, tag: str, fn: Callable, k: Optional[int] = None,
                 scale: Optional[ScaleExpr] = None, label: str = ""):
        self.dim = dim          # ambient dimension n + 2
        self.tag = tag          # flrw | adsm | linear | composed
        self._fn = fn           # generic-scalar evaluator over n+2 coordinates
        self.k = k
        self.scale = scale
        self.label = label or tag

    # -- constructors ---------------------------------------------------
    @classmethod
    def flrw(cls, k: int, a: ScaleExpr, n: int = DEFAULT_N) -> "DefiningFunction":
        if k not in (-1, 0, 1):
            raise ValueError("k must be -1, 0 or +1")

        def fn(*ys):
            return _flrw_defining(k, a, n, ys)

        return cls(n + 2, "flrw", fn, k=k, scale=a, label=f"flrw(k={k})")

    @classmethod
    def adsm(cls, kappa: float, n: int = DEFAULT_N) -> "DefiningFunction":
        """Linear defining function of a constant-curvature space, F^2 = kappa."""
        coeffs = np.zeros(n + 2)
        if kappa > 0:
            coeffs[n + 1] = math.sqrt(kappa)
        elif kappa < 0:
            coeffs[n] = math.sqrt(-kappa)
        else:
            coeffs[n] = 1.0
            coeffs[n + 1] = 1.0
        return cls.linear(coeffs, label=f"adsm(kappa={kappa})")

    @classmethod
    def linear(cls, coeffs, label: str = "") -> "DefiningFunction":
        coeffs = np.asarray(coeffs, dtype=float)
        d = coeffs.shape[0]

        def fn(*ys):
            acc = 0.0
            for c, y in zip(coeffs, ys):
                if c != 0.0:
                    acc = acc + c * y
            return acc

        obj = cls(d, "linear", fn, label=label or "linear")
        obj.coeffs = coeffs
        return obj

    @classmethod
    def composed(cls, fn: Callable, n: int = DEFAULT_N, label: str = "composed"):
        return cls(n + 2, "composed", fn, label=label)

    # -- evaluation -----------------------------------------------------
    def value(self, y) -> float:
        return float(self._fn(*[float(c) for c in np.asarray(y, dtype=float)]))

    def eval_generic(self, ys: Sequence):
        return self._fn(*ys)

    def data(self, y, order: int = 2, fd_step: float = 1e-3) -> FData:
        y = np.asarray(y, dtype=float)
        v, g, h = hyperdual_eval(self._fn, y)
        ed = eta_diag(self.dim - 2)
        f2 = float(np.sum(ed * g * g))
        third = None
        if order >= 3:
            third = self._third(y, fd_step)
        return FData(v, g, h, f2, third)

    def _third(self, y: np.ndarray, base_step: float) -> np.ndarray:
        d = self.dim
        if self.tag == "linear":
            return np.zeros((d, d, d))

        def hess_at(z):
            return hyperdual_eval(self._fn, z)[2]

        def fd(h):
            t = np.zeros((d, d, d))
            for c in range(d):
                step = h * max(1.0, abs(y[c]))
                e = np.zeros(d)
                e[c] = step
                t[c] = (hess_at(y + e) - hess_at(y - e)) / (2.0 * step)
            return t

        coarse = fd(base_step)
        fine = fd(0.5 * base_step)
        t3 = (4.0 * fine - coarse) / 3.0
        # symmetrize: d^3 f is totally symmetric
        return (t3 + t3.transpose(1, 0, 2) + t3.transpose(1, 2, 0)
                + t3.transpose(0, 2, 1) + t3.transpose(2, 0, 1)
                + t3.transpose(2, 1, 0)) / 6.0


def _value_of(x):
    return x.v if isinstance(x, HyperDual) else float(x)


def _flrw_defining(k: int, a: ScaleExpr, n: int, ys: Sequence):
    y0, yn, yn1 = ys[0], ys[n], ys[n + 1]
    if k == 0:
        s = yn + yn1
        if _value_of(s) <= 0.0:
            raise BranchDomainError("k=0 branch requires y^n + y^(n+1) > 0")
        t = y0 / s
        return s / _scale_at(a, t)
    if k == -1:
        ynv, yn1v = _value_of(yn), _value_of(yn1)
        if ynv <= 0.0 or ynv * ynv <= yn1v * yn1v:
            raise BranchDomainError("k=-1 branch requires y^n > |y^(n+1)|")
        t = numeric.atanh(yn1 / yn)
        rho = numeric.sqrt(yn * yn - yn1 * yn1)
        return rho / _scale_at(a, t)
    y0v, yn1v = _value_of(y0), _value_of(yn1)
    if y0v == 0.0 and yn1v == 0.0:
        raise BranchDomainError("k=+1 branch undefined on y^0 = y^(n+1) = 0")
    t = numeric.atan2(yn1, y0)
    rho = numeric.sqrt(y0 * y0 + yn1 * yn1)
    return rho / _scale_at(a, t)


def defining_function_value(f: DefiningFunction, y):
    """(value, gradient, Hessian, F^2) of a defining function at y."""
    d = f.data(y)
    return d.value, d.grad, d.hess, d.f2


# -- induced geometry ---------------------------------------------------

def induced_metric(k: int, a: ScaleExpr, p: ChartPoint) -> np.ndarray:
    """Pullback J^T eta J of the ambient metric in the chart basis."""
    J = embedding_jacobian(k, a, p)
    n = p.n
    g = J.T @ (eta_diag(n)[:, None] * J)
    sv = np.linalg.svd(J, compute_uv=False)
    if sv[-1] < 1e-10 * sv[0]:
        raise ChartDegeneracyError(
            f"chart Jacobian rank-deficient at t={p.t}, chi={p.chi}")
    return g


def closed_flrw_metric(k: int, a: ScaleExpr, p: ChartPoint) -> np.ndarray:
    """FLRW metric a^2 diag(1, -1, -S_k(chi)^2 g_sphere) in the chart basis."""
    from .scalefactor import eval_a
    av, _, _ = eval_a(a, p.t)
    if k == -1:
        S = math.sinh(p.chi)
    elif k == 0:
        S = p.chi
    else:
        S = math.sin(p.chi)
    diag = [1.0, -1.0]
    sphere = 1.0
    for j, ang in enumerate(p.angles):
        diag.append(-S * S * sphere)
        sphere *= math.sin(ang) ** 2
    # the loop above appends one entry per angle; sphere factors accumulate
    # as prod sin^2(theta_j) for the later angles
    g = np.zeros((p.n, p.n))
    acc = 1.0
    g[0, 0] = 1.0
    g[1, 1] = -1.0
    for j in range(len(p.angles)):
        g[2 + j, 2 + j] = -S * S * acc
        acc *= math.sin(p.angles[j]) ** 2
    return (av * av) * g


def rescale_between_sections(y, f1: DefiningFunction, f2: DefiningFunction):
    """Project y from the f1 = 1 section onto the f2 = 1 section along its ray."""
    y = np.asarray(y, dtype=float)
    v1 = f1.value(y)
    if abs(v1 - 1.0) > 1e-10:
        raise ValueError(f"point is not on the source section: f1(y) = {v1}")
    v2 = f2.value(y)
    if abs(v2) < 1e-13 * max(1.0, float(np.max(np.abs(y)))):
        raise DomainError("target section does not meet the ray (f2 = 0)")
    if v2 < 0.0 and f2.tag == "flrw":
        raise BranchDomainError("ray leaves the branch domain of the target")
    return y * (v1 / v2)


def conformal_action(g, f: DefiningFunction, y):
    """Action y -> g.y / f(g.y) on the section, with its conformal factor."""
    g = np.asarray(g, dtype=float)
    y = np.asarray(y, dtype=float)
    n = y.shape[0] - 2
    em = eta_matrix(n)
    if np.max(np.abs(g.T @ em @ g - em)) > 1e-10:
        raise ValueError("matrix does not preserve the ambient metric")
    w = g @ y
    fw = f.value(w)  # branch errors propagate
    if fw <= 0.0:
        raise DomainError(f"orbit leaves the section domain: f(g.y) = {fw}")
    return w / fw, 1.0 / fw


def plane_rotation(n: int, a: int, b: int, s: float) -> np.ndarray:
    """exp of the o(2,n) generator in the coordinate plane (a, b).

    A rotation when eta_aa * eta_bb > 0, a boost otherwise; always
    preserves eta exactly (closed form, no matrix exponential).
    """
    if a == b:
        raise ValueError("generator plane needs two distinct indices")
    ed = eta_diag(n)
    ea, eb = ed[a], ed[b]
    m = np.eye(n + 2)
    if ea * eb > 0:
        c, sn = math.cos(s), math.sin(s)
        m[a, a] = c
        m[b, b] = c
        m[a, b] = -eb * sn
        m[b, a] = ea * sn
    else:
        ch, sh = math.cosh(s), math.sinh(s)
        m[a, a] = ch
        m[b, b] = ch
        m[a, b] = -eb * sh
        m[b, a] = ea * sh
    return m


def random_group_element(rng: np.random.Generator, n: int = DEFAULT_N,
                         planes: int = 3, scale: float = 0.4) -> np.ndarray:
    """Product of random coordinate-plane rotations/boosts in SO(2, n)."""
    g = np.eye(n + 2)
    for _ in range(planes):
        a, b = rng.choice(n + 2, size=2, replace=False)
        g = g @ plane_rotation(n, int(a), int(b), float(rng.uniform(-scale, scale)))
    return g


# -- chart presets -------------------------------------------------------

@dataclass
class ChartMap:
    """A named parametrization landing on a specific section."""

    name: str
    kind: str                       # 'flrw' (t, chi, angles) or 'cartesian' (xi)
    section: DefiningFunction
    map_fn: Callable                # generic scalars -> ambient components
    closed_metric: Callable         # chart coords -> n x n matrix
    domain: str

    def map(self, coords) -> np.ndarray:
        return np.array([_value_of(c) for c in
                         self.map_fn(*[float(c) for c in coords])], dtype=float)

    def jacobian(self, coords) -> np.ndarray:
        coords = np.asarray(coords, dtype=float)
        m = coords.shape[0]
        xs = [HyperDual.variable(coords[i], i, m) for i in range(m)]
        comps = self.map_fn(*xs)
        return np.array([c.g if isinstance(c, HyperDual) else np.zeros(m)
                         for c in comps])


def _sphere_block(g, S2, angles, offset=2):
    acc = 1.0
    for j in range(len(angles)):
        g[offset + j, offset + j] = -S2 * acc
        acc *= math.sin(angles[j]) ** 2


def _conformal_static_metric(conf2: float, spatial: str, chi: float,
                             angles: Sequence) -> np.ndarray:
    n = len(angles) + 2
    g = np.zeros((n, n))
    g[0, 0] = 1.0
    g[1, 1] = -1.0
    if spatial == "hyperbolic":
        S2 = math.sinh(chi) ** 2
    elif spatial == "flat":
        S2 = chi * chi
    else:
        S2 = math.sin(chi) ** 2
    _sphere_block(g, S2, angles)
    return conf2 * g


def _minkowski_cart_metric(xi) -> np.ndarray:
    m = len(xi)
    g = -np.eye(m)
    g[0, 0] = 1.0
    return g


def _build_chart_presets(n: int = DEFAULT_N) -> dict:
    presets = {}

    def mink_global(*xi):
        q = xi[0] * xi[0]
        for c in xi[1:]:
            q = q - c * c
        return [*xi, 0.5 * (1.0 + q), 0.5 * (1.0 - q)]

    presets["mink_global"] = ChartMap(
        "mink_global", "cartesian",
        DefiningFunction.adsm(0.0, n),
        mink_global,
        lambda xi: _minkowski_cart_metric(xi),
        "xi in R^n",
    )

    def ds_half(*xi):
        q = xi[0] * xi[0]
        for c in xi[1:]:
            q = q - c * c
        if _value_of(q) <= -1.0:
            raise DomainError("ds_half chart requires xi.xi > -1")
        return [*xi, numeric.sqrt(q + 1.0), 1.0]

    def ds_half_metric(xi):
        xi = np.asarray(xi, dtype=float)
        low = _minkowski_cart_metric(xi) @ xi
        q = float(low @ xi)
        return _minkowski_cart_metric(xi) - np.outer(low, low) / (q + 1.0)

    presets["ds_half"] = ChartMap(
        "ds_half", "cartesian", DefiningFunction.adsm(1.0, n),
        ds_half, ds_half_metric, "xi.xi > -1 (covers the y^n > 0 half)",
    )

    def ads_map(*xi):
        q = xi[0] * xi[0]
        for c in xi[1:]:
            q = q - c * c
        if _value_of(q) >= 1.0:
            raise DomainError("ads chart requires xi.xi < 1")
        return [*xi, 1.0, numeric.sqrt(1.0 - q)]

    def ads_metric(xi):
        xi = np.asarray(xi, dtype=float)
        low = _minkowski_cart_metric(xi) @ xi
        q = float(low @ xi)
        return _minkowski_cart_metric(xi) - np.outer(low, low) / (q - 1.0)

    presets["ads"] = ChartMap(
        "ads", "cartesian", DefiningFunction.adsm(-1.0, n),
        ads_map, ads_metric, "xi.xi < 1",
    )

    def ds_flrw_km1(t, chi, *angles):
        om = _omega_components(angles)
        cs = numeric.csch(t)
        return [cs * numeric.cosh(chi), *[cs * numeric.sinh(chi) * w for w in om],
                numeric.coth(t), 1.0]

    presets["ds_flrw_km1"] = ChartMap(
        "ds_flrw_km1", "flrw", DefiningFunction.adsm(1.0, n),
        ds_flrw_km1,
        lambda x: _conformal_static_metric(
            1.0 / math.sinh(x[0]) ** 2, "hyperbolic", x[1], x[2:]),
        "t > 0",
    )

    def ds_flrw_k0(t, chi, *angles):
        om = _omega_components(angles)
        if _value_of(t) == 0.0:
            raise DomainError("ds_flrw_k0 chart requires t != 0")
        ti = 1.0 / t
        return [0.5 * (-t + ti + ti * chi * chi),
                *[ti * chi * w for w in om],
                0.5 * (t + ti - ti * chi * chi), 1.0]

    presets["ds_flrw_k0"] = ChartMap(
        "ds_flrw_k0", "flrw", DefiningFunction.adsm(1.0, n),
        ds_flrw_k0,
        lambda x: _conformal_static_metric(1.0 / x[0] ** 2, "flat", x[1], x[2:]),
        "t > 0",
    )

    def ds_flrw_kp1(t, chi, *angles):
        om = _omega_components(angles)
        cs = numeric.csc(t)
        return [numeric.cot(t), *[cs * numeric.sin(chi) * w for w in om],
                cs * numeric.cos(chi), 1.0]

    presets["ds_flrw_kp1"] = ChartMap(
        "ds_flrw_kp1", "flrw", DefiningFunction.adsm(1.0, n),
        ds_flrw_kp1,
        lambda x: _conformal_static_metric(
            1.0 / math.sin(x[0]) ** 2, "spherical", x[1], x[2:]),
        "0 < t < pi",
    )

    def mink_flrw_km1(t, chi, *angles):
        om = _omega_components(angles)
        e = numeric.exp(-t)
        return [e * numeric.cosh(chi), *[e * numeric.sinh(chi) * w for w in om],
                e * numeric.cosh(t), e * numeric.sinh(t)]

    presets["mink_flrw_km1"] = ChartMap(
        "mink_flrw_km1", "flrw", DefiningFunction.adsm(0.0, n),
        mink_flrw_km1,
        lambda x: _conformal_static_metric(
            math.exp(-2.0 * x[0]), "hyperbolic", x[1], x[2:]),
        "t in R",
    )

    def ads_flrw_km1(t, chi, *angles):
        om = _omega_components(angles)
        sh = numeric.sech(t)
        return [sh * numeric.cosh(chi), *[sh * numeric.sinh(chi) * w for w in om],
                1.0, numeric.tanh(t)]

    presets["ads_flrw_km1"] = ChartMap(
        "ads_flrw_km1", "flrw", DefiningFunction.adsm(-1.0, n),
        ads_flrw_km1,
        lambda x: _conformal_static_metric(
            1.0 / math.cosh(x[0]) ** 2, "hyperbolic", x[1], x[2:]),
        "t in R",
    )

    return presets


CHART_PRESETS = _build_chart_presets()


def chart_preset(name: str) -> ChartMap:
    try:
        return CHART_PRESETS[name]
    except KeyError:
        raise KeyError(
            f"unknown chart preset {name!r}; available: {sorted(CHART_PRESETS)}"
        ) from None


# -- conformal factors on the Minkowski base -----------------------------

def mink_base_conformal_factor(k: float, a: ScaleExpr, xi,
                               exponential: bool = False) -> float:
    """Conformal factor Omega(xi) with Minkowski as base space.

    Accepts any real curvature parameter k (the k -> 0 limit is smooth);
    requires the arctan/artanh branch at xi to be valid.  With
    ``exponential=True`` (k = -1 only) the alternative form built on
    xi.xi = e^(-2t) is evaluated instead.
    """
    xi = np.asarray(xi, dtype=float)
    low = _minkowski_cart_metric(xi) @ xi
    q = float(low @ xi)
    from .scalefactor import eval_a

    if exponential:
        if q <= 0.0:
            raise BranchDomainError("exponential chart requires xi.xi > 0")
        av, _, _ = eval_a(a, 0.5 * math.log(q))
        return av / (4.0 * math.sqrt(q))

    if k == 0.0:
        av, _, _ = eval_a(a, float(xi[0]))
        return av
    den = 1.0 - 0.25 * k * q
    if den == 0.0:
        raise BranchDomainError("coordinate singularity: 1 - k xi.xi / 4 = 0")
    u = float(xi[0]) / den
    if k > 0.0:
        sk = math.sqrt(k)
        arg = math.atan(sk * u) / sk
    else:
        sk = math.sqrt(-k)
        if abs(sk * u) >= 1.0:
            raise BranchDomainError("artanh branch violated in conformal factor")
        arg = math.atanh(sk * u) / sk
    rad = den * den + k * float(xi[0]) ** 2
    if rad <= 0.0:
        raise BranchDomainError("conformal factor radicand non-positive")
    av, _, _ = eval_a(a, arg)
    return av / math.sqrt(rad)


def flrw_to_cartesian(k: int, t, chi, angles: Sequence) -> list:
    """FLRW chart -> cartesian coordinates of the conformally flat form.

    Generic over the scalar type so Jacobians can be taken; for k = +1 the
    map is valid where cos(t) + cos(chi) > 0.
    """
    om = _omega_components(angles)
    if k == 0:
        return [t, *[chi * w for w in om]]
    if k == 1:
        den = numeric.cos(t) + numeric.cos(chi)
        if _value_of(den) <= 0.0:
            raise BranchDomainError("k=+1 cartesian chart needs cos t + cos chi > 0")
        return [2.0 * numeric.sin(t) / den,
                *[2.0 * numeric.sin(chi) * w / den for w in om]]
    den = numeric.cosh(t) + numeric.cosh(chi)
    return [2.0 * numeric.sinh(t) / den,
            *[2.0 * numeric.sinh(chi) * w / den for w in om]]


# -- sampling ------------------------------------------------------------

CHI_RANGE = (0.1, 2.5)
ANGLE_MARGIN = 0.2


def sample_chart_points(rng: np.random.Generator, k: int, count: int,
                        t_domain=(0.3, 1.5), n: int = DEFAULT_N) -> list:
    """Random nondegenerate chart points, away from axes and chart edges."""
    pts = []
    chi_hi = CHI_RANGE[1] if k != 1 else min(CHI_RANGE[1], math.pi - 0.15)
    for _ in range(count):
        t = rng.uniform(*t_domain)
        chi = rng.uniform(CHI_RANGE[0], chi_hi)
        angles = [rng.uniform(ANGLE_MARGIN, math.pi - ANGLE_MARGIN)
                  for _ in range(n - 3)]
        angles.append(rng.uniform(ANGLE_MARGIN, 2.0 * math.pi - ANGLE_MARGIN))
        pts.append(ChartPoint(k, float(t), float(chi), tuple(angles)))
    return pts


def section_orientation(k: int, a: ScaleExpr, p: ChartPoint,
                        f: DefiningFunction) -> float:
    """Sign making (chart frame, e_n, e_n+1) direct in the ambient orientation.

    +1 when the chart order (t, chi, angles) induces the same orientation on
    the section as the ambient index order does through the normal pair.
    """
    y = embed_point(k, a, p)
    J = embedding_jacobian(k, a, p)
    d = f.data(y)
    ed = eta_diag(p.n)
    F = ed * d.grad
    D = y
    en = F - 0.5 * (1.0 + d.f2) * D
    en1 = F + 0.5 * (1.0 - d.f2) * D
    M = np.column_stack([J, en, en1])
    det = np.linalg.det(M)
    if det == 0.0:
        raise ChartDegeneracyError("degenerate frame when orienting the section")
    return 1.0 if det > 0.0 else -1.0
