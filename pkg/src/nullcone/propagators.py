"""Two-point functions on FLRW sections at n = 4.

All kernels are evaluated as real closed-form expressions away from the
light cone y.y' = 0 (no i-epsilon prescription; singular separations are
rejected).  Components of rank-1 bitensors are given in the coordinate
basis (t, r^1, r^2, r^3) for k = +-1 and cartesian xi = (t, chi omega)
for k = 0; rank-2 bitensors use antisymmetric index pairs in the same
bases.  The scale factor enters only through pure-gauge terms: the photon
potential on any FLRW space is the one of its Einstein base plus a gauge
term, and the field strength does not see a(t) at all.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .embedding import ChartPoint, eta_diag
from .errors import DomainError, SingularSeparationError
from .numeric import HyperDual
from .scalefactor import ScaleExpr, eval_a, eval_scale

__all__ = [
    "PairSeparation", "ambient_dot", "scalar_two_point",
    "photon_potential_ambient", "photon_potential_einstein",
    "pure_gauge_term", "field_strength_two_point", "field_strength_via_dd",
    "flat_coords", "PAIR_INDEX",
]

EIGHT_PI2 = 8.0 * math.pi ** 2

# antisymmetric index pairs [mu nu] in lexicographic order
PAIR_INDEX = list(combinations(range(4), 2))


def flat_coords(p: ChartPoint) -> np.ndarray:
    """(t, r^i) with r = sinh chi, chi, sin chi for k = -1, 0, +1."""
    if p.k == -1:
        r = math.sinh(p.chi)
    elif p.k == 0:
        r = p.chi
    else:
        r = math.sin(p.chi)
    return np.array([p.t, *(r * p.omega)])


def _embed_flat(k: int, a: ScaleExpr, coords):
    """Ambient components from (t, r) coordinates, generic scalars."""
    from . import numeric
    t = coords[0]
    rv = coords[1:]
    r2 = rv[0] * rv[0] + rv[1] * rv[1] + rv[2] * rv[2]
    av = eval_scale(a, t)
    if k == 0:
        q = t * t - r2
        return [av * t, *[av * c for c in rv],
                0.5 * av * (1.0 + q), 0.5 * av * (1.0 - q)]
    if k == -1:
        return [av * numeric.sqrt(1.0 + r2), *[av * c for c in rv],
                av * numeric.cosh(t), av * numeric.sinh(t)]
    r2v = r2.v if isinstance(r2, HyperDual) else float(r2)
    if r2v >= 1.0:
        raise DomainError("k=+1 flat-spatial chart requires r^2 < 1")
    return [av * numeric.cos(t), *[av * c for c in rv],
            av * numeric.sqrt(1.0 - r2), av * numeric.sin(t)]


def _flat_jacobian(k: int, a: ScaleExpr, coords: np.ndarray) -> np.ndarray:
    xs = [HyperDual.variable(float(coords[i]), i, 4) for i in range(4)]
    comps = _embed_flat(k, a, xs)
    return np.array([c.g for c in comps])


def _embedded_dot(k: int, a: ScaleExpr, cx: np.ndarray, cxp: np.ndarray) -> float:
    y = np.array([float(v) for v in _embed_flat(k, a, cx)])
    yp = np.array([float(v) for v in _embed_flat(k, a, cxp)])
    return float(np.sum(eta_diag(4) * y * yp))


def _closed_dot(k: int, a: ScaleExpr, cx: np.ndarray, cxp: np.ndarray) -> float:
    t, r = cx[0], cx[1:]
    tp, rp = cxp[0], cxp[1:]
    av = eval_a(a, t)[0]
    avp = eval_a(a, tp)[0]
    if k == 0:
        dxi = cx - cxp
        return -0.5 * av * avp * (dxi[0] ** 2 - np.dot(dxi[1:], dxi[1:]))
    r2, rp2 = float(np.dot(r, r)), float(np.dot(rp, rp))
    if k == -1:
        return av * avp * (math.sqrt((1 + r2) * (1 + rp2)) - float(np.dot(r, rp))
                           - math.cosh(t - tp))
    return av * avp * (math.cos(t - tp) - math.sqrt((1 - r2) * (1 - rp2))
                       - float(np.dot(r, rp)))


@dataclass
class PairSeparation:
    """Two chart points with their ambient inner product y.y'."""

    x: ChartPoint
    xp: ChartPoint
    ydot: float
    singular: bool


def ambient_dot(k: int, a: ScaleExpr, x: ChartPoint, xp: ChartPoint,
                cross_check: bool = True) -> PairSeparation:
    """y.y' via the embedding, cross-asserted against the closed form."""
    if x.k != k or xp.k != k:
        raise ValueError("both points must carry the requested k")
    cx, cxp = flat_coords(x), flat_coords(xp)
    ydot = _embedded_dot(k, a, cx, cxp)
    if cross_check:
        closed = _closed_dot(k, a, cx, cxp)
        scale = max(1.0, abs(ydot))
        if abs(ydot - closed) > 1e-10 * scale:
            raise AssertionError(
                f"embedded and closed-form y.y' disagree: {ydot} vs {closed}")
    aa = eval_a(a, x.t)[0] * eval_a(a, xp.t)[0]
    return PairSeparation(x, xp, ydot, abs(ydot) < 1e-9 * abs(aa))


def _require_regular(sep: PairSeparation):
    if sep.singular:
        raise SingularSeparationError(
            f"singular separation y.y' = {sep.ydot}")


def scalar_two_point(k: int, a: ScaleExpr, x: ChartPoint, xp: ChartPoint) -> float:
    """Massless conformally coupled scalar kernel 1 / (8 pi^2 y.y')."""
    sep = ambient_dot(k, a, x, xp)
    _require_regular(sep)
    return 1.0 / (EIGHT_PI2 * sep.ydot)


def photon_potential_ambient(k: int, a: ScaleExpr, x: ChartPoint,
                             xp: ChartPoint) -> np.ndarray:
    """Photon potential kernel -(J^T eta J') / (8 pi^2 y.y'), chart basis."""
    sep = ambient_dot(k, a, x, xp)
    _require_regular(sep)
    J = _flat_jacobian(k, a, flat_coords(x))
    Jp = _flat_jacobian(k, a, flat_coords(xp))
    ed = eta_diag(4)
    return -(J.T @ (ed[:, None] * Jp)) / (EIGHT_PI2 * sep.ydot)


def photon_potential_einstein(k: int, x: ChartPoint, xp: ChartPoint) -> np.ndarray:
    """Closed-form potential on the Einstein space of type k (a = 1)."""
    from .scalefactor import PRESETS
    one = PRESETS["einstein"].expr
    sep = ambient_dot(k, one, x, xp)
    _require_regular(sep)
    ydot = sep.ydot
    cx, cxp = flat_coords(x), flat_coords(xp)
    t, r = cx[0], cx[1:]
    tp, rp = cxp[0], cxp[1:]
    M = np.zeros((4, 4))
    pref = -1.0 / (EIGHT_PI2 * ydot)
    if k == 0:
        M[0, 0] = pref
        for i in range(3):
            M[1 + i, 1 + i] = -pref
        return M
    r2, rp2 = float(np.dot(r, r)), float(np.dot(rp, rp))
    if k == -1:
        M[0, 0] = pref * math.cosh(t - tp)
        root = math.sqrt((1 + r2) * (1 + rp2))
        for i in range(3):
            M[1 + i, 1 + i] += -pref
            for j in range(3):
                M[1 + i, 1 + j] += pref * r[i] * rp[j] / root
        return M
    if r2 >= 1.0 or rp2 >= 1.0:
        raise DomainError("k=+1 closed form requires r^2 < 1 at both points")
    M[0, 0] = pref * math.cos(t - tp)
    root = math.sqrt((1 - r2) * (1 - rp2))
    for i in range(3):
        M[1 + i, 1 + i] += -pref
        for j in range(3):
            M[1 + i, 1 + j] += -pref * r[i] * rp[j] / root
    return M


def pure_gauge_term(k: int, a: ScaleExpr, x: ChartPoint,
                    xp: ChartPoint) -> np.ndarray:
    """Gauge bitensor making ambient = Einstein + gauge; drops out of F."""
    from .scalefactor import PRESETS
    one = PRESETS["einstein"].expr
    sep_e = ambient_dot(k, one, x, xp)
    _require_regular(sep_e)
    ydot_e = sep_e.ydot
    cx, cxp = flat_coords(x), flat_coords(xp)
    t, r = cx[0], cx[1:]
    tp, rp = cxp[0], cxp[1:]
    av, dav, _ = eval_a(a, t)
    avp, davp, _ = eval_a(a, tp)
    psid = dav / av
    psidp = davp / avp
    pref = -1.0 / EIGHT_PI2
    M = np.zeros((4, 4))
    M[0, 0] += pref * psid * psidp
    if k == 0:
        dxi = cx - cxp
        dxi2 = dxi[0] ** 2 - float(np.dot(dxi[1:], dxi[1:]))
        low = dxi.copy()
        low[1:] *= -1.0  # lower the spatial index with eta
        for mu in range(4):
            # (2/(dxi)^2) dxi_mu [ dxi^mu (x) dpsi' - dpsi (x) dxi'^mu ]
            M[mu, 0] += pref * (2.0 / dxi2) * low[mu] * psidp
            M[0, mu] += -pref * (2.0 / dxi2) * low[mu] * psid
        return M
    r2, rp2 = float(np.dot(r, r)), float(np.dot(rp, rp))
    if k == -1:
        s = math.sinh(t - tp)
        ratio = math.sqrt((1 + r2) / (1 + rp2))
        M[0, 0] += pref * psid * s / ydot_e
        M[0, 0] += -pref * s * psidp / ydot_e
        for i in range(3):
            M[0, 1 + i] += -pref * psid * (r[i] - rp[i] * ratio) / ydot_e
            M[1 + i, 0] += -pref * (rp[i] - r[i] / ratio) * psidp / ydot_e
        return M
    s = math.sin(t - tp)
    ratio = math.sqrt((1 - r2) / (1 - rp2))
    M[0, 0] += pref * psid * s / ydot_e
    M[0, 0] += -pref * s * psidp / ydot_e
    for i in range(3):
        M[0, 1 + i] += -pref * psid * (r[i] - rp[i] * ratio) / ydot_e
        M[1 + i, 0] += -pref * (rp[i] - r[i] / ratio) * psidp / ydot_e
    return M


# -- field strength ---------------------------------------------------------

def _pair_components(G4):
    """Reduce a [mu nu rho' sigma'] antisymmetric array to 6 x 6 pairs."""
    out = np.zeros((6, 6))
    for a, (m, n) in enumerate(PAIR_INDEX):
        for b, (r, s) in enumerate(PAIR_INDEX):
            out[a, b] = G4[m, n, r, s]
    return out


def field_strength_two_point(k: int, x: ChartPoint, xp: ChartPoint) -> np.ndarray:
    """Closed-form <F F'> components over index pairs, Einstein base of type k."""
    from .scalefactor import PRESETS
    one = PRESETS["einstein"].expr
    sep = ambient_dot(k, one, x, xp)
    _require_regular(sep)
    ydot = sep.ydot
    cx, cxp = flat_coords(x), flat_coords(xp)
    if k == 0:
        return _ff_k0(cx, cxp)
    return _ff_curved(k, ydot, cx, cxp)


def _ff_k0(cx, cxp) -> np.ndarray:
    dxi = cx - cxp
    eta4 = np.diag([1.0, -1.0, -1.0, -1.0])
    low = eta4 @ dxi
    dxi2 = float(dxi @ low)
    if dxi2 == 0.0:
        raise SingularSeparationError("null separation in flat kernel")
    # 1/(2 pi^2 (dxi)^4) dxi^mu ^ dxi^nu (x) dxi'_mu ^ dxi'_nu
    #   - 2/(pi^2 (dxi)^6) (dxi_mu)(dxi_nu) dxi^mu ^ dxi^rho (x) dxi'^nu ^ dxi'_rho
    G = np.zeros((4, 4, 4, 4))
    c1 = 1.0 / (2.0 * math.pi ** 2 * dxi2 ** 2)
    c2 = -2.0 / (math.pi ** 2 * dxi2 ** 3)
    for m in range(4):
        for n in range(4):
            for r in range(4):
                for s in range(4):
                    term1 = 2.0 * c1 * (eta4[m, r] * eta4[n, s]
                                        - eta4[m, s] * eta4[n, r])
                    term2 = c2 * (low[m] * low[r] * eta4[n, s]
                                  - low[n] * low[r] * eta4[m, s]
                                  - low[m] * low[s] * eta4[n, r]
                                  + low[n] * low[s] * eta4[m, r])
                    G[m, n, r, s] = term1 + term2
    return _pair_components(G)


def _ff_curved(k: int, ydot: float, cx, cxp) -> np.ndarray:
    """Field-strength components on the k = +-1 Einstein space.

    All blocks were pinned against the mixed-derivative oracle; components
    are evaluations on coordinate basis vectors (t, r^i).
    """
    t, r = cx[0], cx[1:]
    tp, rp = cxp[0], cxp[1:]
    r2, rp2 = float(np.dot(r, r)), float(np.dot(rp, rp))
    if k == -1:
        u, up = math.sqrt(1 + r2), math.sqrt(1 + rp2)
        ct, st = math.cosh(t - tp), math.sinh(t - tp)
    else:
        if r2 >= 1.0 or rp2 >= 1.0:
            raise DomainError("k=+1 closed form requires r^2 < 1")
        u, up = math.sqrt(1 - r2), math.sqrt(1 - rp2)
        ct, st = math.cos(t - tp), math.sin(t - tp)
    root, ratio = u * up, u / up
    dl = np.eye(3)
    # D carries the geodesic structure; G collects the dyadic corrections
    D = dl + k * np.outer(r, rp) / root
    G = (np.outer(r, rp) + np.outer(rp, r)
         - np.outer(r, r) / ratio - np.outer(rp, rp) * ratio)
    pref = 1.0 / (4.0 * math.pi ** 2)
    y2, y3 = ydot ** 2, ydot ** 3

    def f_0i0m(i, m):
        return -pref * (ct * D[i, m] / y2
                        + (st * st * D[i, m] + ct * G[i, m]) / y3)

    def f_0imn(i, m, n):
        return pref * st / y3 * (
            r[m] * D[i, n] - r[n] * D[i, m]
            - ratio * (rp[m] * dl[i, n] - rp[n] * dl[i, m]))

    def f_ijmn(i, j, m, n):
        sym_d = (D[i, m] * dl[j, n] - D[j, m] * dl[i, n]
                 - D[i, n] * dl[j, m] + D[j, n] * dl[i, m])
        dd = dl[i, m] * dl[j, n] - dl[j, m] * dl[i, n]
        quart = (rp[i] * r[j] * r[m] * rp[n] - rp[j] * r[i] * r[m] * rp[n]
                 - rp[i] * r[j] * r[n] * rp[m] + rp[j] * r[i] * r[n] * rp[m]) / root
        gsym = (G[i, m] * dl[j, n] - G[j, m] * dl[i, n]
                - G[i, n] * dl[j, m] + G[j, n] * dl[i, m])
        return pref * ((sym_d - dd) / y2 + (k * quart + gsym) / y3)

    G4 = np.zeros((4, 4, 4, 4))
    for i in range(3):
        for m in range(3):
            v = f_0i0m(i, m)
            G4[0, 1 + i, 0, 1 + m] = v
            G4[1 + i, 0, 0, 1 + m] = -v
            G4[0, 1 + i, 1 + m, 0] = -v
            G4[1 + i, 0, 1 + m, 0] = v
    for i in range(3):
        for m in range(3):
            for n in range(3):
                _set_antisym(G4, 0, 1 + i, 1 + m, 1 + n, f_0imn(i, m, n))
    # [ij, 0m]: the mixed formula with the two index sets and primes switched
    for i in range(3):
        for j in range(3):
            for m in range(3):
                v = _f_0imn_swapped(k, ydot, cxp, cx, m, i, j)
                _set_antisym(G4, 1 + i, 1 + j, 0, 1 + m, v)
    for i in range(3):
        for j in range(3):
            for m in range(3):
                for n in range(3):
                    _set_antisym(G4, 1 + i, 1 + j, 1 + m, 1 + n,
                                 f_ijmn(i, j, m, n))
    return _pair_components(G4)


def _set_antisym(G, m, n, r, s, v):
    G[m, n, r, s] = v
    G[n, m, r, s] = -v
    G[m, n, s, r] = -v
    G[n, m, s, r] = v


def _f_0imn_swapped(k, ydot, cx, cxp, i, m, n):
    """<F_0i(x) F_mn(x')> formula evaluated with arguments exchanged."""
    t, r = cx[0], cx[1:]
    tp, rp = cxp[0], cxp[1:]
    r2, rp2 = float(np.dot(r, r)), float(np.dot(rp, rp))
    if k == -1:
        u, up = math.sqrt(1 + r2), math.sqrt(1 + rp2)
        st = math.sinh(t - tp)
    else:
        u, up = math.sqrt(1 - r2), math.sqrt(1 - rp2)
        st = math.sin(t - tp)
    root, ratio = u * up, u / up
    dl = np.eye(3)
    D = dl + k * np.outer(r, rp) / root
    return (st / ydot ** 3 * (
        r[m] * D[i, n] - r[n] * D[i, m]
        - ratio * (rp[m] * dl[i, n] - rp[n] * dl[i, m]))) / (4.0 * math.pi ** 2)


# -- finite-difference oracle ------------------------------------------------

def _dd_kernel(kernel, cx: np.ndarray, cxp: np.ndarray, step: float = 1e-3,
               richardson: bool = True) -> np.ndarray:
    """Antisymmetrized mixed derivatives d_mu d'_rho' M_{nu sigma'}."""

    def mixed(h):
        # dM[mu, rho, nu, sigma] = d_mu d'_rho M[nu, sigma]
        dM = np.zeros((4, 4, 4, 4))
        for mu in range(4):
            for rho in range(4):
                acc = np.zeros((4, 4))
                for smu, wmu in ((-2, 1.0), (-1, -8.0), (1, 8.0), (2, -1.0)):
                    for srho, wrho in ((-2, 1.0), (-1, -8.0), (1, 8.0), (2, -1.0)):
                        e1 = cx.copy()
                        e1[mu] += smu * h
                        e2 = cxp.copy()
                        e2[rho] += srho * h
                        acc += wmu * wrho * kernel(e1, e2)
                dM[mu, rho] = acc / (144.0 * h * h)
        return dM

    dM = mixed(step)
    if richardson:
        dM2 = mixed(0.5 * step)
        dM = (16.0 * dM2 - dM) / 15.0
    G = np.zeros((4, 4, 4, 4))
    for m in range(4):
        for n in range(4):
            for r in range(4):
                for s in range(4):
                    G[m, n, r, s] = (dM[m, r, n, s] - dM[n, r, m, s]
                                     - dM[m, s, n, r] + dM[n, s, m, r])
    return _pair_components(G)


def field_strength_via_dd(k: int, a: ScaleExpr, x: ChartPoint, xp: ChartPoint,
                          step: float = 1e-3) -> np.ndarray:
    """<F F'> as antisymmetrized mixed derivatives of the ambient potential."""
    sep = ambient_dot(k, a, x, xp)
    if abs(sep.ydot) < 1e-3:
        raise SingularSeparationError(
            "separation too close to the light cone for stable stencils")

    cx, cxp = flat_coords(x), flat_coords(xp)
    ed = eta_diag(4)

    def kernel(c1, c2):
        J = _flat_jacobian(k, a, c1)
        Jp = _flat_jacobian(k, a, c2)
        ydot = _embedded_dot(k, a, c1, c2)
        return -(J.T @ (ed[:, None] * Jp)) / (EIGHT_PI2 * ydot)

    return _dd_kernel(kernel, cx, cxp, step)


def dd_of_kernel(kernel, x: ChartPoint, xp: ChartPoint,
                 step: float = 1e-3) -> np.ndarray:
    """dd' oracle for an arbitrary (t, r)-coordinate kernel function."""
    return _dd_kernel(kernel, flat_coords(x), flat_coords(xp), step)
