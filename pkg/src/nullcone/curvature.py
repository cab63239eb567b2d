"""Curvature of embedded sections: ambient formulas vs an intrinsic oracle.

The ambient route needs only pointwise data of the defining function
(F^2, its Hessian pulled back to the section, and its flat wave operator)
and produces Riemann/Ricci/scalar through the Kulkarni-Nomizu product.
The oracle route never touches the defining function: it runs the textbook
Levi-Civita pipeline (Christoffels from central differences of the induced
metric, Riemann from Christoffel derivatives).

Sign conventions follow the ambient construction: the scalar curvature of
a unit-Hubble de Sitter section is -n(n-1) (negative), Minkowski is 0.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .embedding import (ChartPoint, DefiningFunction, embed_point,
                        embedding_jacobian, embedding_second_derivatives,
                        eta_diag, induced_metric)
from .errors import StepSizeError
from .forms import MatJet, FormJet, jet_derivation, masks_of_degree
from .numeric import Tensor4
from .scalefactor import ScaleExpr

__all__ = [
    "CurvatureSet", "kulkarni_nomizu", "ambient_curvature",
    "intrinsic_curvature_oracle", "christoffels_fd", "christoffels_from_metric",
    "metric_function", "nf_two_routes", "WeitzenboeckShift",
    "weitzenboeck_shift", "lemma1_shift_matrix", "weyl_component",
]


@dataclass
class CurvatureSet:
    """Riemann (0,4), Ricci and scalar curvature at a chart point."""

    riemann: Tensor4
    ricci: np.ndarray
    scalar: float
    point: ChartPoint


def kulkarni_nomizu(h: np.ndarray, k: np.ndarray) -> Tensor4:
    """(h owedge k)(x,w,u,v) = h(x,u)k(w,v) + h(w,v)k(x,u) - h(w,u)k(x,v) - h(x,v)k(w,u)."""
    h = np.asarray(h, dtype=float)
    k = np.asarray(k, dtype=float)
    t = (np.einsum("xu,wv->xwuv", h, k) + np.einsum("wv,xu->xwuv", h, k)
         - np.einsum("wu,xv->xwuv", h, k) - np.einsum("xv,wu->xwuv", h, k))
    return Tensor4(t, symmetry="riemann")


def ambient_curvature(f: DefiningFunction, k: int, a: ScaleExpr,
                      p: ChartPoint) -> CurvatureSet:
    """Riemann/Ricci/scalar of the section from the defining function alone."""
    n = p.n
    y = embed_point(k, a, p)
    J = embedding_jacobian(k, a, p)
    ed = eta_diag(n)
    g = J.T @ (ed[:, None] * J)
    fd = f.data(y)
    nf = J.T @ fd.hess @ J
    boxf = float(np.sum(ed * np.diag(fd.hess)))
    rm = kulkarni_nomizu(g, fd.f2 * g - 2.0 * nf)
    rm = Tensor4(-0.5 * rm.data, symmetry="riemann")
    ric = -(n - 1) * fd.f2 * g + (n - 2) * nf + boxf * g
    scal = -n * (n - 1) * fd.f2 + 2.0 * (n - 1) * boxf
    return CurvatureSet(rm, ric, float(scal), p)


def nf_two_routes(f: DefiningFunction, k: int, a: ScaleExpr, p: ChartPoint):
    """Hessian pullback vs -<df, second derivative of the chart map>."""
    y = embed_point(k, a, p)
    J, S = embedding_second_derivatives(k, a, p)
    fd = f.data(y)
    direct = J.T @ fd.hess @ J
    via_connection = -np.einsum("a,amn->mn", fd.grad, S)
    return direct, via_connection


# -- intrinsic oracle ------------------------------------------------------

def metric_function(k: int, a: ScaleExpr, n: int = 4):
    """Chart coords -> induced metric, for finite differencing."""

    def g(x):
        pt = ChartPoint(k, float(x[0]), float(x[1]), tuple(float(c) for c in x[2:]))
        return induced_metric(k, a, pt)

    return g


def _stencil(fn, x, i, h):
    """5-point central derivative along coordinate i, O(h^4)."""
    e = np.zeros_like(x)
    e[i] = 1.0
    return (-fn(x + 2 * h * e) + 8.0 * fn(x + h * e)
            - 8.0 * fn(x - h * e) + fn(x - 2 * h * e)) / (12.0 * h)


def _grad_arrays(fn, x, base_step):
    """All coordinate derivatives of an array-valued function."""
    outs = []
    for i in range(len(x)):
        h = base_step * max(1.0, abs(float(x[i])))
        outs.append(_stencil(fn, x, i, h))
    return np.array(outs)


def christoffels_from_metric(gfun, x: np.ndarray, step: float = 2e-3) -> np.ndarray:
    """Levi-Civita symbols Gamma[rho, mu, nu] from metric central differences."""
    g = gfun(x)
    ginv = np.linalg.inv(g)
    dg = _grad_arrays(gfun, np.asarray(x, dtype=float), step)
    # dg[m][l, n] = d_m g_ln
    rhs = 0.5 * (np.einsum("mln->lmn", dg) + np.einsum("nlm->lmn", dg)
                 - np.einsum("lmn->lmn", dg))
    return np.einsum("rl,lmn->rmn", ginv, rhs)


def christoffels_fd(k: int, a: ScaleExpr, x: np.ndarray,
                    step: float = 2e-3) -> np.ndarray:
    return christoffels_from_metric(metric_function(k, a, len(x)), x, step)


def intrinsic_curvature_oracle(k: int, a: ScaleExpr, p: ChartPoint,
                               step: float = 2e-3,
                               check_steps: bool = False) -> CurvatureSet:
    """Curvature from the induced metric only (finite differences throughout)."""
    x0 = p.coords
    g = metric_function(k, a, p.n)(x0)
    ginv = np.linalg.inv(g)

    def gam(x):
        return christoffels_fd(k, a, x, step)

    G0 = gam(x0)
    dG = _grad_arrays(gam, x0, step)
    if check_steps:
        dG2 = _grad_arrays(lambda x: christoffels_fd(k, a, x, 0.5 * step), x0, 0.5 * step)
        scale = max(1.0, float(np.max(np.abs(dG))))
        if np.max(np.abs(dG - dG2)) > 1e-3 * scale:
            raise StepSizeError("Christoffel derivative levels disagree")
    # R^rho_{sigma mu nu} = d_mu G^r_{nu s} - d_nu G^r_{mu s} + G G - G G
    riem_up = (np.einsum("mrns->rsmn", dG) - np.einsum("nrms->rsmn", dG)
               + np.einsum("rml,lns->rsmn", G0, G0)
               - np.einsum("rnl,lms->rsmn", G0, G0))
    rm = np.einsum("cr,rsmn->csmn", g, riem_up)
    ric = np.einsum("cm,csmn->sn", ginv, rm)
    scal = float(np.einsum("sn,sn->", ginv, ric))
    return CurvatureSet(Tensor4(rm, symmetry="riemann"), ric, scal, p)


# -- Weitzenboeck shift ----------------------------------------------------

@dataclass
class WeitzenboeckShift:
    """Difference of the de Rham and Beltrami Laplacians on degree-a forms.

    scalar_part multiplies the identity; nf_part acts through the unique
    degree-0 derivation extending contraction with it on 1-forms.
    """

    degree: int
    scalar_part: float
    nf_part: np.ndarray  # (2a - n) * N_f, chart basis
    metric: np.ndarray

    def operator_matrix(self) -> np.ndarray:
        """Dense matrix on the chart blades of the given degree."""
        n = self.metric.shape[0]
        masks = masks_of_degree(n, self.degree)
        C = MatJet(self.nf_part @ np.linalg.inv(self.metric))
        cols = []
        for m in masks:
            V = np.zeros(1 << n)
            V[m] = 1.0
            out = jet_derivation(C, FormJet.from_values(n, V)).V
            cols.append([out[mm] for mm in masks])
        return np.array(cols).T + self.scalar_part * np.eye(len(masks))


def weitzenboeck_shift(f: DefiningFunction, k: int, a: ScaleExpr,
                       degree: int, p: ChartPoint) -> WeitzenboeckShift:
    """Coefficients of (box - Delta) on degree-a forms of the section."""
    n = p.n
    if not 0 <= degree <= n:
        raise ValueError("form degree out of range")
    y = embed_point(k, a, p)
    J = embedding_jacobian(k, a, p)
    ed = eta_diag(n)
    g = J.T @ (ed[:, None] * J)
    fd = f.data(y)
    nf = J.T @ fd.hess @ J
    boxf = float(np.sum(ed * np.diag(fd.hess)))
    scalar = degree * (n - degree) * fd.f2 - degree * boxf
    return WeitzenboeckShift(degree, scalar, (2 * degree - n) * nf, g)


def lemma1_shift_matrix(T: np.ndarray, g: np.ndarray, degree: int) -> np.ndarray:
    """Shift operator for Riemann = g owedge T: (2a-n) D_T - a Tr(T)."""
    n = g.shape[0]
    masks = masks_of_degree(n, degree)
    ginv = np.linalg.inv(g)
    C = MatJet(T @ ginv)
    trace = float(np.einsum("ab,ab->", ginv, T))
    cols = []
    for m in masks:
        V = np.zeros(1 << n)
        V[m] = 1.0
        out = jet_derivation(C, FormJet.from_values(n, V)).V
        cols.append([out[mm] for mm in masks])
    return (2 * degree - n) * np.array(cols).T - degree * trace * np.eye(len(masks))


def weyl_component(rm: np.ndarray, ric: np.ndarray, scal: float,
                   g: np.ndarray) -> np.ndarray:
    """Weyl part of a (0,4) curvature tensor (vanishes iff conformally flat)."""
    n = g.shape[0]
    ginv = np.linalg.inv(g)
    ric0 = ric - (scal / n) * g
    part1 = kulkarni_nomizu(ric0, g).data / (n - 2)
    part2 = kulkarni_nomizu(g, g).data * (scal / (2.0 * n * (n - 1)))
    return rm - part1 - part2
