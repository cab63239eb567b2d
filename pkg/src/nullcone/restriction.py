"""Numerical verification of pullback formulas for differential operators.

Each residual pits two independent computations against each other:

* ambient side - the operator acts in flat R^(n+2) on exact coefficient
  jets (HyperDual), and the result is pulled back through the chart
  Jacobian;
* intrinsic side - the operator acts on the pulled-back field with the
  induced metric, via 5-point central differences in the chart, plus the
  correction terms (Lie/interior/Schouten combinations) evaluated
  pointwise on the section.

The intrinsic machinery never reuses the ambient derivative path, which is
what makes the comparison a genuine cross-check.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .curvature import christoffels_from_metric
from .embedding import (ChartMap, ChartPoint, DefiningFunction, embed_point,
                        embedding_jacobian, eta_diag, sample_chart_points)
from .forms import (FormField, FormJet, SJet, VecJet, MatJet, degree_array,
                    jet_box, jet_codifferential, jet_d, jet_derivation,
                    jet_interior, jet_lie, jet_scale, jet_star, jet_star_inv,
                    jet_wedge_cov, pullback_matrix, star_inverse_matrix,
                    star_matrix, star_signature, vector_jets)
from .scalefactor import ScaleExpr

__all__ = [
    "Section", "restriction_residual", "hessian_restriction_residual",
    "conformal_scalar_residual", "pulled_field", "intrinsic_d_values",
    "intrinsic_delta_values", "intrinsic_box_values",
]


@dataclass
class Section:
    """A section of the null cone with a chart: everything residuals need."""

    f: DefiningFunction
    embed_fn: Callable        # chart coords -> ambient point (floats)
    jac_fn: Callable          # chart coords -> (n+2) x n Jacobian
    n: int
    name: str
    t_domain: tuple = (0.3, 1.2)
    k_for_sampling: int = 0

    @classmethod
    def flrw(cls, k: int, a: ScaleExpr, name: str = "",
             t_domain: tuple = (0.3, 1.2), n: int = 4) -> "Section":
        f = DefiningFunction.flrw(k, a, n)

        def emb(x):
            return embed_point(k, a, _chart_point(k, x))

        def jac(x):
            return embedding_jacobian(k, a, _chart_point(k, x))

        return cls(f, emb, jac, n, name or f"flrw(k={k})", t_domain, k)

    @classmethod
    def from_chart(cls, chart: ChartMap, name: str = "",
                   t_domain: tuple = (0.3, 1.2), n: int = 4) -> "Section":
        if chart.kind != "flrw":
            raise ValueError("only FLRW-style charts can back a Section")
        k = {"ds_flrw_km1": -1, "ds_flrw_k0": 0, "ds_flrw_kp1": 1,
             "mink_flrw_km1": -1, "ads_flrw_km1": -1}.get(chart.name, 0)
        return cls(chart.section, chart.map, chart.jacobian, n,
                   name or chart.name, t_domain, k)

    def sample(self, rng: np.random.Generator, count: int) -> list:
        pts = sample_chart_points(rng, self.k_for_sampling, count,
                                  t_domain=self.t_domain, n=self.n)
        return [p.coords for p in pts]

    def metric(self, x) -> np.ndarray:
        J = self.jac_fn(x)
        ed = eta_diag(self.n)
        return J.T @ (ed[:, None] * J)

    def orientation(self, x) -> float:
        """Sign relating chart-order orientation to the ambient-induced one."""
        y = self.embed_fn(x)
        J = self.jac_fn(x)
        ed = eta_diag(self.n)
        fd = self.f.data(y)
        F = ed * fd.grad
        en = F - 0.5 * (1.0 + fd.f2) * np.asarray(y)
        en1 = F + 0.5 * (1.0 - fd.f2) * np.asarray(y)
        det = np.linalg.det(np.column_stack([J, en, en1]))
        return 1.0 if det > 0.0 else -1.0


def _chart_point(k: int, x) -> ChartPoint:
    return ChartPoint(k, float(x[0]), float(x[1]), tuple(float(c) for c in x[2:]))


def pulled_field(section: Section, field: FormField) -> Callable:
    """Chart coords -> coefficients of the pulled-back form (floats)."""

    def fn(x):
        y = section.embed_fn(x)
        return pullback_matrix(section.jac_fn(x)) @ field.values(y)

    return fn


# -- intrinsic finite-difference operators ---------------------------------

def _stencil_vec(fn, x, i, h):
    e = np.zeros(len(x))
    e[i] = 1.0
    return (-fn(x + 2 * h * e) + 8.0 * fn(x + h * e)
            - 8.0 * fn(x - h * e) + fn(x - 2 * h * e)) / (12.0 * h)


def _steps(x, base):
    return [base * max(1.0, abs(float(c))) for c in x]


def intrinsic_d_values(field_fn: Callable, x, n: int, step: float = 1e-3):
    """Exterior derivative of a chart-form function by central differences."""
    x = np.asarray(x, dtype=float)
    hs = _steps(x, step)
    parts = [_stencil_vec(field_fn, x, i, hs[i]) for i in range(n)]
    out = np.zeros(1 << n)
    from .forms import _wedgecov_table
    SRC, DST, B, S = _wedgecov_table(n)
    grads = np.array(parts)  # grads[b][mask]
    np.add.at(out, DST, S * grads[B, SRC])
    return out


def intrinsic_delta_values(section: Section, field_fn: Callable, x,
                           step: float = 1e-3):
    """Codifferential with the induced metric, orientation-independent."""
    n = section.n
    x = np.asarray(x, dtype=float)

    def starred(xx):
        return star_matrix(section.metric(xx)) @ field_fn(xx)

    ds = intrinsic_d_values(starred, x, n, step)
    res = star_inverse_matrix(section.metric(x)) @ ds
    deg = degree_array(n)
    sign = np.where((deg + 1) % 2 == 0, 1.0, -1.0)  # (-1)^(input degree)
    return sign * res


def intrinsic_box_values(section: Section, field_fn: Callable, x,
                         step: float = 1e-3):
    """Laplace-de Rham -(d delta + delta d) on the section, nested stencils."""
    n = section.n

    def dfn(xx):
        return intrinsic_d_values(field_fn, xx, n, step)

    def deltafn(xx):
        return intrinsic_delta_values(section, field_fn, xx, step)

    a = intrinsic_d_values(deltafn, x, n, step)
    b = intrinsic_delta_values(section, dfn, x, step)
    return -(a + b)


def _fd_scalar_hessian(fn: Callable, x, step: float = 1e-3):
    x = np.asarray(x, dtype=float)
    n = len(x)
    hs = _steps(x, step)
    H = np.zeros((n, n))
    f0 = fn(x)
    for i in range(n):
        e = np.zeros(n)
        e[i] = 1.0
        h = hs[i]
        H[i, i] = (-fn(x + 2 * h * e) + 16 * fn(x + h * e) - 30 * f0
                   + 16 * fn(x - h * e) - fn(x - 2 * h * e)) / (12 * h * h)
    for i in range(n):
        for j in range(i + 1, n):
            def gi(xx, i=i, h=hs[i]):
                e = np.zeros(n)
                e[i] = 1.0
                return (-fn(xx + 2 * h * e) + 8 * fn(xx + h * e)
                        - 8 * fn(xx - h * e) + fn(xx - 2 * h * e)) / (12 * h)
            e = np.zeros(n)
            e[j] = 1.0
            h = hs[j]
            H[i, j] = H[j, i] = (-gi(x + 2 * h * e) + 8 * gi(x + h * e)
                                 - 8 * gi(x - h * e) + gi(x - 2 * h * e)) / (12 * h)
    return H


def _fd_scalar_grad(fn: Callable, x, step: float = 1e-3):
    x = np.asarray(x, dtype=float)
    hs = _steps(x, step)
    return np.array([
        (-fn(x + 2 * hs[i] * _e(len(x), i)) + 8 * fn(x + hs[i] * _e(len(x), i))
         - 8 * fn(x - hs[i] * _e(len(x), i)) + fn(x - 2 * hs[i] * _e(len(x), i)))
        / (12 * hs[i])
        for i in range(len(x))
    ])


def _e(n, i):
    e = np.zeros(n)
    e[i] = 1.0
    return e


# -- correction-term machinery ----------------------------------------------

class _SectionData:
    """Pointwise operator ingredients at a section point."""

    def __init__(self, section: Section, x, order: int = 3):
        self.x = np.asarray(x, dtype=float)
        self.y = np.asarray(section.embed_fn(x), dtype=float)
        self.J = section.jac_fn(x)
        self.n = section.n
        self.ed = eta_diag(self.n)
        self.sig = tuple(self.ed)
        self.fd = section.f.data(self.y, order=order)
        self.P = pullback_matrix(self.J)
        self.metric = self.J.T @ (self.ed[:, None] * self.J)
        D, F, df, dc = vector_jets(self.y, self.fd, self.ed)
        self.D, self.F, self.df, self.dc = D, F, df, dc
        self.f2 = self.fd.f2
        hess = self.fd.hess
        self.boxf = float(np.sum(self.ed * np.diag(hess)))
        third = self.fd.third
        boxf_g = None if third is None else np.einsum(
            "aac->c", third * self.ed[:, None, None])
        self.boxf_jet = SJet(self.boxf, boxf_g)
        # Schouten derivation coefficients: -2 d^a d^b f (inverse-metric Lie)
        self.C = MatJet(-2.0 * hess * self.ed[None, :],
                        None if third is None else -2.0 * third * self.ed[None, :, None])
        graised = self.ed * self.fd.grad
        dF2 = 2.0 * hess @ graised
        dF2_g = None if third is None else 2.0 * (
            np.einsum("cda,a->cd", third, graised)
            + hess @ (self.ed[:, None] * hess))
        self.dF2 = VecJet(dF2, dF2_g)

    # operator helpers (names follow the ambient calculus)
    def lie_D(self, j: FormJet) -> FormJet:
        return jet_lie(self.D, j)

    def lie_F(self, j: FormJet) -> FormJet:
        return jet_lie(self.F, j)

    def i_D(self, j: FormJet) -> FormJet:
        return jet_interior(self.D, j)

    def i_F(self, j: FormJet) -> FormJet:
        return jet_interior(self.F, j)

    def schouten_plus_boxf(self, j: FormJet) -> FormJet:
        """(S^df + box f) applied to a jet, keeping available lanes."""
        return (jet_derivation(self.C, j) + self.lie_F(j)
                + jet_scale(self.boxf_jet, j))


def restriction_residual(which: str, section: Section, field: FormField,
                         x, step: float = 1e-3) -> float:
    """Normalized mismatch of a pullback formula at one chart point.

    which: 'star' | 'd' | 'delta' | 'box'.  Fields must be homogeneous in
    form degree with coefficients smooth near the section.

    The residual is ||lhs - rhs|| / max(1, term scale), where the term
    scale is the largest magnitude among the quantities balanced by the
    identity (the two sides and the individual correction terms).  The
    identities routinely cancel large intermediate terms, so this is the
    accuracy actually certified.
    """
    if field.degree is None:
        raise ValueError("restriction fields must have a single form degree")
    a_deg = field.degree
    n = section.n
    sd = _SectionData(section, x, order=3 if which == "box" else 2)
    jet = field.jet(sd.y, order=2)
    fld = pulled_field(section, field)

    pieces = []
    if which == "star":
        lhs = sd.P @ star_signature(jet.V, sd.sig)
        orient = section.orientation(x)
        inner = sd.P @ sd.i_F(sd.i_D(jet)).V
        rhs = star_matrix(sd.metric, orient) @ inner
        pieces = [rhs]
    elif which == "d":
        lhs = sd.P @ jet_d(jet).V
        rhs = intrinsic_d_values(fld, x, n, step)
        pieces = [rhs]
    elif which == "delta":
        lhs = sd.P @ jet_codifferential(jet, sd.sig).V
        c1 = n + 1 - 2 * a_deg
        iF = sd.i_F(jet)
        iD = sd.i_D(jet)
        corr1 = sd.P @ (sd.lie_D(iF).V + c1 * iF.V)
        corr2 = sd.P @ (sd.schouten_plus_boxf(iD).V
                        - sd.f2 * (sd.lie_D(iD).V + c1 * iD.V))
        intr = intrinsic_delta_values(section, fld, x, step)
        rhs = intr - corr1 - corr2
        pieces = [intr, corr1, corr2]
    elif which == "box":
        lhs = sd.P @ jet_box(jet, sd.sig)
        c_minus = n - 1 - 2 * a_deg
        c_plus = n + 1 - 2 * a_deg
        iF = sd.i_F(jet)
        iD = sd.i_D(jet)
        LDj = sd.lie_D(jet)
        termA = (sd.lie_D(sd.lie_F(jet)).V + c_minus * sd.lie_F(jet).V
                 + 2.0 * jet_d(iF).V)
        termB = (sd.schouten_plus_boxf(LDj).V
                 - sd.f2 * (sd.lie_D(LDj).V + c_minus * LDj.V)
                 - 2.0 * sd.f2 * jet_d(iD).V)
        commutator = (jet_d(sd.schouten_plus_boxf(iD)).V
                      - sd.schouten_plus_boxf(jet_d(iD)).V)
        gauge_arg = FormJet.from_values(n + 2, sd.lie_D(iD).V + c_plus * iD.V)
        termC = commutator - jet_wedge_cov(sd.dF2, gauge_arg).V
        intr = intrinsic_box_values(section, fld, x, step)
        corr = sd.P @ (termA + termB + termC)
        rhs = intr + corr
        pieces = [intr, corr]
    else:
        raise ValueError(f"unknown restriction check {which!r}")

    scale = max([1.0, float(np.max(np.abs(lhs)))]
                + [float(np.max(np.abs(p))) for p in pieces])
    return float(np.max(np.abs(lhs - rhs)) / scale)


def hessian_restriction_residual(section: Section, phi: FormField, x,
                                 step: float = 1e-3) -> float:
    """Mismatch of the Hessian pullback identity for a scalar field."""
    if phi.degree != 0:
        raise ValueError("the Hessian identity applies to scalar fields")
    sd = _SectionData(section, x, order=2)
    phi_jet = phi.jet(sd.y, order=2)
    Hphi = phi_jet.H[0]
    grad_phi = phi_jet.G[0]

    lhs = sd.J.T @ Hphi @ sd.J

    # intrinsic Hessian of the restricted scalar, with oracle Christoffels
    def pf(xx):
        return float(phi.values(section.embed_fn(xx))[0])

    Hc = _fd_scalar_hessian(pf, x, step)
    gc = _fd_scalar_grad(pf, x, step)
    gamma = christoffels_from_metric(section.metric, np.asarray(x, float), step)
    intr = Hc - np.einsum("lmn,l->mn", gamma, gc)

    Dphi = float(np.dot(sd.y, grad_phi))
    Fphi = float(np.dot(sd.ed * sd.fd.grad, grad_phi))
    Ephi = sd.fd.value * Fphi - sd.f2 * Dphi
    nf_term = Dphi * (sd.J.T @ sd.fd.hess @ sd.J)
    metric_term = Ephi * sd.metric
    rhs = intr + nf_term + metric_term
    scale = max(1.0, *(float(np.max(np.abs(m)))
                       for m in (lhs, intr, nf_term, metric_term)))
    return float(np.max(np.abs(lhs - rhs)) / scale)


def conformal_scalar_residual(section: Section, phi: FormField, x,
                              step: float = 1e-3) -> float:
    """(box_f - R_f/6) phi_f = pullback(box phi) for weight -1 scalars, n=4."""
    sd = _SectionData(section, x, order=2)
    n = sd.n
    scal = -n * (n - 1) * sd.f2 + 2.0 * (n - 1) * sd.boxf

    def pf(xx):
        y = section.embed_fn(xx)
        out = np.zeros(1 << n)
        out[0] = float(phi.values(y)[0])
        return out

    box_intr = intrinsic_box_values(section, pf, x, step)[0]
    phi_val = float(phi.values(sd.y)[0])
    lhs = box_intr - scal / 6.0 * phi_val

    phi_jet = phi.jet(sd.y, order=2)
    rhs = float(np.sum(sd.ed * np.diag(phi_jet.H[0])))
    scale = max(1.0, abs(box_intr), abs(scal * phi_val / 6.0), abs(rhs))
    return float(abs(lhs - rhs) / scale)
