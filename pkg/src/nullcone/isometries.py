"""Isometry algebras of embedded sections as a numerical null space.

An antisymmetric generator J^(ab) acts as the linear vector field
J^(ab) y_a d_b; it is a Killing field of the section exactly when J(f)
vanishes identically.  Sampling J(f) at many points turns the condition
into a rank problem: the null space of the sample matrix is the isometry
algebra, whose dimension separates generic FLRW sections (6 at n = 4)
from Einstein (7) and maximally symmetric (10) ones.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from itertools import combinations
from typing import Optional

import numpy as np

from .embedding import (ChartPoint, DefiningFunction, embed_point, eta_diag,
                        sample_chart_points)
from .numeric import nullspace_with_tolerance, rank_with_tolerance
from .scalefactor import ScaleExpr, eval_a

__all__ = [
    "ConformalGenerator", "generator_action", "isometry_algebra_dimension",
    "classify_special", "ClassificationReport", "generator_planes",
    "flow_matrix", "commutator",
]


@dataclass
class ConformalGenerator:
    """Antisymmetric coefficient matrix of a linear conformal generator."""

    coeffs: np.ndarray  # (n+2, n+2), exactly antisymmetric

    def __post_init__(self):
        self.coeffs = 0.5 * (self.coeffs - self.coeffs.T)

    @classmethod
    def from_parameters(cls, params: np.ndarray, n: int) -> "ConformalGenerator":
        d = n + 2
        J = np.zeros((d, d))
        for p, (a, b) in zip(params, combinations(range(d), 2)):
            J[a, b] = p
            J[b, a] = -p
        return cls(J)

    def parameters(self) -> np.ndarray:
        d = self.coeffs.shape[0]
        return np.array([self.coeffs[a, b] for a, b in combinations(range(d), 2)])

    def field_at(self, y: np.ndarray) -> np.ndarray:
        """Components of J^(ab) y_a d_b at y."""
        ed = eta_diag(self.coeffs.shape[0] - 2)
        return (ed * y) @ self.coeffs


def generator_planes(n: int) -> list:
    """Coordinate-plane index pairs, ordered like the parameter vector."""
    return list(combinations(range(n + 2), 2))


def flow_matrix(gen: ConformalGenerator) -> np.ndarray:
    """A with dy/ds = A y along the generator flow; A preserves eta."""
    ed = eta_diag(gen.coeffs.shape[0] - 2)
    return gen.coeffs.T * ed[None, :]


def commutator(g1: ConformalGenerator, g2: ConformalGenerator) -> ConformalGenerator:
    """Lie bracket of the generator fields, as a generator again."""
    a1, a2 = flow_matrix(g1), flow_matrix(g2)
    m = a2 @ a1 - a1 @ a2  # [v_A, v_B] = v_(BA - AB) for linear fields
    ed = eta_diag(g1.coeffs.shape[0] - 2)
    return ConformalGenerator(m.T / ed[:, None])


def generator_action(gen: ConformalGenerator, f: DefiningFunction,
                     y: np.ndarray) -> float:
    """J(f)(y) via the exact gradient of the defining function."""
    fd = f.data(y)
    ed = eta_diag(f.dim - 2)
    low = ed * np.asarray(y, dtype=float)
    return float(low @ gen.coeffs @ fd.grad)


def _sample_matrix(f: DefiningFunction, ys: list) -> np.ndarray:
    """Rows: samples; columns: parameters J^(ab), a < b."""
    ed = eta_diag(f.dim - 2)
    pairs = generator_planes(f.dim - 2)
    rows = []
    for y in ys:
        g = f.data(y).grad
        low = ed * y
        rows.append([low[a] * g[b] - low[b] * g[a] for a, b in pairs])
    return np.array(rows)


def isometry_algebra_dimension(f: DefiningFunction, ys: list,
                               tol: float = 1e-8):
    """(dimension, basis) of {J : J(f) = 0} from sampled constraints."""
    n_params = len(generator_planes(f.dim - 2))
    if len(ys) < n_params:
        raise ValueError(f"need at least {n_params} sample points")
    M = _sample_matrix(f, ys)
    s = np.linalg.svd(M, compute_uv=False)
    rank, null_rows = nullspace_with_tolerance(M, tol)
    if 0 < rank < len(s):
        gap = s[rank - 1] / max(s[rank], 1e-300)
        if gap < 10.0:
            warnings.warn(
                f"ill-conditioned rank decision: singular-value gap {gap:.2g}",
                RuntimeWarning)
    basis = [ConformalGenerator.from_parameters(row, f.dim - 2)
             for row in null_rows]
    return n_params - rank, basis


@dataclass
class ClassificationReport:
    """Outcome of matching a section against the enhanced-symmetry cases."""

    k: int
    dimension: int
    label: str            # generic | einstein | de_sitter | minkowski |
    #                       anti_de_sitter | inconclusive
    matched_ode: str = ""
    offset: Optional[float] = None
    dimensions_seen: tuple = ()


def _ode_classification(k: int, a: ScaleExpr, ts: np.ndarray):
    """Classify by the linear ODE satisfied by h = 1/a, plus Einstein check.

    h'' = h (k=-1), h'' = 0 (k=0), h'' = -h (k=+1) characterize the
    maximally symmetric cases; a' = 0 the Einstein ones.
    """
    vals = np.array([eval_a(a, float(t)) for t in ts])
    av, da, dda = vals[:, 0], vals[:, 1], vals[:, 2]
    scale = float(np.max(np.abs(av)))
    if np.max(np.abs(da)) <= 1e-9 * scale:
        if k == 0:
            return "minkowski", "da/dt = 0", None
        return "einstein", "da/dt = 0", None
    h = 1.0 / av
    dh = -da / av ** 2
    ddh = (2.0 * da ** 2 - av * dda) / av ** 3
    hscale = float(np.max(np.abs(h)))
    # enhanced symmetry iff h'' = -k h (k = +-1) or h'' = 0 (k = 0)
    resid = ddh + k * h if k != 0 else ddh
    if np.max(np.abs(resid)) > 1e-8 * max(1.0, hscale):
        return "generic", "", None
    if k == 0:
        # h linear with nonzero slope: a = 1/(c (t - t0)), a de Sitter form
        slope = float(np.mean(dh))
        t0 = float(np.mean(ts - h / slope))
        return "de_sitter", "(t - t0) da/dt + a = 0", t0
    if k == 1:
        # h = c sin(t - t0): always a de Sitter form
        t0 = _phase_fit(ts, h)
        return "de_sitter", "tan(t - t0) da/dt + a = 0", t0
    c1 = float(np.mean((h + dh) * np.exp(-ts) / 2.0))
    c2 = float(np.mean((h - dh) * np.exp(ts) / 2.0))
    hn = max(abs(c1), abs(c2))
    if min(abs(c1), abs(c2)) <= 1e-8 * hn:
        return "minkowski", "da/dt +- a = 0", None
    if c1 * c2 > 0:
        t0 = 0.5 * math.log(c2 / c1)
        return "anti_de_sitter", "da/dt + tanh(t - t0) a = 0", t0
    t0 = 0.5 * math.log(-c2 / c1)
    return "de_sitter", "da/dt + coth(t - t0) a = 0", t0


def _phase_fit(ts, h):
    # h = A sin(t - t0), recovered from a sin/cos least-squares fit
    M = np.column_stack([np.sin(ts), np.cos(ts)])
    coef, *_ = np.linalg.lstsq(M, h, rcond=None)
    return float(-math.atan2(coef[1], coef[0]))


def classify_special(k: int, a: ScaleExpr, t_domain=(0.3, 1.2),
                     seeds=range(10), samples: int = 40,
                     tol: float = 1e-8) -> ClassificationReport:
    """Dimension plus ODE matching; 'inconclusive' when the two disagree."""
    f = DefiningFunction.flrw(k, a)
    dims = []
    for seed in seeds:
        rng = np.random.default_rng(seed)
        pts = sample_chart_points(rng, k, samples, t_domain=t_domain)
        ys = [embed_point(k, a, p) for p in pts]
        dim, _ = isometry_algebra_dimension(f, ys, tol)
        dims.append(dim)
    dims = tuple(dims)
    dim = dims[0]
    ts = np.linspace(t_domain[0], t_domain[1], 25)
    label, ode, offset = _ode_classification(k, a, ts)
    expected = {"generic": 6, "einstein": 7, "minkowski": 10,
                "de_sitter": 10, "anti_de_sitter": 10}
    if len(set(dims)) != 1 or expected[label] != dim:
        return ClassificationReport(k, dim, "inconclusive",
                                    f"rank says {dim}, ODE says {label}",
                                    None, dims)
    return ClassificationReport(k, dim, label, ode, offset, dims)
