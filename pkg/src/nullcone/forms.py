"""Exterior algebra on dense blade coefficients, with derivative jets.

Forms over a d-dimensional space are stored as dense coefficient vectors of
length 2^d indexed by bitmask (bit b set = covector e^b present, indices
ascending).  Pointwise operator data (wedge, interior and exterior
products, Hodge star, degree-0 derivations) are precomputed index tables,
so the same code runs on the 64-blade ambient algebra and the 16-blade
chart algebra.

A ``FormJet`` carries the coefficient 2-jet of a form field at a point
(values, gradients, Hessians); algebraic operators propagate whatever
lanes their inputs supply, and the exterior derivative shifts lanes down
by one.  Ambient derivatives are therefore exact whenever the coefficient
functions are evaluated through HyperDuals.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Callable, Optional

import numpy as np

from .numeric import HyperDual

__all__ = [
    "degree_array", "masks_of_degree", "wedge", "interior", "wedge_cov",
    "star_signature", "star_signature_inverse", "star_matrix",
    "star_inverse_matrix", "pullback_matrix", "FormJet", "VecJet", "SJet",
    "MatJet", "jet_d", "jet_interior", "jet_wedge_cov", "jet_wedge",
    "jet_lie", "jet_codifferential", "jet_box", "jet_star", "jet_star_inv",
    "jet_scale", "jet_derivation", "FormField", "random_polynomial_field",
    "scalar_form_field", "transverse_project", "schouten_apply",
    "schouten_via_star", "vector_jets", "strongly_transverse_field",
]


# -- index tables --------------------------------------------------------

def _popcount(m: int) -> int:
    return bin(m).count("1")


@lru_cache(maxsize=None)
def degree_array(d: int) -> np.ndarray:
    return np.array([_popcount(m) for m in range(1 << d)], dtype=int)


@lru_cache(maxsize=None)
def masks_of_degree(d: int, p: int) -> tuple:
    return tuple(m for m in range(1 << d) if _popcount(m) == p)


def _bits(mask: int) -> list:
    return [b for b in range(mask.bit_length()) if mask >> b & 1]


def _insert_sign(mask: int, b: int) -> int:
    """Sign of e^b wedged onto the ordered blade `mask` (b not in mask)."""
    below = _popcount(mask & ((1 << b) - 1))
    return -1 if below & 1 else 1


@lru_cache(maxsize=None)
def _wedge_table(d: int):
    I, J, K, S = [], [], [], []
    for m1 in range(1 << d):
        for m2 in range(1 << d):
            if m1 & m2:
                continue
            inv = 0
            for b in _bits(m2):
                inv += _popcount(m1 & ~((1 << (b + 1)) - 1))
            I.append(m1)
            J.append(m2)
            K.append(m1 | m2)
            S.append(-1.0 if inv & 1 else 1.0)
    return (np.array(I), np.array(J), np.array(K), np.array(S))


@lru_cache(maxsize=None)
def _interior_table(d: int):
    SRC, DST, B, S = [], [], [], []
    for m in range(1, 1 << d):
        for b in _bits(m):
            SRC.append(m)
            DST.append(m ^ (1 << b))
            B.append(b)
            S.append(float(_insert_sign(m ^ (1 << b), b)))
    return (np.array(SRC), np.array(DST), np.array(B), np.array(S))


@lru_cache(maxsize=None)
def _wedgecov_table(d: int):
    SRC, DST, B, S = [], [], [], []
    for m in range(1 << d):
        for b in range(d):
            if m >> b & 1:
                continue
            SRC.append(m)
            DST.append(m | (1 << b))
            B.append(b)
            S.append(float(_insert_sign(m, b)))
    return (np.array(SRC), np.array(DST), np.array(B), np.array(S))


@lru_cache(maxsize=None)
def _ji_table(d: int):
    """Composition j^(e^a) i_(e_b): entries (SRC, DST, A, B, SGN)."""
    SRC, DST, A, B, S = [], [], [], [], []
    for m in range(1, 1 << d):
        for b in _bits(m):
            mid = m ^ (1 << b)
            s1 = _insert_sign(mid, b)
            for a in range(d):
                if mid >> a & 1:
                    continue
                SRC.append(m)
                DST.append(mid | (1 << a))
                A.append(a)
                B.append(b)
                S.append(float(s1 * _insert_sign(mid, a)))
    return (np.array(SRC), np.array(DST), np.array(A), np.array(B), np.array(S))


def _perm_sign(mask: int, d: int) -> int:
    """Sign of sorting (mask bits, complement bits) into ascending order."""
    comp = [b for b in range(d) if not mask >> b & 1]
    inv = 0
    for s in _bits(mask):
        inv += sum(1 for c in comp if c < s)
    return -1 if inv & 1 else 1


@lru_cache(maxsize=None)
def _star_table(d: int, signature: tuple):
    """Hodge star for an orthonormal (+-1 diagonal) metric, index order
    orientation: arrays (DST, SGN) with *e^S = SGN[S] e^DST[S]."""
    full = (1 << d) - 1
    DST = np.zeros(1 << d, dtype=int)
    SGN = np.zeros(1 << d)
    for m in range(1 << d):
        metric = 1.0
        for b in _bits(m):
            metric *= signature[b]
        DST[m] = full ^ m
        SGN[m] = metric * _perm_sign(m, d)
    return DST, SGN


# -- value-level operations ----------------------------------------------

def wedge(a: np.ndarray, b: np.ndarray, d: int) -> np.ndarray:
    I, J, K, S = _wedge_table(d)
    out = np.zeros(1 << d)
    np.add.at(out, K, S * a[I] * b[J])
    return out


def interior(v: np.ndarray, a: np.ndarray, d: int) -> np.ndarray:
    """i_v a for a vector with components v^b."""
    SRC, DST, B, S = _interior_table(d)
    out = np.zeros(1 << d)
    np.add.at(out, DST, S * v[B] * a[SRC])
    return out


def wedge_cov(lam: np.ndarray, a: np.ndarray, d: int) -> np.ndarray:
    """lam ^ a for a covector with components lam_b."""
    SRC, DST, B, S = _wedgecov_table(d)
    out = np.zeros(1 << d)
    np.add.at(out, DST, S * lam[B] * a[SRC])
    return out


def star_signature(a: np.ndarray, signature: tuple) -> np.ndarray:
    d = len(signature)
    DST, SGN = _star_table(d, tuple(signature))
    out = np.zeros(1 << d)
    out[DST] = SGN * a
    return out


def _double_star_factor(signature: tuple, deg: np.ndarray) -> np.ndarray:
    d = len(signature)
    sgn = 1.0
    for s in signature:
        sgn *= s
    return sgn * np.where((deg * (d - deg)) % 2 == 0, 1.0, -1.0)


def star_signature_inverse(a: np.ndarray, signature: tuple) -> np.ndarray:
    d = len(signature)
    deg = degree_array(d)
    return star_signature(a / _double_star_factor(tuple(signature), deg), signature)


def _det_small(M: np.ndarray) -> float:
    """Determinant of a <= 4x4 matrix without LAPACK overhead."""
    p = M.shape[0]
    if p == 0:
        return 1.0
    if p == 1:
        return float(M[0, 0])
    if p == 2:
        return float(M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0])
    if p == 3:
        return float(M[0, 0] * (M[1, 1] * M[2, 2] - M[1, 2] * M[2, 1])
                     - M[0, 1] * (M[1, 0] * M[2, 2] - M[1, 2] * M[2, 0])
                     + M[0, 2] * (M[1, 0] * M[2, 1] - M[1, 1] * M[2, 0]))
    acc = 0.0
    for j in range(p):
        cols = [c for c in range(p) if c != j]
        minor = M[1:][:, cols]
        term = float(M[0, j]) * _det_small(minor)
        acc += -term if j & 1 else term
    return acc


@lru_cache(maxsize=None)
def _minor_index(d: int, p: int):
    """Index arrays picking all p x p minors over masks of degree p."""
    masks = masks_of_degree(d, p)
    idx = np.array([_bits(m) for m in masks], dtype=int).reshape(len(masks), p)
    return np.array(masks, dtype=int), idx


def _batched_minors(M: np.ndarray, rows_idx: np.ndarray,
                    cols_idx: np.ndarray) -> np.ndarray:
    """dets[i, j] = det(M[rows_idx[i], cols_idx[j]]), batched."""
    p = rows_idx.shape[1]
    if p == 0:
        return np.ones((rows_idx.shape[0], cols_idx.shape[0]))
    sub = M[rows_idx[:, None, :, None], cols_idx[None, :, None, :]]
    if p == 1:
        return sub[:, :, 0, 0]
    if p == 2:
        return (sub[:, :, 0, 0] * sub[:, :, 1, 1]
                - sub[:, :, 0, 1] * sub[:, :, 1, 0])
    return np.linalg.det(sub)


@lru_cache(maxsize=None)
def _star_perm_signs(d: int, p: int):
    masks, _ = _minor_index(d, p)
    return np.array([_perm_sign(int(m), d) for m in masks], dtype=float)


def star_matrix(g: np.ndarray, orientation: float = 1.0) -> np.ndarray:
    """Hodge star of a general metric as a dense matrix on blade coefficients.

    Orientation is the sign of the volume form relative to the coordinate
    order; columns are input blades.
    """
    n = g.shape[0]
    ginv = np.linalg.inv(g)
    vol = math.sqrt(abs(np.linalg.det(g))) * orientation
    M = np.zeros((1 << n, 1 << n))
    full = (1 << n) - 1
    for p in range(n + 1):
        masks, idx = _minor_index(n, p)
        gram = _batched_minors(ginv, idx, idx)  # gram[row_mask, col_mask]
        signs = _star_perm_signs(n, p)
        M[np.ix_(full ^ masks, masks)] = (signs[:, None] * vol) * gram
    return M


def star_inverse_matrix(g: np.ndarray, orientation: float = 1.0) -> np.ndarray:
    n = g.shape[0]
    M = star_matrix(g, orientation)
    sgn_det = 1.0 if np.linalg.det(g) > 0 else -1.0
    deg = degree_array(n)
    s = sgn_det * np.where((deg * (n - deg)) % 2 == 0, 1.0, -1.0)
    return M / s[None, :]


def pullback_matrix(J: np.ndarray) -> np.ndarray:
    """Pullback of ambient blades through a (d_amb x n_chart) Jacobian.

    Returns P with (pullback a)[T] = sum_S P[T, S] a[S]; entries are minors
    det(J[S rows, T cols]).
    """
    da, nc = J.shape
    P = np.zeros((1 << nc, 1 << da))
    for p in range(min(da, nc) + 1):
        smasks, sidx = _minor_index(da, p)
        tmasks, tidx = _minor_index(nc, p)
        dets = _batched_minors(J, sidx, tidx)  # (nS, nT)
        P[np.ix_(tmasks, smasks)] = dets.T
    return P


# -- jets -----------------------------------------------------------------

@dataclass
class SJet:
    """Scalar 2-jet: value, gradient, optional Hessian."""
    v: float
    g: Optional[np.ndarray] = None
    h: Optional[np.ndarray] = None


@dataclass
class VecJet:
    """Vector (or covector) jet: v[a], g[a, c] = d_c v^a, h[a, c1, c2]."""
    v: np.ndarray
    g: Optional[np.ndarray] = None
    h: Optional[np.ndarray] = None


@dataclass
class MatJet:
    """Matrix-coefficient jet for degree-0 derivations: g[a, b, c] = d_c C[a, b]."""
    v: np.ndarray
    g: Optional[np.ndarray] = None


@dataclass
class FormJet:
    """Coefficient 2-jet of a form field at a point."""
    d: int
    V: np.ndarray
    G: Optional[np.ndarray] = None
    H: Optional[np.ndarray] = None

    @classmethod
    def zero(cls, d: int, lanes: int = 2) -> "FormJet":
        B = 1 << d
        return cls(d, np.zeros(B),
                   np.zeros((B, d)) if lanes >= 1 else None,
                   np.zeros((B, d, d)) if lanes >= 2 else None)

    @classmethod
    def from_values(cls, d: int, values: np.ndarray) -> "FormJet":
        return cls(d, np.asarray(values, dtype=float))

    def lanes(self) -> int:
        if self.H is not None:
            return 2
        if self.G is not None:
            return 1
        return 0

    def __add__(self, other: "FormJet") -> "FormJet":
        lanes = min(self.lanes(), other.lanes())
        return FormJet(self.d, self.V + other.V,
                       self.G + other.G if lanes >= 1 else None,
                       self.H + other.H if lanes >= 2 else None)

    def __sub__(self, other: "FormJet") -> "FormJet":
        lanes = min(self.lanes(), other.lanes())
        return FormJet(self.d, self.V - other.V,
                       self.G - other.G if lanes >= 1 else None,
                       self.H - other.H if lanes >= 2 else None)

    def __neg__(self) -> "FormJet":
        return FormJet(self.d, -self.V,
                       None if self.G is None else -self.G,
                       None if self.H is None else -self.H)


def jet_scale(s, j: FormJet) -> FormJet:
    """Multiply a form jet by a float or a scalar jet (product rule)."""
    if not isinstance(s, SJet):
        c = float(s)
        return FormJet(j.d, c * j.V,
                       None if j.G is None else c * j.G,
                       None if j.H is None else c * j.H)
    V = s.v * j.V
    G = None
    H = None
    if j.G is not None and s.g is not None:
        G = s.v * j.G + j.V[:, None] * s.g[None, :]
        if j.H is not None and s.h is not None:
            H = (s.v * j.H
                 + j.G[:, :, None] * s.g[None, None, :]
                 + j.G[:, None, :] * s.g[None, :, None]
                 + j.V[:, None, None] * s.h[None, :, :])
    return FormJet(j.d, V, G, H)


def jet_d(j: FormJet) -> FormJet:
    """Exterior derivative; consumes one derivative lane."""
    if j.G is None:
        raise ValueError("exterior derivative needs at least a 1-jet")
    d = j.d
    SRC, DST, B, S = _wedgecov_table(d)
    V = np.zeros(1 << d)
    np.add.at(V, DST, S * j.G[SRC, B])
    G = None
    if j.H is not None:
        G = np.zeros((1 << d, d))
        np.add.at(G, DST, S[:, None] * j.H[SRC, B, :])
    return FormJet(d, V, G, None)


def _table_product(table, coeff_v, coeff_g, coeff_h, j: FormJet) -> FormJet:
    """Shared body of interior/wedge-by-covector: out[DST] += S*coef[B]*in[SRC]."""
    SRC, DST, B, S = table
    d = j.d
    V = np.zeros(1 << d)
    np.add.at(V, DST, S * coeff_v[B] * j.V[SRC])
    G = H = None
    if j.G is not None and coeff_g is not None:
        G = np.zeros((1 << d, d))
        np.add.at(G, DST, (S * coeff_v[B])[:, None] * j.G[SRC]
                  + S[:, None] * coeff_g[B] * j.V[SRC][:, None])
        if j.H is not None and coeff_h is not None:
            H = np.zeros((1 << d, d, d))
            term = ((S * coeff_v[B])[:, None, None] * j.H[SRC]
                    + S[:, None, None] * (coeff_g[B][:, :, None]
                                          * j.G[SRC][:, None, :])
                    + S[:, None, None] * (coeff_g[B][:, None, :]
                                          * j.G[SRC][:, :, None])
                    + S[:, None, None] * coeff_h[B] * j.V[SRC][:, None, None])
            np.add.at(H, DST, term)
    return FormJet(d, V, G, H)


def jet_interior(vec: VecJet, j: FormJet) -> FormJet:
    return _table_product(_interior_table(j.d), vec.v, vec.g, vec.h, j)


def jet_wedge_cov(cov: VecJet, j: FormJet) -> FormJet:
    return _table_product(_wedgecov_table(j.d), cov.v, cov.g, cov.h, j)


def jet_wedge(j1: FormJet, j2: FormJet) -> FormJet:
    d = j1.d
    I, J, K, S = _wedge_table(d)
    V = np.zeros(1 << d)
    np.add.at(V, K, S * j1.V[I] * j2.V[J])
    G = H = None
    if j1.G is not None and j2.G is not None:
        G = np.zeros((1 << d, d))
        np.add.at(G, K, S[:, None] * (j1.V[I][:, None] * j2.G[J]
                                      + j1.G[I] * j2.V[J][:, None]))
        if j1.H is not None and j2.H is not None:
            H = np.zeros((1 << d, d, d))
            term = S[:, None, None] * (
                j1.V[I][:, None, None] * j2.H[J]
                + j1.H[I] * j2.V[J][:, None, None]
                + j1.G[I][:, :, None] * j2.G[J][:, None, :]
                + j1.G[I][:, None, :] * j2.G[J][:, :, None])
            np.add.at(H, K, term)
    return FormJet(d, V, G, H)


def jet_lie(vec: VecJet, j: FormJet) -> FormJet:
    """Cartan formula L_v = i_v d + d i_v."""
    return jet_interior(vec, jet_d(j)) + jet_d(jet_interior(vec, j))


def jet_star(j: FormJet, signature: tuple) -> FormJet:
    DST, SGN = _star_table(len(signature), tuple(signature))
    V = np.zeros_like(j.V)
    V[DST] = SGN * j.V
    G = H = None
    if j.G is not None:
        G = np.zeros_like(j.G)
        G[DST] = SGN[:, None] * j.G
        if j.H is not None:
            H = np.zeros_like(j.H)
            H[DST] = SGN[:, None, None] * j.H
    return FormJet(j.d, V, G, H)


def jet_star_inv(j: FormJet, signature: tuple) -> FormJet:
    deg = degree_array(j.d)
    fac = _double_star_factor(tuple(signature), deg)
    scaled = FormJet(j.d, j.V / fac,
                     None if j.G is None else j.G / fac[:, None],
                     None if j.H is None else j.H / fac[:, None, None])
    return jet_star(scaled, signature)


def jet_codifferential(j: FormJet, signature: tuple) -> FormJet:
    """delta = (-1)^a *^-1 d * per homogeneous degree; consumes one lane."""
    d = j.d
    deg = degree_array(d)
    out = None
    for p in range(d + 1):
        sel = (deg == p)
        part = FormJet(d, np.where(sel, j.V, 0.0),
                       None if j.G is None else j.G * sel[:, None],
                       None if j.H is None else j.H * sel[:, None, None])
        res = jet_star_inv(jet_d(jet_star(part, signature)), signature)
        res = jet_scale(-1.0 if p & 1 else 1.0, res)
        out = res if out is None else out + res
    return out


def jet_box(j: FormJet, signature: tuple) -> np.ndarray:
    """Laplace-de Rham values -(d delta + delta d) at the point."""
    if j.H is None:
        raise ValueError("box needs a 2-jet")
    a = jet_d(jet_codifferential(j, signature)).V
    b = jet_codifferential(jet_d(j), signature).V
    return -(a + b)


def jet_derivation(C: MatJet, j: FormJet) -> FormJet:
    """Degree-0 derivation sum C[a,b] j^(e^a) i_(e_b) applied to a jet."""
    SRC, DST, A, B, S = _ji_table(j.d)
    d = j.d
    V = np.zeros(1 << d)
    np.add.at(V, DST, S * C.v[A, B] * j.V[SRC])
    G = None
    if j.G is not None and C.g is not None:
        G = np.zeros((1 << d, d))
        np.add.at(G, DST, (S * C.v[A, B])[:, None] * j.G[SRC]
                  + S[:, None] * C.g[A, B] * j.V[SRC][:, None])
    return FormJet(d, V, G, None)


# -- form fields ----------------------------------------------------------

class FormField:
    """Ambient form field: one generic-scalar coefficient function per blade."""

    def __init__(self, dim: int, coeffs: dict, degree: Optional[int] = None):
        self.dim = dim
        self.coeffs = dict(coeffs)
        degs = {_popcount(m) for m in self.coeffs}
        self.degree = degree if degree is not None else (degs.pop() if len(degs) == 1 else None)

    def values(self, y) -> np.ndarray:
        y = [float(c) for c in y]
        out = np.zeros(1 << self.dim)
        for m, fn in self.coeffs.items():
            out[m] = float(fn(*y))
        return out

    def jet(self, y, order: int = 2) -> FormJet:
        y = np.asarray(y, dtype=float)
        d = self.dim
        xs = [HyperDual.variable(y[i], i, d) for i in range(d)]
        B = 1 << d
        V = np.zeros(B)
        G = np.zeros((B, d)) if order >= 1 else None
        H = np.zeros((B, d, d)) if order >= 2 else None
        for m, fn in self.coeffs.items():
            r = fn(*xs)
            if isinstance(r, HyperDual):
                V[m] = r.v
                if G is not None:
                    G[m] = r.g
                if H is not None:
                    H[m] = 0.5 * (r.h + r.h.T)
            else:
                V[m] = float(r)
        return FormJet(d, V, G, H)


def scalar_form_field(dim: int, fn: Callable) -> FormField:
    return FormField(dim, {0: fn}, degree=0)


def _monomial(c: float, exps: tuple):
    def fn(*ys):
        acc = c
        for e, y in zip(exps, ys):
            for _ in range(e):
                acc = acc * y
        return acc
    return fn


def _poly(terms: list):
    monos = [_monomial(c, e) for c, e in terms]

    def fn(*ys):
        acc = monos[0](*ys)
        for m in monos[1:]:
            acc = acc + m(*ys)
        return acc
    return fn


def random_polynomial_field(rng: np.random.Generator, dim: int, degree: int,
                            poly_degree: int = 2, terms: int = 2) -> FormField:
    """Random form field of the given degree with polynomial coefficients."""
    coeffs = {}
    for m in masks_of_degree(dim, degree):
        tl = []
        for _ in range(terms):
            c = float(rng.uniform(-1.0, 1.0))
            total = int(rng.integers(0, poly_degree + 1))
            exps = [0] * dim
            for _ in range(total):
                exps[int(rng.integers(0, dim))] += 1
            tl.append((c, tuple(exps)))
        coeffs[m] = _poly(tl)
    return FormField(dim, coeffs, degree=degree)


def _det_generic(M: list):
    """Determinant of a small matrix of generic scalars (Laplace, p <= 3)."""
    p = len(M)
    if p == 1:
        return M[0][0]
    if p == 2:
        return M[0][0] * M[1][1] - M[0][1] * M[1][0]
    acc = None
    for j in range(p):
        minor = [[M[r][c] for c in range(p) if c != j] for r in range(1, p)]
        term = M[0][j] * _det_generic(minor)
        if j % 2 == 1:
            term = -term
        acc = term if acc is None else acc + term
    return acc


def strongly_transverse_field(f, degree: int) -> FormField:
    """Wedge of differentials d(y^b / y^c) avoiding the support of F.

    Valid for linear defining functions only: the resulting field satisfies
    i_D = i_F = 0, and is annihilated by L_D and L_F (homogeneity zero).
    """
    if f.tag != "linear":
        raise ValueError("strongly transverse construction needs a linear f")
    d = f.dim
    support = {a for a in range(d) if f.coeffs[a] != 0.0}
    free = [a for a in range(d) if a not in support]
    if len(free) < degree + 1:
        raise ValueError("not enough directions orthogonal to F")
    base = free[0]
    nums = free[1:degree + 1]

    def grad_entry(i, a, ys):
        # d(y^nums[i] / y^base) component a
        if a == nums[i]:
            return 1.0 / ys[base]
        if a == base:
            return -ys[nums[i]] / (ys[base] * ys[base])
        return None

    coeffs = {}
    for mask in masks_of_degree(d, degree):
        idx = _bits(mask)
        if not set(idx) <= set([base] + nums):
            continue

        def make(idx=tuple(idx)):
            def fn(*ys):
                M = []
                for i in range(degree):
                    row = []
                    for a in idx:
                        e = grad_entry(i, a, ys)
                        row.append(0.0 if e is None else e)
                    M.append(row)
                return _det_generic(M)
            return fn

        coeffs[mask] = make()
    return FormField(d, coeffs, degree=degree)


# -- projectors and the Schouten operator ---------------------------------

def vector_jets(y: np.ndarray, fdata, eta: np.ndarray):
    """Jets of D, F and of the covectors df, dc at a point.

    F's second-derivative lane requires fdata.third; it is left None when
    unavailable (operations degrade gracefully).
    """
    d = y.shape[0]
    D = VecJet(np.asarray(y, dtype=float), np.eye(d), np.zeros((d, d, d)))
    Fv = eta * fdata.grad
    Fg = eta[:, None] * fdata.hess
    Fh = None if fdata.third is None else eta[:, None, None] * fdata.third
    F = VecJet(Fv, Fg, Fh)
    df = VecJet(fdata.grad.copy(), fdata.hess.copy(), fdata.third)
    dc = VecJet(eta * y, np.diag(eta), np.zeros((d, d, d)))
    return D, F, df, dc


def transverse_project(y: np.ndarray, fdata, values: np.ndarray,
                       eta: np.ndarray):
    """(T alpha, L alpha) at a point of the section (value level)."""
    d = y.shape[0]
    j = FormJet.from_values(d, values)
    D, F, df, dc = vector_jets(y, fdata, eta)
    t = jet_interior(F, jet_interior(D, jet_wedge_cov(df, jet_wedge_cov(dc, j))))
    return t.V, values - t.V


def cotransverse_project(y: np.ndarray, fdata, values: np.ndarray,
                         eta: np.ndarray):
    """T_c alpha = j^df j^dc i_F i_D alpha (value level)."""
    d = y.shape[0]
    j = FormJet.from_values(d, values)
    D, F, df, dc = vector_jets(y, fdata, eta)
    t = jet_wedge_cov(df, jet_wedge_cov(dc, jet_interior(F, jet_interior(D, j))))
    return t.V


def _schouten_matjet(fdata, eta: np.ndarray) -> MatJet:
    # Lie derivative of the inverse metric along #df: -2 d^a d^b f
    Cv = -2.0 * fdata.hess * eta[None, :]
    Cg = None if fdata.third is None else -2.0 * fdata.third * eta[None, :, None]
    return MatJet(Cv, Cg)


def schouten_apply(y: np.ndarray, fdata, j: FormJet, eta: np.ndarray) -> FormJet:
    """S^(df) = Hessian-derivation + Lie along F, applied to a jet."""
    _, F, _, _ = vector_jets(y, fdata, eta)
    return jet_derivation(_schouten_matjet(fdata, eta), j) + jet_lie(F, j)


def schouten_via_star(y: np.ndarray, fdata, j: FormJet, eta: np.ndarray) -> np.ndarray:
    """Independent route *^-1 L_F * - box(f), value level (cross-check)."""
    sig = tuple(eta)
    _, F, _, _ = vector_jets(y, fdata, eta)
    conj = jet_star_inv(jet_lie(F, jet_star(j, sig)), sig)
    boxf = float(np.sum(eta * np.diag(fdata.hess)))
    return conj.V - boxf * j.V
