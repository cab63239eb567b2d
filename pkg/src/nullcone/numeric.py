"""Second-order forward automatic differentiation and small dense linear algebra.

``HyperDual`` carries a value, a gradient over a fixed set of active
directions, and the full symmetric Hessian over those directions.  One
evaluation of an expression therefore yields exact first and second
derivatives (no truncation error), which is what every geometric formula
downstream consumes: gradients and Hessians of defining functions,
embedding Jacobians, and coefficient jets of differential forms.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

__all__ = [
    "HyperDual", "hyperdual_eval", "rank_with_tolerance", "nullspace_with_tolerance",
    "Tensor4", "sin", "cos", "tan", "sinh", "cosh", "tanh", "exp", "log", "sqrt",
    "atan", "atanh", "atan2", "csc", "sec", "cot", "csch", "sech", "coth",
]


class HyperDual:
    """Truncated second-order Taylor scalar over ``m`` active directions.

    Arithmetic implements the exact product and chain rules, so ``grad`` and
    ``hess`` are exact to machine precision.  Instances are immutable in
    practice (operations return fresh objects) and safe to share between
    threads.
    """

    __slots__ = ("v", "g", "h")

    def __init__(self, v: float, g: np.ndarray, h: np.ndarray):
        self.v = float(v)
        self.g = g
        self.h = h

    # -- constructors -------------------------------------------------
    @classmethod
    def constant(cls, x: float, m: int) -> "HyperDual":
        return cls(x, np.zeros(m), np.zeros((m, m)))

    @classmethod
    def variable(cls, x: float, i: int, m: int) -> "HyperDual":
        g = np.zeros(m)
        g[i] = 1.0
        return cls(x, g, np.zeros((m, m)))

    @property
    def m(self) -> int:
        return self.g.shape[0]

    def __repr__(self) -> str:
        return f"HyperDual({self.v!r}, grad={self.g!r})"

    # -- ring operations ----------------------------------------------
    def _coerce(self, other):
        if isinstance(other, HyperDual):
            return other
        return HyperDual.constant(float(other), self.m)

    def __add__(self, other):
        o = self._coerce(other)
        return HyperDual(self.v + o.v, self.g + o.g, self.h + o.h)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return HyperDual(self.v - o.v, self.g - o.g, self.h - o.h)

    def __rsub__(self, other):
        o = self._coerce(other)
        return HyperDual(o.v - self.v, o.g - self.g, o.h - self.h)

    def __neg__(self):
        return HyperDual(-self.v, -self.g, -self.h)

    def __mul__(self, other):
        if not isinstance(other, HyperDual):
            c = float(other)
            return HyperDual(self.v * c, self.g * c, self.h * c)
        o = self._coerce(other)
        cross = np.outer(self.g, o.g)
        return HyperDual(
            self.v * o.v,
            self.v * o.g + o.v * self.g,
            self.v * o.h + o.v * self.h + cross + cross.T,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, HyperDual):
            return self * (1.0 / float(other))
        return self * other._reciprocal()

    def __rtruediv__(self, other):
        return self._reciprocal() * float(other)

    def _reciprocal(self) -> "HyperDual":
        if self.v == 0.0:
            raise DomainError("division by a zero value")
        iv = 1.0 / self.v
        return self._unary(iv, -iv * iv, 2.0 * iv * iv * iv)

    def __pow__(self, p):
        if isinstance(p, HyperDual):
            return exp(p * log(self))
        p = float(p)
        if p == int(p):
            n = int(p)
            if n == 0:
                return HyperDual.constant(1.0, self.m)
            if self.v == 0.0 and n < 0:
                raise DomainError("zero raised to a negative power")
            f1 = n * self.v ** (n - 1)
            f2 = n * (n - 1) * self.v ** (n - 2) if n != 1 else 0.0
            return self._unary(self.v ** n, f1, f2)
        if self.v <= 0.0:
            raise DomainError("non-integer power of a non-positive value")
        return self._unary(self.v ** p, p * self.v ** (p - 1.0),
                           p * (p - 1.0) * self.v ** (p - 2.0))

    def __rpow__(self, base):
        base = float(base)
        if base <= 0.0:
            raise DomainError("non-positive base of an exponential")
        return exp(self * math.log(base))

    def _unary(self, f0: float, f1: float, f2: float) -> "HyperDual":
        """Chain rule for f(self): value f0, first f1, second f2 at self.v."""
        cross = np.outer(self.g, self.g)
        return HyperDual(f0, f1 * self.g, f1 * self.h + f2 * cross)


# -- elementary functions, generic over float | HyperDual --------------

def _dispatch(x, float_fn, f1_fn, f2_fn, domain=None, label=""):
    if isinstance(x, HyperDual):
        if domain is not None and not domain(x.v):
            raise DomainError(f"{label}: argument {x.v} outside domain")
        return x._unary(float_fn(x.v), f1_fn(x.v), f2_fn(x.v))
    xf = float(x)
    if domain is not None and not domain(xf):
        raise DomainError(f"{label}: argument {xf} outside domain")
    return float_fn(xf)


def sin(x):
    return _dispatch(x, math.sin, math.cos, lambda v: -math.sin(v))


def cos(x):
    return _dispatch(x, math.cos, lambda v: -math.sin(v), lambda v: -math.cos(v))


def tan(x):
    return _dispatch(x, math.tan, lambda v: 1.0 / math.cos(v) ** 2,
                     lambda v: 2.0 * math.tan(v) / math.cos(v) ** 2,
                     domain=lambda v: abs(math.cos(v)) > 1e-300, label="tan")


def sinh(x):
    return _dispatch(x, math.sinh, math.cosh, math.sinh)


def cosh(x):
    return _dispatch(x, math.cosh, math.sinh, math.cosh)


def tanh(x):
    return _dispatch(x, math.tanh, lambda v: 1.0 / math.cosh(v) ** 2,
                     lambda v: -2.0 * math.tanh(v) / math.cosh(v) ** 2)


def exp(x):
    return _dispatch(x, math.exp, math.exp, math.exp)


def log(x):
    return _dispatch(x, math.log, lambda v: 1.0 / v, lambda v: -1.0 / v ** 2,
                     domain=lambda v: v > 0.0, label="log")


def sqrt(x):
    return _dispatch(x, math.sqrt, lambda v: 0.5 / math.sqrt(v),
                     lambda v: -0.25 / math.sqrt(v) ** 3,
                     domain=lambda v: v > 0.0, label="sqrt")


def atan(x):
    return _dispatch(x, math.atan, lambda v: 1.0 / (1.0 + v * v),
                     lambda v: -2.0 * v / (1.0 + v * v) ** 2)


def atanh(x):
    return _dispatch(x, math.atanh, lambda v: 1.0 / (1.0 - v * v),
                     lambda v: 2.0 * v / (1.0 - v * v) ** 2,
                     domain=lambda v: abs(v) < 1.0, label="atanh")


def atan2(y, x):
    """Two-argument arctangent, smooth away from the origin and the cut.

    Reduced to ``atan`` of the ratio with the larger-magnitude denominator;
    the additive branch constant does not affect derivatives.
    """
    yv = y.v if isinstance(y, HyperDual) else float(y)
    xv = x.v if isinstance(x, HyperDual) else float(x)
    if xv == 0.0 and yv == 0.0:
        raise DomainError("atan2(0, 0) undefined")
    if abs(xv) >= abs(yv):
        if xv > 0.0:
            return atan(y / x)
        offset = math.pi if yv >= 0.0 else -math.pi
        return atan(y / x) + offset
    offset = 0.5 * math.pi if yv > 0.0 else -0.5 * math.pi
    return offset - atan(x / y)


def csc(x):
    return 1.0 / sin(x)


def sec(x):
    return 1.0 / cos(x)


def cot(x):
    return cos(x) / sin(x)


def csch(x):
    return 1.0 / sinh(x)


def sech(x):
    return 1.0 / cosh(x)


def coth(x):
    return cosh(x) / sinh(x)


def hyperdual_eval(fn, point):
    """Evaluate ``fn`` at ``point`` returning (value, gradient, Hessian).

    ``fn`` is called with one HyperDual argument per coordinate; derivatives
    are exact.  Raises DomainError when the expression leaves its domain.
    """
    point = np.asarray(point, dtype=float)
    m = point.shape[0]
    xs = [HyperDual.variable(point[i], i, m) for i in range(m)]
    r = fn(*xs)
    if not isinstance(r, HyperDual):
        return float(r), np.zeros(m), np.zeros((m, m))
    return r.v, r.g.copy(), 0.5 * (r.h + r.h.T)


# -- dense linear algebra ----------------------------------------------

def rank_with_tolerance(M, rel_tol: float = 1e-8) -> int:
    """Number of singular values above ``rel_tol * sigma_max``.

    Degenerate shapes and the zero matrix report rank 0.
    """
    M = np.asarray(M, dtype=float)
    if M.size == 0:
        return 0
    if not (0.0 < rel_tol < 1.0):
        raise ValueError("rel_tol must lie in (0, 1)")
    s = np.linalg.svd(M, compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.sum(s > rel_tol * s[0]))


def nullspace_with_tolerance(M, rel_tol: float = 1e-8):
    """(rank, null-space basis rows) of M under the relative SVD cutoff."""
    M = np.asarray(M, dtype=float)
    _, s, vh = np.linalg.svd(M)
    if s.size == 0 or s[0] == 0.0:
        return 0, vh
    rank = int(np.sum(s > rel_tol * s[0]))
    return rank, vh[rank:]


@dataclass
class Tensor4:
    """Dense (0,4) tensor with an index-symmetry tag.

    ``riemann``-tagged tensors are expected to satisfy antisymmetry in both
    index pairs and pair-exchange symmetry; ``check_riemann`` verifies this.
    """

    data: np.ndarray
    symmetry: str = "none"  # riemann | kulkarni-nomizu | none

    def check_riemann(self, rel_tol: float = 1e-12) -> bool:
        t = self.data
        scale = max(float(np.max(np.abs(t))), 1e-300)
        ok = (
            np.max(np.abs(t + np.swapaxes(t, 0, 1))) <= rel_tol * scale
            and np.max(np.abs(t + np.swapaxes(t, 2, 3))) <= rel_tol * scale
            and np.max(np.abs(t - np.transpose(t, (2, 3, 0, 1)))) <= rel_tol * scale
        )
        return bool(ok)
