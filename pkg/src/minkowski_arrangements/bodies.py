"""o-symmetric convex bodies: gauge norms and supporting functionals.

Two families are supported, both with closed-form gauges:

* :class:`HPolytope` -- ``K = {x : |<a_r, x>| <= 1 for all r}``
* :class:`PBall` -- the unit ball of an ``l_p`` norm, ``1 <= p <= inf``
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .errors import ArrangementError, DimensionMismatch, NumericModeError
from .numeric import Scalar, div, dot, get_mode, serialize, sign, sub, to_scalar


@dataclass(frozen=True)
class LinearFunctional:
    coefficients: tuple

    def __call__(self, x: Sequence) -> Scalar:
        return dot(self.coefficients, x)

    @property
    def dim(self) -> int:
        return len(self.coefficients)

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coefficients)

    def to_list(self):
        return serialize(list(self.coefficients))


class SymmetricBody:
    """Common interface. Subclasses implement ``norm`` and ``supporting_functional``."""

    dim: int

    def _check(self, x):
        if len(x) != self.dim:
            raise DimensionMismatch(f"expected a {self.dim}-vector, got length {len(x)}")

    def norm(self, x) -> Scalar:
        raise NotImplementedError

    def supporting_functional(self, u) -> LinearFunctional:
        raise NotImplementedError

    def dual_norm(self, u) -> Scalar:
        """Support function ``max_{k in K} <u, k>``."""
        raise NotImplementedError

    def box_half_widths(self) -> Optional[tuple]:
        """Half-widths if the body is an axis-aligned box, else ``None``."""
        return None

    def volume(self) -> float:
        raise NotImplementedError

    def contains(self, center, ratio, point, strict=False) -> bool:
        return contains(self, center, ratio, point, strict)

    def to_dict(self) -> dict:
        raise NotImplementedError


def _rank(rows, exact: bool) -> int:
    if not rows:
        return 0
    if not exact:
        return int(np.linalg.matrix_rank(np.array(rows, dtype=float)))
    m = [[Fraction(v) for v in row] for row in rows]
    rank, ncols = 0, len(m[0])
    for col in range(ncols):
        pivot = next((r for r in range(rank, len(m)) if m[r][col] != 0), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        for r in range(len(m)):
            if r != rank and m[r][col] != 0:
                f = m[r][col] / m[rank][col]
                m[r] = [a - f * b for a, b in zip(m[r], m[rank])]
        rank += 1
    return rank


class HPolytope(SymmetricBody):
    """Intersection of the symmetric slabs ``|<a_r, x>| <= 1``.

    With ``require_bounded=False`` the normals may fail to span, giving an
    unbounded symmetric convex set whose gauge is only a seminorm.
    """

    def __init__(self, normals, require_bounded: bool = True, dim: Optional[int] = None):
        mode = get_mode()
        normals = [tuple(to_scalar(c, mode) for c in a) for a in normals]
        if not normals and (require_bounded or dim is None):
            raise ArrangementError("an H-polytope needs at least one normal")
        dims = {len(a) for a in normals} if normals else {dim}
        if len(dims) != 1 or (dim is not None and dims != {dim}):
            raise DimensionMismatch("normals have inconsistent lengths")
        self.dim = dims.pop()
        if any(all(c == 0 for c in a) for a in normals):
            raise ArrangementError("zero normal")
        self.normals = tuple(normals)
        self.bounded = _rank(normals, mode.exact) == self.dim
        if require_bounded and not self.bounded:
            raise ArrangementError("normals do not span: the body is unbounded")

    def __repr__(self):
        return f"HPolytope(dim={self.dim}, m={len(self.normals)})"

    def __eq__(self, other):
        return isinstance(other, HPolytope) and self.normals == other.normals

    def __hash__(self):
        return hash(self.normals)

    def norm(self, x):
        self._check(x)
        return max((abs(dot(a, x)) for a in self.normals), default=0)

    def supporting_functional(self, u):
        self._check(u)
        best_r, best = 0, None
        for r, a in enumerate(self.normals):
            val = abs(dot(a, u))
            if best is None or val > best:
                best_r, best = r, val
        if best == 0:
            raise ArrangementError("supporting functional requested at a zero-gauge vector")
        a = self.normals[best_r]
        s = sign(dot(a, u))
        return LinearFunctional(tuple(s * c for c in a))

    def dual_norm(self, u):
        self._check(u)
        half = self.box_half_widths()
        if half is not None:
            return sum(abs(c) * w for c, w in zip(u, half))
        # max <u, x> subject to -1 <= A x <= 1
        from scipy.optimize import linprog

        A = np.array(self.normals, dtype=float)
        uf = np.asarray(u, dtype=float)
        size = float(np.abs(uf).max())
        if size == 0:
            return 0.0
        # solve for u / |u|_inf so the LP tolerances are relative
        res = linprog(
            -uf / size,
            A_ub=np.vstack([A, -A]),
            b_ub=np.ones(2 * len(A)),
            bounds=[(None, None)] * self.dim,
            method="highs",
        )
        if res.status != 0:
            raise ArrangementError("support function LP failed (unbounded body?)")
        return -res.fun * size

    def box_half_widths(self):
        widths = [None] * self.dim
        for a in self.normals:
            nz = [k for k, c in enumerate(a) if c != 0]
            if len(nz) != 1:
                return None
            k = nz[0]
            c = abs(a[k])
            if widths[k] is None or c > widths[k]:
                widths[k] = c
        if any(w is None for w in widths):
            return None
        return tuple(div(1, w) for w in widths)

    def volume(self):
        half = self.box_half_widths()
        if half is not None:
            out = 1
            for w in half:
                out *= 2 * w
            return out
        from scipy.spatial import ConvexHull, HalfspaceIntersection

        A = np.array(self.normals, dtype=float)
        halfspaces = np.hstack([np.vstack([A, -A]), -np.ones((2 * len(A), 1))])
        hs = HalfspaceIntersection(halfspaces, np.zeros(self.dim))
        return float(ConvexHull(hs.intersections).volume)

    def to_dict(self):
        return {"dim": self.dim, "kind": "hpolytope", "normals": [serialize(list(a)) for a in self.normals]}


def _exact_sqrt(q):
    q = Fraction(q)
    n, d = math.isqrt(q.numerator), math.isqrt(q.denominator)
    if n * n == q.numerator and d * d == q.denominator:
        r = Fraction(n, d)
        return r.numerator if r.denominator == 1 else r
    return None


class PBall(SymmetricBody):
    """Unit ball of the ``l_p`` norm in dimension ``dim``.

    Rational mode is exact for ``p in {1, inf}``. For ``p = 2`` it is exact
    only where the square root is rational, otherwise
    :class:`NumericModeError` is raised.
    """

    def __init__(self, p, dim: int):
        if isinstance(p, str):
            p = math.inf if p.strip().lower() in ("inf", "infinity") else float(p)
        if not (p == math.inf or p >= 1):
            raise ArrangementError("p must be >= 1")
        if dim < 1:
            raise ArrangementError("dimension must be positive")
        self.p = math.inf if p == math.inf else (int(p) if float(p).is_integer() else float(p))
        self.dim = int(dim)

    def __repr__(self):
        return f"PBall(p={self.p}, dim={self.dim})"

    def __eq__(self, other):
        return isinstance(other, PBall) and (self.p, self.dim) == (other.p, other.dim)

    def __hash__(self):
        return hash((self.p, self.dim))

    def _rational_ok(self):
        return self.p in (1, math.inf)

    def norm(self, x):
        self._check(x)
        p = self.p
        if p == math.inf:
            return max(abs(c) for c in x)
        if p == 1:
            return sum(abs(c) for c in x)
        if get_mode().exact:
            if p == 2:
                root = _exact_sqrt(sum(c * c for c in x))
                if root is not None:
                    return root
            raise NumericModeError(f"l_{p} norm is not exact in rational mode")
        return float(np.linalg.norm(np.asarray(x, dtype=float), ord=p))

    def supporting_functional(self, u):
        self._check(u)
        p = self.p
        if all(c == 0 for c in u):
            raise ArrangementError("supporting functional at the zero vector")
        if p == math.inf:
            m = max(abs(c) for c in u)
            k = next(k for k, c in enumerate(u) if abs(c) == m)
            coeffs = [0] * self.dim
            coeffs[k] = sign(u[k])
            return LinearFunctional(tuple(coeffs))
        if p == 1:
            return LinearFunctional(tuple(sign(c) for c in u))
        n = self.norm(u)
        if p == 2:
            return LinearFunctional(tuple(div(c, n) for c in u))
        return LinearFunctional(
            tuple(float(sign(c)) * abs(c) ** (p - 1) / n ** (p - 1) for c in u)
        )

    def dual_norm(self, u):
        self._check(u)
        p = self.p
        if p == math.inf:
            return sum(abs(c) for c in u)
        if p == 1:
            return max(abs(c) for c in u)
        return PBall(p / (p - 1), self.dim).norm(u)

    def box_half_widths(self):
        return (1,) * self.dim if self.p == math.inf else None

    def volume(self):
        if self.p == math.inf:
            return 2**self.dim
        if self.p == 1:
            return Fraction(2**self.dim, math.factorial(self.dim))
        p, d = float(self.p), self.dim
        return (2 * math.gamma(1 + 1 / p)) ** d / math.gamma(1 + d / p)

    def to_dict(self):
        return {"dim": self.dim, "kind": "pball", "p": "inf" if self.p == math.inf else self.p}


def cube(d: int) -> PBall:
    """The cube ``[-1, 1]^d``."""
    return PBall(math.inf, d)


def norm(body: SymmetricBody, x) -> Scalar:
    return body.norm(x)


def supporting_functional(body: SymmetricBody, u) -> LinearFunctional:
    """Return phi with ``phi <= norm`` everywhere and ``phi(u) = norm(u)``."""
    if all(c == 0 for c in u):
        raise ArrangementError("u must be non-zero")
    return body.supporting_functional(u)


def contains(body: SymmetricBody, center, ratio, point, strict: bool = False) -> bool:
    """Membership of ``point`` in ``center + ratio * K`` (interior if ``strict``)."""
    if ratio <= 0:
        raise ArrangementError("ratio must be positive")
    mode = get_mode()
    n = body.norm(sub(point, center))
    return mode.lt(n, ratio) if strict else mode.le(n, ratio)


def body_from_dict(data: dict) -> SymmetricBody:
    kind = data.get("kind")
    if kind == "hpolytope":
        body = HPolytope(data["normals"])
        if "dim" in data and int(data["dim"]) != body.dim:
            raise DimensionMismatch("declared dim disagrees with the normals")
        return body
    if kind == "pball":
        return PBall(data["p"], int(data["dim"]))
    raise ArrangementError(f"unknown body kind {kind!r}")
