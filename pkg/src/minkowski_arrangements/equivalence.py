"""Point sets with slab certificates <-> translate packings around ``(lambda - 1) L``."""
from __future__ import annotations

from dataclasses import dataclass, field

from . import _simplex
from .bodies import HPolytope, LinearFunctional, SymmetricBody, body_from_dict
from .checker import check_slab_inequalities
from .errors import (
    ArrangementError,
    Eq1Violated,
    HullContainsOrigin,
    PackingInvalid,
    ZeroWidthSlab,
)
from .numeric import div, dot, exact, get_mode, scale, serialize, sub, to_scalar
from .report import VerificationReport, Violation

OUTSIDE_HULL = "outside_hull"
OUTSIDE_INTERIOR = "outside_interior"


class SlabSystem(HPolytope):
    """``C = {p : |f_r(p)| <= b_r for all r}`` with gauge ``max_r |f_r(p)| / b_r``.

    Stored as the H-polytope with normals ``f_r / b_r``; ``C`` may be unbounded.
    """

    def __init__(self, functionals, half_widths, keys=None, dim=None):
        mode = get_mode()
        functionals = [tuple(to_scalar(c, mode) for c in _coeffs(f)) for f in functionals]
        half_widths = [to_scalar(b, mode) for b in half_widths]
        if len(functionals) != len(half_widths):
            raise ArrangementError("one half-width per functional is required")
        for r, b in enumerate(half_widths):
            if not b > 0:
                raise ZeroWidthSlab(f"slab {r} has non-positive half-width {b}")
        self.functionals = tuple(functionals)
        self.half_widths = tuple(half_widths)
        self.keys = list(keys) if keys is not None else list(range(len(functionals)))
        super().__init__(
            [tuple(div(c, b) for c in f) for f, b in zip(functionals, half_widths)],
            require_bounded=False,
            dim=dim,
        )

    def __repr__(self):
        return f"SlabSystem(dim={self.dim}, slabs={len(self.functionals)})"

    def scaled(self, t) -> "SlabSystem":
        """The body ``t * C``."""
        return SlabSystem(self.functionals, [t * b for b in self.half_widths], self.keys, self.dim)

    def to_dict(self):
        return {
            "dim": self.dim,
            "kind": "slabs",
            "functionals": [serialize(list(f)) for f in self.functionals],
            "half_widths": serialize(list(self.half_widths)),
        }


def _coeffs(f):
    if isinstance(f, LinearFunctional):
        return f.coefficients
    if hasattr(f, "coefficients"):
        return f.coefficients
    return tuple(f)


def packing_body_from_dict(data: dict) -> SymmetricBody:
    if data.get("kind") == "slabs":
        return SlabSystem(data["functionals"], data["half_widths"], dim=data.get("dim"))
    return body_from_dict(data)


@dataclass
class TranslatePacking:
    """Translates ``L + t_i`` meant to be non-overlapping and to meet ``(lambda - 1) L``."""

    body: SymmetricBody
    translations: list
    lam: object
    report: VerificationReport = None
    slab_hint: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        mode = get_mode()
        self.translations = [tuple(to_scalar(c, mode) for c in t) for t in self.translations]
        self.lam = to_scalar(self.lam, mode)
        if self.lam < 1:
            raise ArrangementError("lambda must be at least 1")

    def __len__(self):
        return len(self.translations)

    def to_dict(self):
        out = {"L": self.body.to_dict(), "t": [serialize(list(t)) for t in self.translations], "lambda": serialize(self.lam)}
        if self.report is not None:
            out["report"] = self.report.to_dict()
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "TranslatePacking":
        return cls(packing_body_from_dict(data["L"]), data["t"], data["lambda"])


def _norm_at_least(body, x, bound, first=None):
    """``norm(x) >= bound`` with early exit; ``first`` is a row index to try first."""
    mode = get_mode()
    if isinstance(body, HPolytope):
        normals = body.normals
        if first is not None and mode.ge(abs(dot(normals[first], x)), bound):
            return True, abs(dot(normals[first], x))
        best = 0
        for a in normals:
            v = abs(dot(a, x))
            if mode.ge(v, bound):
                return True, v
            if v > best:
                best = v
        return False, best
    n = body.norm(x)
    return mode.ge(n, bound), n


def verify_packing(packing: TranslatePacking) -> VerificationReport:
    """Check the three invariants: non-overlap, meeting ``(lambda-1)L``, ``o`` outside the hull."""
    mode = get_mode()
    body, ts, lam = packing.body, packing.translations, packing.lam
    report = VerificationReport("translate_packing", True, details={"n": len(ts), "lambda": lam})
    overlap = []
    for i in range(len(ts)):
        for j in range(i + 1, len(ts)):
            ok, val = _norm_at_least(body, sub(ts[i], ts[j]), 2, packing.slab_hint.get((i, j)))
            if not ok:
                overlap.append(Violation(i, j, residual=2 - val))
    report.add_stage(VerificationReport("non_overlap", not overlap, overlap))
    far = []
    for k, t in enumerate(ts):
        n = body.norm(t)
        if not mode.le(n, lam):
            far.append(Violation(k, residual=n - lam))
    report.add_stage(VerificationReport("meets_scaled_body", not far, far))
    if ts:
        report.add_stage(verify_hull_exclusion(ts, OUTSIDE_HULL))
    return report


def points_to_packing(points, functionals: dict, lam) -> TranslatePacking:
    """Build ``L = C / (lambda + 1)`` and ``t_i = lambda / (lambda + 1) x_i``.

    ``points`` is a sequence or an index -> vector mapping; ``functionals``
    maps ``(i, j)`` to a functional or coefficient tuple.
    """
    mode = get_mode()
    lam = to_scalar(lam, mode)
    if lam < 1:
        raise ArrangementError("lambda must be at least 1")
    if not isinstance(points, dict):
        points = dict(enumerate(points))
    points = {k: tuple(to_scalar(c, mode) for c in x) for k, x in points.items()}
    index = sorted(points)
    pos = {k: p for p, k in enumerate(index)}

    hull = verify_hull_exclusion([points[k] for k in index], OUTSIDE_HULL)
    if not hull.passed:
        raise HullContainsOrigin("origin lies in the convex hull of the points")
    if len(set(points.values())) != len(points):
        raise ArrangementError("points must be distinct")

    keys, coeffs, widths = [], [], []
    for (i, j), f in sorted(functionals.items()):
        c = tuple(to_scalar(v, mode) for v in _coeffs(f))
        vals = {k: dot(c, x) for k, x in points.items()}
        gap = abs(vals[i] - vals[j])
        if gap == 0:
            raise ZeroWidthSlab(f"f_{i}{j}(x_{i}) = f_{i}{j}(x_{j})")
        bound = lam * gap / 2
        for k, v in vals.items():
            if not mode.le(abs(v), bound):
                raise Eq1Violated(i, j, k, abs(v) - bound)
        keys.append((i, j))
        coeffs.append(c)
        widths.append(bound)

    C = SlabSystem(coeffs, widths, keys, dim=len(points[index[0]]))
    L = C.scaled(div(1, lam + 1))
    factor = div(lam, lam + 1)
    translations = [scale(factor, points[k]) for k in index]
    hint = {(pos[i], pos[j]): r for r, (i, j) in enumerate(keys)}
    packing = TranslatePacking(L, translations, lam, slab_hint=hint)
    packing.report = verify_packing(packing)
    packing.report.details["indices"] = index
    if not packing.report.passed:
        raise PackingInvalid(packing.report.failed_stage(), packing.report)
    return packing


def packing_to_points(packing: TranslatePacking):
    """Recover points and slab functionals from a valid packing.

    Returns ``(points, functionals, lam, report)``; ``f_ij`` is the supporting
    functional of the ``L``-gauge at ``t_j - t_i``.
    """
    check = verify_packing(packing)
    if not check.passed:
        raise PackingInvalid(check.failed_stage(), check)
    mode = get_mode()
    ts = packing.translations
    functionals = {}
    narrow = []
    for i in range(len(ts)):
        for j in range(i + 1, len(ts)):
            f = packing.body.supporting_functional(sub(ts[j], ts[i]))
            functionals[(i, j)] = f
            # the projection of L has width 2, so the two projected translates cannot overlap
            if not mode.ge(f(ts[j]) - f(ts[i]), 2):
                narrow.append(Violation(i, j, residual=2 - (f(ts[j]) - f(ts[i]))))
    report = VerificationReport("packing_to_points", True, details={"n": len(ts), "lambda": packing.lam})
    report.add_stage(check)
    report.add_stage(VerificationReport("separation_width", not narrow, narrow))
    report.add_stage(
        check_slab_inequalities(
            dict(enumerate(ts)),
            {key: f.coefficients for key, f in functionals.items()},
            factor=div(packing.lam, 2),
            name="scaled_slab_inequality",
        )
    )
    return list(ts), functionals, packing.lam, report


def verify_hull_exclusion(points, mode: str = OUTSIDE_HULL) -> VerificationReport:
    """Decide whether the origin avoids ``conv(points)`` (or its interior) exactly.

    ``outside_hull``: some ``c`` has ``<c, t_i> >= 1`` for all ``i``.
    ``outside_interior``: some ``c != 0`` has ``<c, t_i> >= 0`` for all ``i``.
    Floats are converted to their exact rational values first.
    """
    if not points:
        raise ArrangementError("need at least one point")
    pts = [tuple(exact(c) for c in p) for p in points]
    D = len(pts[0])
    T = [[p[k] for p in pts] for k in range(D)]
    if mode == OUTSIDE_HULL:
        status, sol = _simplex.feasibility(T + [[1] * len(pts)], [0] * D + [1])
        if status == "feasible":
            return VerificationReport(
                "outside_hull", False, [Violation(0, note="origin is a convex combination")],
                details={"weights": sol},
            )
        c = tuple(-sol[k] / sol[D] for k in range(D))
        worst = min(dot(c, p) for p in pts)
        ok = worst >= 1
        return VerificationReport("outside_hull", ok, [] if ok else [Violation(0, residual=1 - worst)], details={"witness": list(c)})
    if mode == OUTSIDE_INTERIOR:
        tried = 0
        for k in range(D):
            for s in (1, -1):
                tried += 1
                rhs = [0] * D
                rhs[k] = s
                status, sol = _simplex.feasibility(T, rhs)
                if status == "infeasible":
                    c = tuple(-v for v in sol)
                    if any(c) and all(dot(c, p) >= 0 for p in pts):
                        return VerificationReport("outside_interior", True, details={"witness": list(c), "systems_tried": tried})
        return VerificationReport(
            "outside_interior", False, [Violation(0, note="points positively span the space")],
            details={"systems_tried": tried},
        )
    raise ArrangementError(f"unknown hull mode {mode!r}")
