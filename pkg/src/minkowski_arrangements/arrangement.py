"""Homothet collections and the pairwise validity predicates."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .bodies import SymmetricBody, body_from_dict
from .errors import ArrangementError, DimensionMismatch
from .numeric import get_mode, serialize, sub, to_scalar
from .report import VerificationReport, Violation


@dataclass(frozen=True)
class Homothet:
    center: tuple
    ratio: object

    def __post_init__(self):
        if not self.ratio > 0:
            raise ArrangementError("homothety ratio must be positive")

    def to_dict(self):
        return {"center": serialize(list(self.center)), "lambda": serialize(self.ratio)}


class Arrangement:
    """An ordered list of homothets ``v_i + lambda_i K`` over one body."""

    def __init__(self, body: SymmetricBody, members: Iterable):
        mode = get_mode()
        out = []
        for m in members:
            if isinstance(m, Homothet):
                center, ratio = m.center, m.ratio
            else:
                center, ratio = m
            h = Homothet(tuple(to_scalar(c, mode) for c in center), to_scalar(ratio, mode))
            if len(h.center) != body.dim:
                raise DimensionMismatch(
                    f"center of length {len(h.center)} in a {body.dim}-dimensional arrangement"
                )
            out.append(h)
        self.body = body
        self.members = tuple(out)

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __getitem__(self, i):
        return self.members[i]

    def __repr__(self):
        return f"Arrangement({self.body!r}, n={len(self)})"

    @property
    def dim(self) -> int:
        return self.body.dim

    @property
    def centers(self):
        return [h.center for h in self.members]

    @property
    def ratios(self):
        return [h.ratio for h in self.members]

    def subset(self, indices: Sequence[int]) -> "Arrangement":
        return Arrangement(self.body, [self.members[i] for i in indices])

    def scaled(self, t) -> "Arrangement":
        """Multiply every center and ratio by ``t > 0``."""
        return Arrangement(self.body, [(tuple(t * c for c in h.center), t * h.ratio) for h in self])

    def to_dict(self):
        return {"body": self.body.to_dict(), "homothets": [h.to_dict() for h in self.members]}

    @classmethod
    def from_dict(cls, data: dict) -> "Arrangement":
        body = body_from_dict(data["body"])
        return cls(body, [(h["center"], h["lambda"]) for h in data["homothets"]])


def _gauge_distance(arr: Arrangement, i: int, j: int):
    return arr.body.norm(sub(arr.members[j].center, arr.members[i].center))


def is_minkowski(arr: Arrangement) -> VerificationReport:
    """No member contains another member's center in its interior.

    Checks ``norm(v_j - v_i) >= lambda_i`` over all ordered pairs; a
    violation's residual is ``lambda_i - norm(v_j - v_i)``.
    """
    mode = get_mode()
    body, members = arr.body, arr.members
    violations = []
    for i in range(len(members)):
        vi, li = members[i].center, members[i].ratio
        for j in range(i + 1, len(members)):
            vj, lj = members[j].center, members[j].ratio
            dist = body.norm(sub(vj, vi))
            if not mode.ge(dist, li):
                violations.append(Violation(i, j, residual=li - dist))
            if not mode.ge(dist, lj):
                violations.append(Violation(j, i, residual=lj - dist))
    violations.sort(key=Violation.sort_key)
    return VerificationReport("is_minkowski", not violations, violations, {"n": len(members)})


def is_pairwise_intersecting(arr: Arrangement, strict: bool = False) -> VerificationReport:
    """Every two members meet: ``norm(v_i - v_j) <= lambda_i + lambda_j``.

    ``strict`` asks for interiors to meet instead (``<``). The residual of a
    violation is ``norm - (lambda_i + lambda_j)``.
    """
    mode = get_mode()
    body, members = arr.body, arr.members
    violations = []
    for i in range(len(members)):
        vi, li = members[i].center, members[i].ratio
        for j in range(i + 1, len(members)):
            vj, lj = members[j].center, members[j].ratio
            dist = body.norm(sub(vi, vj))
            ok = mode.lt(dist, li + lj) if strict else mode.le(dist, li + lj)
            if not ok:
                violations.append(Violation(i, j, residual=dist - (li + lj)))
    name = "is_pairwise_interior_intersecting" if strict else "is_pairwise_intersecting"
    return VerificationReport(name, not violations, violations, {"n": len(members)})


def is_boundary_sequence(arr: Arrangement) -> VerificationReport:
    """Each later center lies on the boundary of every earlier member."""
    mode = get_mode()
    body, members = arr.body, arr.members
    violations = []
    for i in range(len(members)):
        vi, li = members[i].center, members[i].ratio
        for j in range(i + 1, len(members)):
            dist = body.norm(sub(members[j].center, vi))
            if not mode.eq(dist, li):
                violations.append(Violation(i, j, residual=dist - li))
    return VerificationReport("is_boundary_sequence", not violations, violations, {"n": len(members)})


def is_valid_pair(body: SymmetricBody, a: Homothet, b: Homothet, strict: bool = False) -> bool:
    """Both pairwise conditions (Minkowski each way, intersection) for one pair."""
    mode = get_mode()
    dist = body.norm(sub(a.center, b.center))
    if not (mode.ge(dist, a.ratio) and mode.ge(dist, b.ratio)):
        return False
    total = a.ratio + b.ratio
    return mode.lt(dist, total) if strict else mode.le(dist, total)
