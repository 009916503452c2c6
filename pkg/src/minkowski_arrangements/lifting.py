"""Lift homothets one dimension up and build per-pair certified functionals.

A homothet ``v + lambda K`` becomes the point ``(v / lambda, 1 / lambda)``.
For each pair of members a functional ``f = (phi, -alpha)`` is built from a
supporting functional ``phi`` of ``K`` and a common point ``alpha`` of the
projected intervals ``phi(v_t + lambda_t K)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .arrangement import Arrangement, is_boundary_sequence, is_minkowski, is_pairwise_intersecting
from .bodies import LinearFunctional, supporting_functional
from .checker import check_height_witness, check_slab_inequalities
from .errors import (
    ArrangementError,
    CertificateError,
    DegeneratePair,
    HellyEmpty,
    HypothesisViolated,
    StrictnessViolation,
)
from .numeric import div, exact, get_mode, lt_root_of_two, serialize, sub
from .report import VerificationReport, Violation


@dataclass(frozen=True)
class LiftedPoint:
    base: tuple
    height: object

    @property
    def vector(self) -> tuple:
        return self.base + (self.height,)

    def unlift(self):
        """Recover ``(center, ratio)``."""
        return tuple(div(b, self.height) for b in self.base), div(1, self.height)


@dataclass(frozen=True)
class PairFunctional:
    """``f(v, mu) = phi(v) - alpha * mu`` on ``R^d x R``."""

    i: int
    j: int
    phi: LinearFunctional
    alpha: object

    def __call__(self, x) -> object:
        return self.phi(x[:-1]) - self.alpha * x[-1]

    @property
    def coefficients(self) -> tuple:
        return self.phi.coefficients + (-self.alpha,)

    def to_dict(self):
        return {"i": self.i, "j": self.j, "phi": self.phi.to_list(), "alpha": serialize(self.alpha)}


@dataclass
class LiftCertificate:
    points: list
    functionals: dict
    factor: object
    report: VerificationReport
    indices: list = field(default_factory=list)
    N: Optional[int] = None

    def point_map(self) -> dict:
        return {idx: p.vector for idx, p in zip(self.indices, self.points)}

    def coefficient_map(self) -> dict:
        return {key: f.coefficients for key, f in self.functionals.items()}

    def to_dict(self):
        out = {
            "points": [serialize(list(p.vector)) for p in self.points],
            "indices": list(self.indices),
            "functionals": [f.to_dict() for _, f in sorted(self.functionals.items())],
            "factor": serialize(self.factor),
            "report": self.report.to_dict(),
        }
        if self.N is not None:
            out["N"] = self.N
        return out


def lift_points(arr: Arrangement) -> list:
    return [LiftedPoint(tuple(div(c, h.ratio) for c in h.center), div(1, h.ratio)) for h in arr]


def unlift_points(body, points) -> Arrangement:
    return Arrangement(body, [p.unlift() for p in points])


def helly_alpha(body, arr: Arrangement, phi: LinearFunctional, open_mode: bool = False, members=None):
    """Midpoint of the common part of the intervals ``phi(v_t + lambda_t K)``.

    ``phi`` must be a supporting functional of ``K`` so that each image is
    ``[phi(v_t) - lambda_t, phi(v_t) + lambda_t]``. In ``open_mode`` the
    open intervals are intersected.
    """
    mode = get_mode()
    members = arr.members if members is None else members
    if not members:
        raise HellyEmpty("no intervals")
    lo = hi = None
    for h in members:
        c = phi(h.center)
        a, b = c - h.ratio, c + h.ratio
        lo = a if lo is None or a > lo else lo
        hi = b if hi is None or b < hi else hi
    ok = mode.lt(lo, hi) if open_mode else mode.le(lo, hi)
    if not ok:
        kind = "open" if open_mode else "closed"
        raise HellyEmpty(f"{kind} intervals have empty intersection: lo={lo}, hi={hi}")
    return div(lo + hi, 2)


def _pair_functional(arr, i, j, open_mode):
    vi, vj = arr.members[i].center, arr.members[j].center
    u = sub(vj, vi)
    if all(c == 0 for c in u):
        raise DegeneratePair(f"members {i} and {j} share a center")
    phi = supporting_functional(arr.body, u)
    alpha = helly_alpha(arr.body, arr, phi, open_mode=open_mode)
    return PairFunctional(i, j, phi, alpha)


def build_pair_certificate(arr: Arrangement, i: int, j: int) -> PairFunctional:
    """Functional for the pair ``(i, j)`` with ``f(x_j - x_i) >= 1`` and ``|f(x_k)| <= 1``.

    Both guarantees are checked; a failure raises :class:`CertificateError`
    (the input then violates the Minkowski hypothesis).
    """
    if i == j:
        raise ArrangementError("pair indices must differ")
    mode = get_mode()
    f = _pair_functional(arr, i, j, open_mode=False)
    hi, hj = arr.members[i], arr.members[j]
    # f(x_j - x_i) = (phi(v_j) - alpha)/lambda_j + (alpha - phi(v_i))/lambda_i
    gap = div(f.phi(hj.center) - f.alpha, hj.ratio) + div(f.alpha - f.phi(hi.center), hi.ratio)
    if not mode.ge(gap, 1):
        raise CertificateError(f"pair ({i}, {j}): f(x_j - x_i) = {gap} < 1")
    for k, h in enumerate(arr.members):
        # |f(x_k)| <= 1  <=>  |phi(v_k) - alpha| <= lambda_k
        if not mode.le(abs(f.phi(h.center) - f.alpha), h.ratio):
            raise CertificateError(f"pair ({i}, {j}): |f(x_{k})| > 1")
    return f


def lift_arrangement(arr: Arrangement) -> LiftCertificate:
    """Certificate that the lifted points satisfy the unit-factor slab condition."""
    hyp = VerificationReport("hypotheses", True)
    hyp.add_stage(is_minkowski(arr))
    hyp.add_stage(is_pairwise_intersecting(arr))
    if not hyp.passed:
        raise HypothesisViolated(f"{hyp.failed_stage()} failed", hyp)
    points = lift_points(arr)
    functionals = {}
    for i in range(len(arr)):
        for j in range(i + 1, len(arr)):
            functionals[(i, j)] = build_pair_certificate(arr, i, j)
    indices = list(range(len(arr)))
    report = VerificationReport("lift_certificate", True, details={"n": len(arr), "pairs": len(functionals)})
    report.add_stage(hyp)
    report.add_stage(check_height_witness({k: p.vector for k, p in zip(indices, points)}))
    report.add_stage(
        check_slab_inequalities(
            {k: p.vector for k, p in zip(indices, points)},
            {key: f.coefficients for key, f in functionals.items()},
            factor=1,
            name="unit_slab_inequality",
        )
    )
    return LiftCertificate(points, functionals, 1, report, indices)


def normalize_ratios(arr: Arrangement) -> Arrangement:
    """Rescale so that the smallest ratio is 1."""
    if not len(arr):
        return arr
    m = min(arr.ratios)
    return Arrangement(arr.body, [(tuple(div(c, m) for c in h.center), div(h.ratio, m)) for h in arr])


def floor_n_log2(ratio, N: int) -> int:
    """Exact ``floor(N * log2(ratio))`` for ``ratio >= 1``."""
    q = exact(ratio)
    P = int(getattr(q, "numerator", q)) ** N
    Q = int(getattr(q, "denominator", 1)) ** N
    if P < Q:
        raise ArrangementError("ratio must be at least 1")
    k = max(P.bit_length() - Q.bit_length() - 1, 0)
    while (Q << (k + 1)) <= P:
        k += 1
    return k


def partition_by_scale(arr: Arrangement, N: int) -> list:
    """Index classes ``X_0..X_N`` by ``floor(N log2 lambda_i) mod (N + 1)``.

    Ratios are normalized to ``min lambda_i = 1`` first.
    """
    if N < 2:
        raise ArrangementError("N must be at least 2")
    classes = [[] for _ in range(N + 1)]
    if not len(arr):
        return classes
    m = min(arr.ratios)
    for idx, lam in enumerate(arr.ratios):
        classes[floor_n_log2(div(lam, m), N) % (N + 1)].append(idx)
    return classes


def sequence_factor(N: int) -> float:
    """The slab factor ``lambda'/2 = 1/(2 - 2**(1/N))`` reached by scale classes."""
    return 1.0 / (2.0 - 2.0 ** (1.0 / N))


@dataclass
class SequenceCertificate:
    arrangement: Arrangement
    N: int
    classes: list
    certificates: list
    report: VerificationReport
    reference_ratio: object = None

    def to_dict(self):
        return {
            "N": self.N,
            "classes": self.classes,
            "certificates": [c.to_dict() for c in self.certificates],
            "reference_ratio": serialize(self.reference_ratio),
            "report": self.report.to_dict(),
        }


def with_reference_ratio(arr: Arrangement) -> Arrangement:
    """Replace the last member's ratio by the one before it.

    The boundary hypothesis never involves the last ratio, so this keeps a
    valid sequence valid while giving the last member a controlled scale.
    """
    if len(arr) < 2:
        return arr
    members = list(arr.members)
    members[-1] = (members[-1].center, members[-2].ratio)
    return Arrangement(arr.body, members)


def build_sequence_certificate(arr: Arrangement, N: int) -> SequenceCertificate:
    """Per-scale-class certificates for a boundary sequence.

    Every in-class pair gets ``f = (phi, -alpha)`` with ``alpha`` taken from
    the open intervals of all members. Recorded per pair: the strict gap
    ``f(x_j - x_i) > 2 - 2**(1/N)``, ``|f(x_k)| <= 1`` for every member, and
    the ratio bound ``lambda_j / lambda_i < 2**(1/N)``.
    """
    if N < 2:
        raise ArrangementError("N must be at least 2")
    mode = get_mode()
    hyp = is_boundary_sequence(arr)
    if not hyp.passed:
        raise HypothesisViolated("is_boundary_sequence failed", hyp)
    reference = arr.members[-1].ratio if len(arr) else None
    work = normalize_ratios(with_reference_ratio(arr))
    classes = partition_by_scale(work, N)
    points = lift_points(work)

    report = VerificationReport("sequence_certificate", True, details={"n": len(work), "N": N})
    report.add_stage(hyp)
    gap_violations, unit_violations, ratio_violations = [], [], []
    in_class_unit_ok = True
    certificates = []
    for members in classes:
        member_set = set(members)
        functionals = {}
        for a, i in enumerate(members):
            for j in members[a + 1:]:
                f = _pair_functional(work, i, j, open_mode=True)
                functionals[(i, j)] = f
                hi, hj = work.members[i], work.members[j]
                gap = div(f.phi(hj.center) - f.alpha, hj.ratio) + div(f.alpha - f.phi(hi.center), hi.ratio)
                # gap > 2 - 2**(1/N)  <=>  2 - gap < 2**(1/N)
                if not lt_root_of_two(2 - gap, N):
                    if not mode.exact and 2 - gap < 2.0 ** (1.0 / N):
                        raise StrictnessViolation(f"pair ({i}, {j}): margin below tolerance")
                    gap_violations.append(Violation(i, j, residual=gap - (2 - 2.0 ** (1.0 / N))))
                for k, h in enumerate(work.members):
                    if not mode.le(abs(f.phi(h.center) - f.alpha), h.ratio):
                        unit_violations.append(Violation(i, j, k, residual=abs(f.phi(h.center) - f.alpha) - h.ratio))
                        if k in member_set:
                            in_class_unit_ok = False
                if not lt_root_of_two(div(hj.ratio, hi.ratio), N):
                    ratio_violations.append(Violation(i, j, residual=div(hj.ratio, hi.ratio)))
        sub_points = {k: points[k].vector for k in members}
        cls_report = check_slab_inequalities(
            sub_points,
            {key: f.coefficients for key, f in functionals.items()},
            factor=sequence_factor(N),
            N=N,
            name="in_class_slab_inequality",
        )
        certificates.append(
            LiftCertificate([points[k] for k in members], functionals, sequence_factor(N), cls_report, list(members), N)
        )
    report.add_stage(VerificationReport("strict_gap", not gap_violations, gap_violations))
    report.add_stage(
        VerificationReport(
            "unit_bound_all_members",
            not unit_violations,
            unit_violations,
            details={"in_class_only_pass": in_class_unit_ok},
        )
    )
    report.add_stage(VerificationReport("in_class_ratio_bound", not ratio_violations, ratio_violations))
    for cert in certificates:
        report.add_stage(cert.report)
    report.add_stage(check_height_witness({k: p.vector for k, p in enumerate(points)}))
    report.details["classes"] = [len(c) for c in classes]
    return SequenceCertificate(work, N, classes, certificates, report, reference)
