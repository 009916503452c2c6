"""Closed-form bounds and the composed certificate pipelines."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .arrangement import Arrangement, is_boundary_sequence, is_minkowski, is_pairwise_intersecting
from .errors import ArrangementError
from .lifting import build_sequence_certificate, lift_arrangement, sequence_factor
from .numeric import div, get_mode, root_of_two_lower, to_scalar
from .equivalence import points_to_packing
from .report import VerificationReport

MINKOWSKI = "minkowski_2_3d"
HALPHA = "halpha"
SEQUENCE = "sequence_N"


@dataclass(frozen=True)
class BoundResult:
    value: object
    formula_id: str
    parameters: dict = field(default_factory=dict)

    def to_dict(self):
        from .numeric import serialize

        return {"value": serialize(self.value), "formula": self.formula_id, "parameters": {k: serialize(v) for k, v in self.parameters.items()}}


def bound_minkowski(d: int) -> BoundResult:
    """Largest pairwise intersecting Minkowski arrangement: ``2 * 3**d``."""
    if d < 1:
        raise ArrangementError("d must be positive")
    return BoundResult(2 * 3**d, MINKOWSKI, {"d": d})


def bound_halpha(alpha, D: int) -> BoundResult:
    """``(1 + 2a)**(D-1) * (1 + 3a) / (2 a**D)`` translates of ``aK`` meeting ``K``."""
    if D < 2:
        raise ArrangementError("D must be at least 2")
    alpha = to_scalar(alpha) if not isinstance(alpha, float) else alpha
    if not alpha > 0:
        raise ArrangementError("alpha must be positive")
    value = div((1 + 2 * alpha) ** (D - 1) * (1 + 3 * alpha), 2 * alpha**D)
    return BoundResult(value, HALPHA, {"alpha": alpha, "D": D})


def sequence_lambda(N: int) -> float:
    return 2.0 / (2.0 - 2.0 ** (1.0 / N))


def bound_sequence(d: int, N: int) -> BoundResult:
    """``(N + 1)(1 + l/2)(1 + l)**d`` with ``l = 2 / (2 - 2**(1/N))``.

    The per-class factor is cross-checked against :func:`bound_halpha` with
    ``alpha = 2**(1 - 1/N) - 1``.
    """
    if N < 2:
        raise ArrangementError("N must be at least 2")
    if d < 1:
        raise ArrangementError("d must be positive")
    lam = sequence_lambda(N)
    per_class = (1 + lam / 2) * (1 + lam) ** d
    alpha = 2.0 ** (1 - 1.0 / N) - 1
    cross = float(bound_halpha(alpha, d + 1).value)
    if abs(cross - per_class) > 1e-9 * per_class:
        raise ArrangementError(f"per-class bound mismatch: {per_class} vs {cross}")
    return BoundResult((N + 1) * per_class, SEQUENCE, {"d": d, "N": N, "lambda": lam, "per_class": per_class})


def auto_N(d: int) -> int:
    """Minimizer of :func:`bound_sequence` over ``N in [2, 4d]``."""
    candidates = range(2, max(4 * d, 2) + 1)
    return min(candidates, key=lambda N: bound_sequence(d, N).value)


def pipeline_theorem1(arr: Arrangement) -> VerificationReport:
    """Hypotheses -> lift -> packing with ``lambda = 2`` -> size bound ``2 * 3**d``."""
    report = VerificationReport("theorem1_pipeline", True, details={"n": len(arr), "d": arr.dim})
    hyp = VerificationReport("hypotheses", True)
    hyp.add_stage(is_minkowski(arr))
    hyp.add_stage(is_pairwise_intersecting(arr))
    report.add_stage(hyp)
    if not hyp.passed:
        report.details["failed_stage"] = "hypotheses"
        return report
    try:
        cert = lift_arrangement(arr)
    except ArrangementError as exc:
        report.add_stage(VerificationReport("lift", False, details={"error": str(exc)}))
        report.details["failed_stage"] = "lift"
        return report
    lift_report = VerificationReport("lift", cert.report.passed, details={"pairs": len(cert.functionals)})
    lift_report.stages = [cert.report]
    report.add_stage(lift_report)
    if len(arr) >= 1:
        try:
            packing = points_to_packing(cert.point_map(), cert.coefficient_map(), 2)
            report.add_stage(packing.report)
        except ArrangementError as exc:
            report.add_stage(VerificationReport("packing", False, details={"error": str(exc)}))
            report.details["failed_stage"] = "packing"
            return report
    bound = bound_halpha(1, arr.dim + 1)
    size_ok = len(arr) <= bound.value
    report.add_stage(VerificationReport("size_bound", size_ok, details={"n": len(arr), "bound": bound.value}))
    report.details["bound"] = bound.value
    if not report.passed:
        report.details["failed_stage"] = report.failed_stage()
    return report


def _packing_lambda(N: int):
    """A rational ``>= 2/(2 - 2**(1/N))`` in rational mode, the float value otherwise."""
    if get_mode().exact:
        return Fraction(2) / (2 - root_of_two_lower(N))
    return sequence_lambda(N)


def pipeline_theorem2(arr: Arrangement, N="auto") -> VerificationReport:
    """Boundary sequence -> scale classes -> per-class packings -> length bound."""
    d = arr.dim
    if N == "auto":
        N = auto_N(d)
    N = int(N)
    report = VerificationReport("theorem2_pipeline", True, details={"n": len(arr), "d": d, "N": N})
    hyp = is_boundary_sequence(arr)
    report.add_stage(hyp)
    if not hyp.passed:
        report.details["failed_stage"] = "hypotheses"
        return report
    if len(arr) == 0:
        return report
    try:
        seq = build_sequence_certificate(arr, N)
    except ArrangementError as exc:
        report.add_stage(VerificationReport("sequence_certificate", False, details={"error": str(exc)}))
        report.details["failed_stage"] = "sequence_certificate"
        return report
    report.add_stage(seq.report)
    report.details["classes"] = [list(c) for c in seq.classes]
    lam = _packing_lambda(N)
    class_bound = bound_halpha(2.0 ** (1 - 1.0 / N) - 1, d + 1).value
    class_reports = VerificationReport("class_packings", True, details={"lambda": lam, "class_bound": class_bound})
    for m, cert in enumerate(seq.certificates):
        size_ok = len(cert.indices) <= class_bound
        stage = VerificationReport(f"class_{m}", size_ok, details={"size": len(cert.indices)})
        if len(cert.indices) >= 1:
            try:
                packing = points_to_packing(cert.point_map(), cert.coefficient_map(), lam)
                stage.add_stage(packing.report)
            except ArrangementError as exc:
                stage.add_stage(VerificationReport("packing", False, details={"error": str(exc)}))
        class_reports.add_stage(stage)
    report.add_stage(class_reports)
    total = bound_sequence(d, N)
    report.add_stage(VerificationReport("length_bound", len(arr) <= total.value, details={"n": len(arr), "bound": total.value}))
    report.details["bound"] = total.value
    report.details["factor"] = sequence_factor(N)
    if not report.passed:
        report.details["failed_stage"] = report.failed_stage()
    return report
