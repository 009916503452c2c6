"""Independent re-verification of lift certificates.

Works only on raw coordinate tuples and coefficient tuples; it deliberately
does not import the builders in :mod:`lifting` or :mod:`equivalence`.
"""
from __future__ import annotations

from fractions import Fraction

from .numeric import get_mode
from .report import VerificationReport, Violation


def _eval(coeffs, x):
    total = 0
    for c, v in zip(coeffs, x):
        if c:
            total += c * v
    return total


def _within(value, gap, factor, N, mode):
    """Decide ``value <= factor * gap`` where ``factor`` may be ``1/(2 - 2**(1/N))``."""
    if N is None:
        return mode.le(value, factor * gap)
    if mode.exact:
        # value * (2 - s) <= gap  <=>  2 value - gap <= value * s,  s = 2**(1/N)
        lhs = 2 * value - gap
        if lhs <= 0:
            return True
        if value <= 0:
            return False
        return Fraction(lhs) ** N <= 2 * Fraction(value) ** N
    return value * (2.0 - 2.0 ** (1.0 / N)) <= gap + mode.tolerance


def check_slab_inequalities(points, functionals, factor=1, N=None, name="slab_inequalities"):
    """Verify ``|f_ij(x_k)| <= factor * |f_ij(x_i) - f_ij(x_j)|`` for every triple.

    ``points`` maps an index to a coordinate tuple; ``functionals`` maps
    ``(i, j)`` to a coefficient tuple. When ``N`` is given, ``factor`` is
    taken to be exactly ``1/(2 - 2**(1/N))``.
    """
    mode = get_mode()
    points = dict(points) if not isinstance(points, dict) else points
    violations = []
    checked = 0
    for (i, j), coeffs in sorted(functionals.items()):
        if all(c == 0 for c in coeffs):
            violations.append(Violation(i, j, note="zero functional"))
            continue
        values = {k: _eval(coeffs, x) for k, x in points.items()}
        gap = abs(values[i] - values[j])
        for k, val in values.items():
            checked += 1
            if not _within(abs(val), gap, factor, N, mode):
                violations.append(Violation(i, j, k, residual=abs(val) - factor * gap))
    return VerificationReport(name, not violations, violations, {"triples": checked})


def check_height_witness(points, name="origin_outside_hull"):
    """``o`` is outside the hull when the last coordinate is positive everywhere."""
    violations = [Violation(k, residual=x[-1]) for k, x in dict(points).items() if not x[-1] > 0]
    return VerificationReport(name, not violations, violations, {"witness": "last coordinate"})
