"""Slice profiles, the ratio-of-integral monotonicity check and the volume identities.

Slices are taken by the level sets ``h(x) = {p : <p, v> = x}`` of a
direction ``v`` that need not be a unit vector. The *profile* at level ``x``
is the density of the push-forward of Lebesgue measure under ``p -> <p, v>``,
i.e. ``vol_{D-1}(body & h(x)) / |v|``; its integral over all levels is the
body's volume. For a unit ``v`` it is the plain section volume.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .bodies import SymmetricBody
from .bounds import bound_halpha
from .errors import ArrangementError, HypothesisViolated, PreconditionViolated
from .numeric import div, dot, exact, get_mode, sub
from .report import VerificationReport, Violation

DEFAULT_SAMPLES = 100_000


# exact box path ------------------------------------------------------------

def _box_bounds(body, alpha, t):
    half = body.box_half_widths()
    if half is None:
        return None
    return [(tc - alpha * w, tc + alpha * w) for tc, w in zip(t, half)]


def _box_terms(bounds, v):
    """Reduce ``{p in box : <v, p> <= s}`` to a simplex-corner sum.

    Returns ``(shift, coeffs, widths, free_measure)``: the set equals
    ``{q in prod [0, w_k] : sum c_k q_k <= s - shift} x (free dims)``.
    """
    shift = 0
    coeffs, widths = [], []
    free = 1
    for (lo, hi), vk in zip(bounds, v):
        w = hi - lo
        if vk == 0:
            free *= w
            continue
        if vk > 0:
            shift += vk * lo
        else:
            shift += vk * hi
        coeffs.append(abs(vk))
        widths.append(w)
    if not coeffs:
        raise ArrangementError("direction must be non-zero")
    return shift, coeffs, widths, free


def _corner_sum(s, coeffs, widths, power):
    total = 0
    m = len(coeffs)
    for mask in itertools.product((0, 1), repeat=m):
        z = s - sum(c * w for c, w, b in zip(coeffs, widths, mask) if b)
        if z > 0:
            total += -z**power if sum(mask) % 2 else z**power
    return total


def box_cdf(bounds, v, s):
    """Exact ``vol{p in box : <v, p> <= s}`` (rational inputs give rational output)."""
    shift, coeffs, widths, free = _box_terms(bounds, v)
    m = len(coeffs)
    denom = math.factorial(m)
    for c in coeffs:
        denom *= c
    return div(free * _corner_sum(s - shift, coeffs, widths, m), denom)


def box_profile(bounds, v, x):
    """Exact profile of a box at level ``x`` (derivative of :func:`box_cdf`)."""
    shift, coeffs, widths, free = _box_terms(bounds, v)
    m = len(coeffs)
    s = x - shift
    if m == 1:
        # piecewise constant; endpoints take the one-sided average
        top = coeffs[0] * widths[0]
        if s == 0 or s == top:
            return div(free, 2 * coeffs[0])
        return div(free, coeffs[0]) if 0 < s < top else 0
    denom = math.factorial(m - 1)
    for c in coeffs:
        denom *= c
    return div(free * _corner_sum(s, coeffs, widths, m - 1), denom)


def box_slab_volume(bounds, v, a, b):
    """Exact ``vol{p in box : a <= <v, p> <= b}``."""
    if b <= a:
        return 0
    return box_cdf(bounds, v, b) - box_cdf(bounds, v, a)


# Monte Carlo path ------------------------------------------------------------

def _bounding_half_widths(body: SymmetricBody):
    half = body.box_half_widths()
    if half is not None:
        return np.array([float(w) for w in half])
    eye = np.eye(body.dim)
    return np.array([float(body.dual_norm(tuple(row))) for row in eye])


def _gauge_batch(body: SymmetricBody, P: np.ndarray) -> np.ndarray:
    normals = getattr(body, "normals", None)
    if normals is not None:
        A = np.array(normals, dtype=float)
        return np.abs(P @ A.T).max(axis=1)
    return np.linalg.norm(P, ord=float(body.p), axis=1)


@dataclass
class SliceEstimate:
    value: object
    stderr: float
    samples: int
    exact: bool


def slice_volume(body: SymmetricBody, alpha, t, v, x, samples: int = DEFAULT_SAMPLES, seed: Optional[int] = None) -> SliceEstimate:
    """Profile of ``alpha K + t`` at level ``x`` of ``<., v>``.

    Exact for axis-aligned boxes. Otherwise a Monte Carlo estimate over a
    box bounding the ``(D-1)``-dimensional section; ``seed`` is then required.
    """
    D = body.dim
    if D < 2:
        raise ArrangementError("slices need D >= 2")
    bounds = _box_bounds(body, alpha, t)
    if bounds is not None:
        return SliceEstimate(box_profile(bounds, v, x), 0.0, 0, True)
    if seed is None:
        raise ArrangementError("a seed is required for Monte Carlo estimates")
    rng = np.random.default_rng(seed)
    vf = np.asarray(v, dtype=float)
    vnorm = float(np.linalg.norm(vf))
    u = vf / vnorm
    # orthonormal basis of the hyperplane
    q, _ = np.linalg.qr(np.column_stack([u, np.eye(D)]))
    basis = q[:, 1:D]
    tf = np.asarray(t, dtype=float)
    base = tf + (float(x) - tf @ vf) / vnorm**2 * vf
    radius = float(alpha) * float(np.linalg.norm(_bounding_half_widths(body)))
    S = rng.uniform(-radius, radius, size=(samples, D - 1))
    P = base + S @ basis.T
    inside = _gauge_batch(body, (P - tf) / float(alpha)) <= 1.0
    box_vol = (2 * radius) ** (D - 1)
    frac = inside.mean()
    est = box_vol * frac / vnorm
    err = box_vol * math.sqrt(frac * (1 - frac) / samples) / vnorm
    return SliceEstimate(est, err, samples, False)


# monotonicity of F(y) = int_0^y f / f(y) ------------------------------------

def _cumulative_simpson(f, ys):
    """Cumulative integrals at ``ys`` (with ``ys[0] = 0``), Simpson rule on each cell."""
    out = [0.0]
    total = 0.0
    for a, b in zip(ys[:-1], ys[1:]):
        total += (b - a) / 6.0 * (f(a) + 4.0 * f((a + b) / 2.0) + f(b))
        out.append(total)
    return out


def check_lemma_monotonicity(
    f: Callable[[float], float],
    k: float,
    grid_size: int = 1000,
    integral: Optional[Callable[[float], float]] = None,
    tolerance: float = 1e-9,
) -> VerificationReport:
    """Check that ``F(y) = (1/f(y)) int_0^y f`` strictly increases on a grid of ``(0, 1]``.

    Hypotheses validated first: ``f(0) >= 0``, ``f > 0`` and non-decreasing on
    ``(0, 1]``, and ``f**(1/k)`` concave (second differences ``<= tolerance``).
    ``integral``, when given, replaces the Simpson rule by an antiderivative.
    """
    ys = [i / grid_size for i in range(grid_size + 1)]
    vals = [float(f(y)) for y in ys]
    problems = []
    if vals[0] < 0:
        problems.append("f(0) < 0")
    if any(v <= 0 for v in vals[1:]):
        problems.append("f not positive on (0, 1]")
    scale_ = max(abs(v) for v in vals) or 1.0
    if any(b < a - tolerance * scale_ for a, b in zip(vals[:-1], vals[1:])):
        problems.append("f not monotone increasing")
    g = [max(v, 0.0) ** (1.0 / k) for v in vals]
    gscale = max(g) or 1.0
    second = [g[i - 1] - 2 * g[i] + g[i + 1] for i in range(1, len(g) - 1)]
    if any(s > tolerance * gscale for s in second):
        problems.append("f**(1/k) not concave")
    if problems:
        raise HypothesisViolated("; ".join(problems))

    if integral is not None:
        cum = [integral(y) - integral(0.0) for y in ys]
    else:
        cum = _cumulative_simpson(lambda y: float(f(y)), ys)
    F = [c / v for c, v in zip(cum[1:], vals[1:])]
    violations = []
    min_step = math.inf
    for i in range(1, len(F)):
        step = F[i] - F[i - 1]
        min_step = min(min_step, step)
        if not step > 0:
            violations.append(Violation(i, residual=step))
    return VerificationReport(
        "lemma_monotonicity",
        not violations,
        violations,
        details={"grid_size": grid_size, "min_step": min_step, "k": k},
    )


# volume identities -------------------------------------------------------------

@dataclass
class TranslateConfig:
    """Translates ``alpha K + t_i`` of a body ``K`` (the input of the volume check)."""

    body: SymmetricBody
    alpha: object
    translations: list

    def to_dict(self):
        from .numeric import serialize

        return {"body": self.body.to_dict(), "alpha": serialize(self.alpha), "t": [serialize(list(t)) for t in self.translations]}

    @classmethod
    def from_dict(cls, data):
        from .bodies import body_from_dict
        from .numeric import to_scalar

        return cls(body_from_dict(data["body"]), to_scalar(data["alpha"]), [tuple(to_scalar(c) for c in t) for t in data["t"]])


def _mc_slab_integral(body, alpha, ts, v, a, b, samples, seed):
    """Monte Carlo ``vol((union of alpha K + t_i) & {a <= <p, v> <= b})``."""
    rng = np.random.default_rng(seed)
    half = float(alpha) * _bounding_half_widths(body)
    T = np.array(ts, dtype=float)
    lo = T.min(axis=0) - half
    hi = T.max(axis=0) + half
    P = rng.uniform(lo, hi, size=(samples, body.dim))
    level = P @ np.asarray(v, dtype=float)
    hit = np.zeros(samples, dtype=bool)
    for t in T:
        hit |= _gauge_batch(body, (P - t) / float(alpha)) <= 1.0
    hit &= (level >= float(a)) & (level <= float(b))
    vol = float(np.prod(hi - lo))
    frac = hit.mean()
    return vol * frac, vol * math.sqrt(frac * (1 - frac) / samples)


def check_volume_identities(
    config: TranslateConfig,
    v,
    method: str = "auto",
    samples: int = DEFAULT_SAMPLES,
    seed: Optional[int] = None,
    rel_tol: float = 0.01,
) -> VerificationReport:
    """Check the volume bookkeeping behind the ``halpha`` bound on one configuration.

    ``v`` is rescaled so that ``h(-1), h(1)`` support ``K``. Checked:

    (a) the union's profile integrates to ``n alpha**D vol(K)`` over ``[-alpha, 1 + 2 alpha]``;
    (b) its part over ``[0, 1 + 2 alpha]`` is at most ``(1 + 2 alpha)**D vol(K) / 2``;
    (c) each translate lies between ``h(-alpha)`` and ``h(1 + 2 alpha)`` and inside ``(1 + 2 alpha) K``;
    (d) its part over ``[-alpha, 0]`` is at most ``alpha (1 + 2 alpha)**(D-1) vol(K) / 2``;
    and the count against the closed-form bound.
    """
    mode = get_mode()
    body, alpha, ts = config.body, config.alpha, [tuple(t) for t in config.translations]
    D, n = body.dim, len(ts)
    if D < 2:
        raise PreconditionViolated("D >= 2 required")
    if not alpha > 0:
        raise PreconditionViolated("alpha must be positive")
    boxed = body.box_half_widths() is not None
    if method == "auto":
        method = "exact" if boxed else "mc"
    if method == "exact" and not boxed:
        raise PreconditionViolated("exact slicing needs an axis-aligned box")
    if method == "mc" and seed is None:
        raise PreconditionViolated("Monte Carlo checks need a seed")
    exact_path = method == "exact"

    if exact_path:
        v = tuple(exact(c) for c in v)
        alpha = exact(alpha)
        ts = [tuple(exact(c) for c in t) for t in ts]
    h = body.dual_norm(v)
    if not h > 0:
        raise PreconditionViolated("direction must be non-zero")
    v = tuple(div(c, h) for c in v)

    # hypotheses of the bound
    pre = []
    for i in range(n):
        for j in range(i + 1, n):
            if not mode.ge(body.norm(sub(ts[i], ts[j])), 2 * alpha):
                pre.append(f"translates {i} and {j} overlap")
    for i, t in enumerate(ts):
        if not mode.le(body.norm(t), 1 + alpha):
            pre.append(f"translate {i} misses K")
        if not mode.ge(dot(t, v), 0):
            pre.append(f"translate {i} has <t, v> < 0")
    if pre:
        raise PreconditionViolated("; ".join(pre))

    volK = body.volume()
    if not exact_path:
        volK = float(volK)
    top = 1 + 2 * alpha
    report = VerificationReport("volume_identities", True, details={"n": n, "D": D, "alpha": alpha, "method": method, "direction": list(v)})

    containment = []
    for i, t in enumerate(ts):
        level = dot(t, v)
        if not (mode.ge(level - alpha, -alpha) and mode.le(level + alpha, top)):
            containment.append(Violation(i, note="outside the slab"))
        if not mode.le(body.norm(t) + alpha, top):
            containment.append(Violation(i, note="not inside (1 + 2 alpha) K"))
    report.add_stage(VerificationReport("containment", not containment, containment))

    if exact_path:
        boxes = [_box_bounds(body, alpha, t) for t in ts]

        def integral(a, b):
            return sum(box_slab_volume(bx, v, a, b) for bx in boxes)

        whole, upper, lower = integral(-alpha, top), integral(0, top), integral(-alpha, 0)
        errs = (0, 0, 0)
    else:
        whole, e1 = _mc_slab_integral(body, alpha, ts, v, -alpha, top, samples, seed)
        upper, e2 = _mc_slab_integral(body, alpha, ts, v, 0, top, samples, seed + 1)
        lower, e3 = _mc_slab_integral(body, alpha, ts, v, -alpha, 0, samples, seed + 2)
        errs = (e1, e2, e3)

    target = n * alpha**D * volK
    if exact_path:
        ok_a = whole == target
    else:
        ok_a = abs(whole - target) <= rel_tol * abs(target)
    report.add_stage(
        VerificationReport(
            "whole_integral", ok_a, [] if ok_a else [Violation(0, residual=whole - target)],
            details={"integral": whole, "expected": target, "stderr": errs[0]},
        )
    )
    cap_b = top**D * volK / 2
    slack_b = 0 if exact_path else rel_tol * abs(cap_b)
    ok_b = upper <= cap_b + slack_b
    report.add_stage(VerificationReport("upper_part", ok_b, details={"integral": upper, "bound": cap_b, "stderr": errs[1]}))
    cap_d = alpha * top ** (D - 1) * volK / 2
    slack_d = 0 if exact_path else rel_tol * abs(cap_d)
    ok_d = lower <= cap_d + slack_d
    report.add_stage(VerificationReport("lower_part", ok_d, details={"integral": lower, "bound": cap_d, "stderr": errs[2]}))

    bound = bound_halpha(alpha, D).value
    report.add_stage(VerificationReport("count_bound", n <= bound, details={"n": n, "bound": bound}))
    report.details["relative_error"] = 0.0 if exact_path else abs(whole - target) / abs(target)
    return report
