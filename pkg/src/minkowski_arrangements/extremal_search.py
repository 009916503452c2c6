"""Extremal configurations and brute-force search oracles."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import clique
from .arrangement import (
    Arrangement,
    Homothet,
    is_boundary_sequence,
    is_minkowski,
    is_pairwise_intersecting,
    is_valid_pair,
)
from .bodies import SymmetricBody, cube
from .bounds import bound_halpha
from .equivalence import OUTSIDE_HULL, OUTSIDE_INTERIOR, verify_hull_exclusion
from .errors import ArrangementError, PoolTooLarge, SearchExhausted
from .numeric import exact, get_mode, sub, to_scalar
from .report import VerificationReport, Violation
from .volumetrics import TranslateConfig

DEFAULT_CAP = 3000
DEFAULT_EXACT_LIMIT = 400


def cube_arrangement(d: int) -> Arrangement:
    """``3**d`` unit translates of ``[-1, 1]**d`` centred at ``{-1, 0, 1}**d``."""
    if d < 1:
        raise ArrangementError("d must be positive")
    arr = Arrangement(cube(d), [(c, 1) for c in itertools.product((-1, 0, 1), repeat=d)])
    for check in (is_minkowski, is_pairwise_intersecting):
        rep = check(arr)
        if not rep.passed:
            raise ArrangementError(f"cube arrangement fails {rep.predicate}")
    return arr


def sharpness_config(D: int):
    """The ``2 * 3**(D-1)`` translates ``{t in {-2,0,2}**D : t1 >= t2}`` of the cube.

    Returns ``(config, report)``; the report checks non-overlap, that every
    translate meets ``K``, that ``o`` avoids the interior of the hull, and
    that the count equals the closed-form bound at ``alpha = 1``.
    """
    if D < 2:
        raise ArrangementError("D must be at least 2")
    K = cube(D)
    ts = [t for t in itertools.product((-2, 0, 2), repeat=D) if t[0] >= t[1]]
    config = TranslateConfig(K, 1, ts)
    mode = get_mode()
    overlap, far = [], []
    for i in range(len(ts)):
        for j in range(i + 1, len(ts)):
            if not mode.ge(K.norm(sub(ts[i], ts[j])), 2):
                overlap.append(Violation(i, j))
    for i, t in enumerate(ts):
        if not mode.le(K.norm(t), 2):
            far.append(Violation(i))
    report = VerificationReport("sharpness_config", True, details={"D": D, "n": len(ts)})
    report.add_stage(VerificationReport("non_overlap", not overlap, overlap))
    report.add_stage(VerificationReport("meets_body", not far, far))
    report.add_stage(verify_hull_exclusion(ts, OUTSIDE_INTERIOR))
    bound = bound_halpha(1, D).value
    report.add_stage(VerificationReport("count_equals_bound", len(ts) == bound, details={"n": len(ts), "bound": bound}))
    return config, report


# pentagon configuration ------------------------------------------------------

def pentagon_points(delta=Fraction(1, 20)) -> list:
    """Regular pentagon, circumradius 1, horizontal bottom edge with midpoint ``(0, delta)``."""
    inradius = math.cos(math.pi / 5)
    cy = float(delta) + inradius
    angles = [-math.pi / 2 - math.pi / 5 + 2 * math.pi * k / 5 for k in range(5)]
    return [(math.cos(a), cy + math.sin(a)) for a in angles]


def _certify_direction(points, i, j, u, factor):
    """Exact check of ``max_k |<x_k, u>| <= factor |<x_i - x_j, u>|``; returns the margin."""
    U = tuple(exact(c) for c in u)
    P = [tuple(exact(c) for c in p) for p in points]
    proj = [p[0] * U[0] + p[1] * U[1] for p in P]
    margin = exact(factor) * abs(proj[i] - proj[j]) - max(abs(v) for v in proj)
    return margin


def direction_search_2d(points: Sequence, i: int, j: int, factor=1, resolution: float = 1e-4):
    """Find ``u`` with ``max_k |<x_k, u>| <= factor |<x_i - x_j, u>|``.

    Scans the half circle at ``resolution``, refines the best window by
    ternary search, and certifies the winner exactly on the float inputs.
    Returns ``(u, margin)``; raises :class:`SearchExhausted` otherwise, with
    the best margin seen stored on the exception as ``best_margin``.
    """
    if i == j:
        raise ArrangementError("i and j must differ")
    P = np.asarray(points, dtype=float)
    if P.ndim != 2 or P.shape[1] != 2:
        raise ArrangementError("points must be 2-dimensional")
    fac = float(factor)

    def score(theta):
        th = np.atleast_1d(theta)
        U = np.stack([np.cos(th), np.sin(th)])
        proj = P @ U
        return fac * np.abs(proj[i] - proj[j]) - np.abs(proj).max(axis=0)

    thetas = np.arange(0.0, math.pi, resolution)
    s = score(thetas)
    order = np.argsort(-s)
    best = float(s[order[0]])
    for idx in order[:5]:
        if s[idx] < -1e-6:
            break
        lo, hi = thetas[idx] - resolution, thetas[idx] + resolution
        for _ in range(60):
            m1, m2 = lo + (hi - lo) / 3, hi - (hi - lo) / 3
            if score(m1)[0] < score(m2)[0]:
                lo = m1
            else:
                hi = m2
        for theta in ((lo + hi) / 2, thetas[idx]):
            u = (math.cos(theta), math.sin(theta))
            margin = _certify_direction(points, i, j, u, factor)
            if margin >= 0:
                return u, margin
            best = max(best, float(margin))
    exc = SearchExhausted(f"no direction found for pair ({i}, {j}) at resolution {resolution}")
    exc.best_margin = best
    raise exc


def pentagon_counterexample(delta=Fraction(1, 20)):
    """Check the pentagon configuration: ``o`` outside the hull, and every pair admits a direction.

    Returns ``(points, origin, report)``. Pairs without a certified direction
    are reported as violations, never suppressed.
    """
    pts = pentagon_points(delta)
    report = VerificationReport("pentagon_pairs", True, details={"delta": delta})
    report.add_stage(verify_hull_exclusion(pts, OUTSIDE_HULL))
    found, missing = {}, []
    for i, j in itertools.combinations(range(5), 2):
        try:
            u, margin = direction_search_2d(pts, i, j)
            found[f"{i},{j}"] = {"direction": list(u), "margin": float(margin)}
        except SearchExhausted as exc:
            missing.append(Violation(i, j, residual=-exc.best_margin, note=str(exc)))
    report.add_stage(VerificationReport("pair_directions", not missing, missing, details={"directions": found}))
    return pts, (0.0, 0.0), report


# clique oracle -------------------------------------------------------------------

@dataclass
class CandidatePool:
    body: SymmetricBody
    centers: list
    ratios: list
    cap: int = DEFAULT_CAP

    def candidates(self) -> list:
        mode = get_mode()
        seen, out = set(), []
        for c in self.centers:
            for r in self.ratios:
                h = Homothet(tuple(to_scalar(x, mode) for x in c), to_scalar(r, mode))
                if h not in seen:
                    seen.add(h)
                    out.append(h)
        if len(out) > self.cap:
            raise PoolTooLarge(f"{len(out)} candidates exceed the cap {self.cap}")
        return out


@dataclass
class CompatibilityGraph:
    vertices: list
    adjacency: list
    strict: bool = False

    @classmethod
    def build(cls, body, vertices, strict=False):
        n = len(vertices)
        adj = [0] * n
        for a in range(n):
            for b in range(a + 1, n):
                if is_valid_pair(body, vertices[a], vertices[b], strict):
                    adj[a] |= 1 << b
                    adj[b] |= 1 << a
        return cls(vertices, adj, strict)

    def edge_count(self) -> int:
        return sum(bin(a).count("1") for a in self.adjacency) // 2


@dataclass
class CliqueResult:
    arrangement: Arrangement
    size: int
    exact: bool
    report: VerificationReport
    indices: list = field(default_factory=list)


def grid_points(d: int, lo, hi, step) -> list:
    """All points of ``{lo, lo + step, ..., hi}**d`` (rational steps stay exact)."""
    lo, hi, step = to_scalar(lo), to_scalar(hi), to_scalar(step)
    axis = []
    x = lo
    while x <= hi:
        axis.append(x)
        x += step
    return list(itertools.product(axis, repeat=d))


def max_clique_arrangement(pool: CandidatePool, exact_limit: int = DEFAULT_EXACT_LIMIT, strict: bool = False, seed: int = 0) -> CliqueResult:
    """Largest valid arrangement drawn from ``pool``.

    Exact when the pool has at most ``exact_limit`` candidates, otherwise a
    greedy lower bound. The result is re-verified by the arrangement
    predicates (interior intersection when ``strict``).
    """
    vertices = pool.candidates()
    graph = CompatibilityGraph.build(pool.body, vertices, strict)
    is_exact = len(vertices) <= exact_limit
    chosen = clique.max_clique(graph.adjacency) if is_exact else clique.greedy_clique(graph.adjacency, seed)
    arr = Arrangement(pool.body, [vertices[v] for v in chosen])
    report = VerificationReport(
        "max_clique",
        True,
        details={
            "candidates": len(vertices),
            "edges": graph.edge_count(),
            "size": len(chosen),
            "exact": is_exact,
            "strict_intersection": strict,
        },
    )
    if not is_exact:
        report.details["note"] = "lower bound only"
    report.add_stage(is_minkowski(arr))
    report.add_stage(is_pairwise_intersecting(arr, strict=strict))
    return CliqueResult(arr, len(chosen), is_exact, report, chosen)


def interval_pool_oracle(centers=None, ratios=None) -> VerificationReport:
    """Largest 1-D arrangement of the interval pool under both intersection conventions."""
    if centers is None:
        centers = [(Fraction(k, 2),) for k in range(-4, 5)]
    if ratios is None:
        ratios = [Fraction(1, 2), Fraction(3, 4), 1]
    pool = CandidatePool(cube(1), centers, ratios)
    closed = max_clique_arrangement(pool, strict=False)
    strict = max_clique_arrangement(pool, strict=True)
    claimed = 2
    report = VerificationReport(
        "interval_pool",
        closed.report.passed and strict.report.passed,
        details={
            "closed_max": closed.size,
            "strict_max": strict.size,
            "claimed_max": claimed,
            "claim_holds_closed": closed.size <= claimed,
            "claim_holds_strict": strict.size <= claimed,
            "closed_witness": [h.to_dict() for h in closed.arrangement],
            "strict_witness": [h.to_dict() for h in strict.arrangement],
        },
    )
    report.add_stage(closed.report)
    report.add_stage(strict.report)
    return report


# random generators ---------------------------------------------------------------

def sample_arrangement(body: SymmetricBody, n_target: int, seed: int, centers=None, ratios=None, attempts: int = 2000) -> Arrangement:
    """Rejection-sample a valid (Minkowski, pairwise intersecting) arrangement.

    Random grid candidates are accepted when compatible with every member
    accepted so far.
    """
    rng = np.random.default_rng(seed)
    if centers is None:
        centers = grid_points(body.dim, -2, 2, Fraction(1, 2))
    if ratios is None:
        ratios = [Fraction(1, 2), Fraction(3, 4), 1, Fraction(3, 2)]
    mode = get_mode()
    members: list = []
    for _ in range(attempts):
        if len(members) >= n_target:
            break
        c = centers[rng.integers(len(centers))]
        r = ratios[rng.integers(len(ratios))]
        h = Homothet(tuple(to_scalar(x, mode) for x in c), to_scalar(r, mode))
        if all(is_valid_pair(body, h, m) for m in members):
            members.append(h)
    return Arrangement(body, members)


def greedy_boundary_sequence(
    body: SymmetricBody,
    d: int,
    length_target: int,
    seed: int,
    step=Fraction(1, 2),
    radius=4,
    ratios=None,
    restarts: int = 10,
    attempts: int = 100_000,
) -> Arrangement:
    """Randomized greedy search for a long boundary sequence on a rational grid.

    Each new center is drawn from the grid points lying on the boundary of
    every earlier member; among the candidates (at most ``attempts`` pair
    evaluations per step) the choice of center and ratio that keeps the most
    grid points available for later members wins, ties broken at random.
    """
    if d > 3:
        raise ArrangementError("the generator supports d <= 3")
    if body.dim != d:
        raise ArrangementError("body dimension must equal d")
    rng = np.random.default_rng(seed)
    mode = get_mode()
    if ratios is None:
        ratios = [step * m for m in range(1, 7)]
    ratios = [to_scalar(r, mode) for r in ratios]
    grid = [tuple(to_scalar(c, mode) for c in p) for p in grid_points(d, -radius, radius, step)]
    origin = tuple(to_scalar(0, mode) for _ in range(d))

    def on_boundary(p, center, ratio):
        return mode.eq(body.norm(sub(p, center)), ratio)

    best: list = []
    for _ in range(max(restarts, 1)):
        if length_target <= 1:
            best = [(origin, ratios[rng.integers(len(ratios))])]
            break
        lam0 = ratios[rng.integers(len(ratios))]
        seq = [(origin, lam0)]
        survivors = [p for p in grid if p != origin and on_boundary(p, origin, lam0)]
        while survivors and len(seq) < length_target:
            budget = attempts
            scored = []
            for idx in rng.permutation(len(survivors)):
                p = survivors[idx]
                for lam in ratios:
                    if budget <= 0:
                        break
                    nxt = [q for q in survivors if q != p and on_boundary(q, p, lam)]
                    budget -= len(survivors)
                    scored.append((len(nxt), rng.random(), p, lam, nxt))
                if budget <= 0:
                    break
            if not scored:
                break
            count, _, p, lam, nxt = max(scored, key=lambda s: (s[0], s[1]))
            seq.append((p, lam))
            survivors = nxt
        if len(seq) > len(best):
            best = seq
        if len(best) >= length_target:
            break
    arr = Arrangement(body, best)
    if not is_boundary_sequence(arr).passed:
        raise ArrangementError("generator produced an invalid sequence")
    return arr
