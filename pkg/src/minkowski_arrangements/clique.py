"""Maximum clique search on bitset adjacency.

Exact search is branch and bound with a greedy-colouring upper bound;
``greedy_clique`` is the randomized fallback for graphs too big to solve.
"""
from __future__ import annotations

import random


def _relabel(adj):
    n = len(adj)
    degree = [bin(a).count("1") for a in adj]
    order = sorted(range(n), key=lambda v: (-degree[v], v))
    pos = {v: p for p, v in enumerate(order)}
    new = []
    for v in order:
        bits = 0
        a = adj[v]
        while a:
            low = a & -a
            bits |= 1 << pos[low.bit_length() - 1]
            a ^= low
        new.append(bits)
    return order, new


def _colour_classes(P, adj):
    """Greedy colouring of the vertex set ``P``; returns ``[(v, colour)]`` by colour."""
    out = []
    uncoloured = P
    colour = 0
    while uncoloured:
        colour += 1
        Q = uncoloured
        while Q:
            low = Q & -Q
            v = low.bit_length() - 1
            out.append((v, colour))
            uncoloured &= ~low
            Q &= ~low & ~adj[v]
    return out


def max_clique(adj) -> list:
    """Exact maximum clique of the graph with bitset rows ``adj``.

    The result is deterministic; ties among maximum cliques are broken by
    the search order (degree-descending relabelling).
    """
    n = len(adj)
    if n == 0:
        return []
    order, radj = _relabel(adj)
    best: list = []

    def expand(R, P):
        nonlocal best
        for v, colour in reversed(_colour_classes(P, radj)):
            if len(R) + colour <= len(best):
                return
            R.append(v)
            nxt = P & radj[v]
            if nxt:
                expand(R, nxt)
            elif len(R) > len(best):
                best = R[:]
            R.pop()
            P &= ~(1 << v)

    expand([], (1 << n) - 1)
    return sorted(order[v] for v in best)


def greedy_clique(adj, seed: int = 0, restarts: int = 50) -> list:
    """Randomized greedy clique with single-vertex swap improvement. A lower bound only."""
    n = len(adj)
    if n == 0:
        return []
    rng = random.Random(seed)
    best: list = []
    for _ in range(restarts):
        clique = []
        cand = (1 << n) - 1
        while cand:
            members = [v for v in range(n) if cand >> v & 1]
            scores = [(bin(adj[v] & cand).count("1"), rng.random(), v) for v in members]
            v = max(scores)[2]
            clique.append(v)
            cand &= adj[v]
        improved = True
        while improved:
            improved = False
            mask = 0
            for v in clique:
                mask |= 1 << v
            for out in list(clique):
                # vertices adjacent to all of the clique except ``out``
                common = (1 << n) - 1
                for w in clique:
                    if w != out:
                        common &= adj[w]
                common &= ~mask
                for a in range(n):
                    if not common >> a & 1:
                        continue
                    extra = common & adj[a] & ~(1 << a)
                    if extra:
                        b = (extra & -extra).bit_length() - 1
                        clique = [w for w in clique if w != out] + [a, b]
                        improved = True
                        break
                if improved:
                    break
        if len(clique) > len(best):
            best = clique
    return sorted(best)


def is_clique(adj, vertices) -> bool:
    vs = list(vertices)
    return all(adj[a] >> b & 1 for i, a in enumerate(vs) for b in vs[i + 1:])
