"""Brute-force interval oracles over small grids, shared by the test files."""

import itertools
from math import comb

from cladder.grid_poset import GridPoint


def grid_vertices(p, q):
    return [GridPoint(x, y) for y in range(1, q + 1) for x in range(1, p + 1)]


def is_connected(S):
    S = set(S)
    seen, stack = set(), [next(iter(S))]
    while stack:
        v = stack.pop()
        if v in seen:
            continue
        seen.add(v)
        for dx, dy in ((1, 0), (-1, 0), (0, 1), (0, -1)):
            w = GridPoint(v.x + dx, v.y + dy)
            if w in S:
                stack.append(w)
    return seen == S


def is_convex(S):
    S = set(S)
    for u, v in itertools.product(S, S):
        if u.x <= v.x and u.y <= v.y:
            box = {GridPoint(x, y) for x in range(u.x, v.x + 1) for y in range(u.y, v.y + 1)}
            if not box <= S:
                return False
    return True


def brute_intervals(p, q):
    """Every connected convex vertex subset of the p x q grid."""
    V = grid_vertices(p, q)
    out = set()
    for mask in range(1, 1 << len(V)):
        S = frozenset(v for i, v in enumerate(V) if mask >> i & 1)
        if is_connected(S) and is_convex(S):
            out.add(S)
    return out


def brute_essential_count(S):
    """Number of distinct minimal or maximal vertices of S in the product order."""
    def below(u, v):
        return u != v and u.x <= v.x and u.y <= v.y

    mins = {v for v in S if not any(below(u, v) for u in S)}
    maxs = {v for v in S if not any(below(v, u) for u in S)}
    return len(mins | maxs)


def essential_closed_forms(p, q):
    """Closed-form sizes of the first three essential strata."""
    return {
        1: p * q,
        2: comb(p, 2) * q + comb(q, 2) * p + comb(p, 2) * comb(q, 2),
        3: p * q * (p * p - 1) * (q * q - 1) // 18,
    }
