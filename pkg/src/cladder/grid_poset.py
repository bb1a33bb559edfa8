"""Staircase intervals of the equi-oriented grid G_{p,q} and their poset.

Vertices are ``GridPoint(x, y)`` with 1-based column ``x`` and row ``y``.
Arrows point right ``(x, y) -> (x+1, y)`` and up ``(x, y) -> (x, y+1)``.
A commutative ladder CL(n) is the grid with ``p = n`` and ``q = 2``; row 1 is
the lower row and row 2 the upper row.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import comb
from typing import Iterable, NamedTuple, Sequence

import numpy as np

DEFAULT_CAPACITY = 2_000_000


class CapacityError(RuntimeError):
    """An enumeration would exceed the configured size limit."""


class ConvexHullError(ValueError):
    pass


class JoinError(ValueError):
    pass


class GridPoint(NamedTuple):
    x: int
    y: int

    def __str__(self) -> str:
        return f"({self.x},{self.y})"


def grid_leq(u: GridPoint, v: GridPoint) -> bool:
    """True iff a monotone path u -> v exists."""
    return u[0] <= v[0] and u[1] <= v[1]


@dataclass(frozen=True, order=True)
class StaircaseInterval:
    """``rows = (s, t)`` and ``spans[i - s] = (b_i, d_i)`` for rows s..t."""

    rows: tuple[int, int]
    spans: tuple[tuple[int, int], ...]

    def __post_init__(self):
        s, t = self.rows
        if not 1 <= s <= t or len(self.spans) != t - s + 1:
            raise ValueError(f"bad row range {self.rows} for {len(self.spans)} spans")
        for b, d in self.spans:
            if not 1 <= b <= d:
                raise ValueError(f"bad span {(b, d)}")
        for (b0, d0), (b1, d1) in zip(self.spans, self.spans[1:]):
            if not (b1 <= b0 <= d1 <= d0):
                raise ValueError(f"staircase condition violated: {self.spans}")

    @classmethod
    def from_rows(cls, spans_by_row: dict[int, tuple[int, int]]) -> "StaircaseInterval":
        rows = sorted(spans_by_row)
        if rows != list(range(rows[0], rows[-1] + 1)):
            raise ValueError("rows must be contiguous")
        return cls((rows[0], rows[-1]), tuple(tuple(spans_by_row[r]) for r in rows))

    def span(self, row: int) -> tuple[int, int] | None:
        s, t = self.rows
        if s <= row <= t:
            return self.spans[row - s]
        return None

    @cached_property
    def vertices(self) -> frozenset[GridPoint]:
        s, _ = self.rows
        return frozenset(
            GridPoint(x, s + i) for i, (b, d) in enumerate(self.spans) for x in range(b, d + 1)
        )

    def __contains__(self, v) -> bool:
        sp = self.span(v[1])
        return sp is not None and sp[0] <= v[0] <= sp[1]

    def __len__(self) -> int:
        return sum(d - b + 1 for b, d in self.spans)

    def fits(self, p: int, q: int) -> bool:
        return self.rows[1] <= q and all(d <= p for _, d in self.spans)

    def to_json(self) -> dict:
        return {"rows": list(self.rows), "spans": [list(sp) for sp in self.spans]}

    @classmethod
    def from_json(cls, obj: dict) -> "StaircaseInterval":
        return cls(tuple(obj["rows"]), tuple(tuple(sp) for sp in obj["spans"]))

    def __str__(self) -> str:
        s, _ = self.rows
        parts = [f"[{b},{d}]_{s + i}" for i, (b, d) in enumerate(self.spans)]
        return " ⊔ ".join(reversed(parts))

    __repr__ = __str__


# ladder shorthands: row 1 lower, row 2 upper


def lower(b: int, d: int) -> StaircaseInterval:
    return StaircaseInterval((1, 1), ((b, d),))


def upper(b: int, d: int) -> StaircaseInterval:
    return StaircaseInterval((2, 2), ((b, d),))


def two_row(b2: int, d2: int, b1: int, d1: int) -> StaircaseInterval:
    """The ladder interval [b2,d2]_2 ⊔ [b1,d1]_1."""
    return StaircaseInterval((1, 2), ((b1, d1), (b2, d2)))


def rectangle(u: GridPoint, v: GridPoint) -> StaircaseInterval:
    """The full rectangle with corners u <= v."""
    if not grid_leq(u, v):
        raise ValueError(f"{u} is not below {v}")
    return StaircaseInterval((u[1], v[1]), tuple((u[0], v[0]) for _ in range(u[1], v[1] + 1)))


def _spans_below(b: int, d: int) -> Iterable[tuple[int, int]]:
    # spans (b', d') allowed in the next row up: b' <= b <= d' <= d
    for b2 in range(1, b + 1):
        for d2 in range(b, d + 1):
            yield (b2, d2)


def enumerate_intervals(p: int, q: int, capacity: int = DEFAULT_CAPACITY) -> list[StaircaseInterval]:
    if p < 1 or q < 1:
        raise ValueError("grid dimensions must be positive")
    total = count_intervals(p, q)
    if total > capacity:
        raise CapacityError(f"{total} intervals exceed capacity {capacity}")
    out: list[StaircaseInterval] = []

    def extend(s: int, t: int, spans: list[tuple[int, int]]):
        if len(spans) == t - s + 1:
            out.append(StaircaseInterval((s, t), tuple(spans)))
            return
        b, d = spans[-1]
        for sp in _spans_below(b, d):
            spans.append(sp)
            extend(s, t, spans)
            spans.pop()

    for s in range(1, q + 1):
        for t in range(s, q + 1):
            for b in range(1, p + 1):
                for d in range(b, p + 1):
                    extend(s, t, [(b, d)])
    out.sort()
    return out


def count_intervals(p: int, q: int) -> int:
    total = Fraction(0)
    for h in range(1, q + 1):
        for w in range(1, p + 1):
            total += Fraction(
                (q - h + 1) * (p - w + 1) * comb(h + w - 1, h - 1) * comb(h + w - 1, w - 1),
                h + w - 1,
            )
    assert total.denominator == 1
    return int(total)


def _in_arrows(v: GridPoint) -> tuple[GridPoint, GridPoint]:
    return GridPoint(v.x - 1, v.y), GridPoint(v.x, v.y - 1)


def _out_arrows(v: GridPoint) -> tuple[GridPoint, GridPoint]:
    return GridPoint(v.x + 1, v.y), GridPoint(v.x, v.y + 1)


def sources(I: StaircaseInterval) -> frozenset[GridPoint]:
    V = I.vertices
    return frozenset(v for v in V if not any(u in V for u in _in_arrows(v)))


def sinks(I: StaircaseInterval) -> frozenset[GridPoint]:
    V = I.vertices
    return frozenset(v for v in V if not any(w in V for w in _out_arrows(v)))


def essential_vertices(I: StaircaseInterval) -> frozenset[GridPoint]:
    return sources(I) | sinks(I)


def _connected(S: frozenset[GridPoint]) -> bool:
    if not S:
        return False
    seen = {next(iter(S))}
    stack = list(seen)
    while stack:
        v = stack.pop()
        for w in (*_in_arrows(v), *_out_arrows(v)):
            if w in S and w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == len(S)


def convex_hull(S: Iterable[GridPoint]) -> StaircaseInterval:
    """Close ``S`` under intermediate vertices of monotone paths and read off spans."""
    S = [GridPoint(*v) for v in S]
    if not S:
        raise ConvexHullError("empty vertex set")
    closure = set(S)
    for u, v in itertools.product(S, S):
        if grid_leq(u, v):
            closure.update(
                GridPoint(x, y) for x in range(u.x, v.x + 1) for y in range(u.y, v.y + 1)
            )
    closure = frozenset(closure)
    if not _connected(closure):
        raise ConvexHullError("disconnected")
    by_row: dict[int, list[int]] = {}
    for v in closure:
        by_row.setdefault(v.y, []).append(v.x)
    spans = {}
    for r, xs in by_row.items():
        xs.sort()
        if xs != list(range(xs[0], xs[-1] + 1)):
            raise ConvexHullError("row is not contiguous")
        spans[r] = (xs[0], xs[-1])
    try:
        hull = StaircaseInterval.from_rows(spans)
    except ValueError as exc:
        raise ConvexHullError(str(exc)) from exc
    if hull.vertices != closure:
        raise ConvexHullError("closure is not an interval")
    return hull


def leq(I: StaircaseInterval, J: StaircaseInterval) -> bool:
    for r, (b, d) in zip(range(I.rows[0], I.rows[1] + 1), I.spans):
        sp = J.span(r)
        if sp is None or not (sp[0] <= b and d <= sp[1]):
            return False
    return True


def _ladder_cover(I: StaircaseInterval, n: int) -> list[StaircaseInterval]:
    out = []
    s, t = I.rows
    if s == 1 and t == 2:
        (b1, d1), (b2, d2) = I.spans
        for nb2, nd2, nb1, nd1 in [
            (b2 - 1, d2, b1, d1),
            (b2, d2, b1 - 1, d1),
            (b2, d2 + 1, b1, d1),
            (b2, d2, b1, d1 + 1),
        ]:
            if 1 <= nb2 <= nb1 <= nd2 <= nd1 <= n:
                out.append(two_row(nb2, nd2, nb1, nd1))
        return out
    (b, d), = I.spans
    if s == 1:
        if b > 1:
            out.append(lower(b - 1, d))
        if d < n:
            out.append(lower(b, d + 1))
        out.append(two_row(b, b, b, d))
    else:
        if b > 1:
            out.append(upper(b - 1, d))
        if d < n:
            out.append(upper(b, d + 1))
        out.append(two_row(b, d, d, d))
    return out


def _ladder_join(S: Sequence[StaircaseInterval]) -> StaircaseInterval:
    spans: dict[int, list[int]] = {}
    for J in S:
        for r in range(J.rows[0], J.rows[1] + 1):
            b, d = J.span(r)
            if r in spans:
                spans[r] = [min(spans[r][0], b), max(spans[r][1], d)]
            else:
                spans[r] = [b, d]
    if 1 in spans and 2 in spans:
        # the only repairs a cover subset can need
        spans[2][0] = min(spans[2][0], spans[1][0])
        spans[1][1] = max(spans[1][1], spans[2][1])
    return StaircaseInterval.from_rows({r: tuple(v) for r, v in spans.items()})


@dataclass
class IntervalPoset:
    """All staircase intervals of G_{p,q} ordered by containment."""

    p: int
    q: int
    capacity: int = DEFAULT_CAPACITY
    intervals: list[StaircaseInterval] = field(init=False)
    index: dict[StaircaseInterval, int] = field(init=False)

    def __post_init__(self):
        self.intervals = enumerate_intervals(self.p, self.q, self.capacity)
        self.index = {I: i for i, I in enumerate(self.intervals)}
        self._covers: dict[StaircaseInterval, tuple[StaircaseInterval, ...]] = {}

    def __len__(self) -> int:
        return len(self.intervals)

    def __iter__(self):
        return iter(self.intervals)

    def __contains__(self, I) -> bool:
        return I in self.index

    @property
    def is_ladder(self) -> bool:
        return self.q == 2

    @cached_property
    def containment(self) -> np.ndarray:
        """``C[i, j]`` is True iff intervals[i] <= intervals[j]."""
        m, big = len(self.intervals), 1 << 30
        lo = np.full((m, self.q), big, dtype=np.int64)
        hi = np.full((m, self.q), -big, dtype=np.int64)
        for i, I in enumerate(self.intervals):
            for r in range(I.rows[0], I.rows[1] + 1):
                lo[i, r - 1], hi[i, r - 1] = I.span(r)
        # empty rows of I never constrain; empty rows of J reject any nonempty row of I
        ok = (lo[None, :, :] <= lo[:, None, :]) & (hi[:, None, :] <= hi[None, :, :])
        return ok.all(axis=2)

    def cover(self, I: StaircaseInterval) -> tuple[StaircaseInterval, ...]:
        if I not in self._covers:
            if self.is_ladder:
                cov = tuple(sorted(_ladder_cover(I, self.p)))
            else:
                cov = tuple(cover_brute_force(I, self.intervals))
            self._covers[I] = cov
        return self._covers[I]

    def join(self, S: Iterable[StaircaseInterval], base: StaircaseInterval | None = None) -> StaircaseInterval:
        S = list(S)
        if not S:
            if base is None:
                raise JoinError("not-cover-subset: empty join needs a base interval")
            return base
        if base is not None and not all(leq(base, J) for J in S):
            raise JoinError("not-cover-subset")
        if base is None and not frozenset.intersection(*(J.vertices for J in S)):
            raise JoinError("not-cover-subset: members share no vertex")
        if self.is_ladder:
            out = _ladder_join(S)
        else:
            out = join_brute_force(S, self.intervals)
        return out

    def linear_extension(self) -> list[StaircaseInterval]:
        """Intervals sorted by size, ties in enumeration order."""
        return sorted(self.intervals, key=lambda I: (len(I), self.index[I]))


def cover_brute_force(I: StaircaseInterval, intervals: Sequence[StaircaseInterval]) -> list[StaircaseInterval]:
    ups = [J for J in intervals if J != I and leq(I, J)]
    return sorted(J for J in ups if not any(K != J and leq(K, J) for K in ups))


def join_brute_force(S: Sequence[StaircaseInterval], intervals: Sequence[StaircaseInterval]) -> StaircaseInterval:
    ups = [J for J in intervals if all(leq(K, J) for K in S)]
    least = [J for J in ups if all(leq(J, K) for K in ups)]
    if len(least) != 1:
        raise JoinError("no least upper bound")
    return least[0]


def cover(I: StaircaseInterval, poset: IntervalPoset) -> tuple[StaircaseInterval, ...]:
    return poset.cover(I)


def join(poset: IntervalPoset, S: Iterable[StaircaseInterval], base: StaircaseInterval | None = None) -> StaircaseInterval:
    return poset.join(S, base)


def stratify_k_essential(p: int, q: int, k: int) -> list[StaircaseInterval]:
    if k < 1:
        raise ValueError("k must be positive")
    return [I for I in enumerate_intervals(p, q) if len(essential_vertices(I)) == k]


def essential_up_to(p: int, q: int, k: int) -> list[StaircaseInterval]:
    """The union E_1 ∪ ... ∪ E_k."""
    return [I for I in enumerate_intervals(p, q) if len(essential_vertices(I)) <= k]


@dataclass(frozen=True)
class Quiver:
    vertices: tuple
    arrows: tuple[tuple, ...]

    def underlying_path(self) -> list | None:
        """Vertices in path order if the underlying graph is a simple path."""
        n = len(self.vertices)
        if n == 1:
            return list(self.vertices)
        if len(self.arrows) != n - 1:
            return None
        nbrs = {v: [] for v in self.vertices}
        for u, v in self.arrows:
            if u == v or v in nbrs[u]:
                return None
            nbrs[u].append(v)
            nbrs[v].append(u)
        if any(len(x) > 2 for x in nbrs.values()):
            return None
        ends = sorted(v for v, x in nbrs.items() if len(x) == 1)
        if len(ends) != 2:
            return None
        order = [ends[0]]
        prev = None
        while len(order) < n:
            nxt = [w for w in nbrs[order[-1]] if w != prev]
            if not nxt:
                return None
            prev = order[-1]
            order.append(nxt[0])
        return order


def _reach_within(V: frozenset[GridPoint], u: GridPoint) -> set[GridPoint]:
    seen = {u}
    stack = [u]
    while stack:
        v = stack.pop()
        for w in _out_arrows(v):
            if w in V and w not in seen:
                seen.add(w)
                stack.append(w)
    return seen


def hasse_quiver(subset: Iterable[GridPoint], I: StaircaseInterval) -> Quiver:
    """Arrow u -> v iff a path u -> v exists in I with no other member of the subset on it."""
    S = sorted(GridPoint(*v) for v in set(subset))
    V = I.vertices
    if not set(S) <= V:
        raise ValueError("subset must lie in the interval")
    reach = {u: _reach_within(V, u) for u in S}
    arrows = []
    for u in S:
        for v in S:
            if u == v or v not in reach[u]:
                continue
            if any(w != u and w != v and w in reach[u] and v in reach[w] for w in S):
                continue
            arrows.append((u, v))
    return Quiver(tuple(S), tuple(arrows))
