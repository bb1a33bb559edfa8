"""Interval approximation by Möbius inversion of compressed multiplicities."""

from __future__ import annotations

import itertools
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import field_linalg as fl
from .courses import compressed_multiplicity
from .grid_poset import (
    GridPoint,
    IntervalPoset,
    StaircaseInterval,
    essential_up_to,
    grid_leq,
    leq,
    rectangle,
)
from .quiver_rep import Representation, evaluate_path, interval_module


class SignedMultiplicityMap(dict):
    """Interval -> integer, possibly negative. Zero values are kept only if set."""

    def nonzero(self) -> dict:
        return {I: v for I, v in self.items() if v}

    def has_negative(self) -> bool:
        return any(v < 0 for v in self.values())

    def to_json(self) -> list[dict]:
        return [{"interval": I.to_json(), "value": int(v)} for I, v in sorted(self.items()) if v]

    @classmethod
    def from_json(cls, rows: list[dict]) -> "SignedMultiplicityMap":
        return cls({StaircaseInterval.from_json(r["interval"]): r["value"] for r in rows})


@lru_cache(maxsize=64)
def interval_poset(p: int, q: int) -> IntervalPoset:
    return IntervalPoset(p, q)


@lru_cache(maxsize=64)
def mobius_plan(p: int, q: int) -> tuple[tuple[tuple[int, StaircaseInterval], ...], ...]:
    """Per interval, the signed joins of every subset of its cover."""
    poset = interval_poset(p, q)
    plan = []
    for I in poset.intervals:
        cov = poset.cover(I)
        terms: dict[StaircaseInterval, int] = {}
        for k in range(len(cov) + 1):
            for S in itertools.combinations(cov, k):
                J = poset.join(S, base=I)
                terms[J] = terms.get(J, 0) + (-1) ** k
        plan.append(tuple((sgn, J) for J, sgn in terms.items() if sgn))
    return tuple(plan)


class CValues:
    """Memoized compressed multiplicities of one module."""

    def __init__(self, M: Representation, assignment="ss"):
        self.M = M
        self.assignment = assignment
        self.memo: dict[StaircaseInterval, int] = {}

    def __call__(self, I: StaircaseInterval) -> int:
        v = self.memo.get(I)
        if v is None:
            v = compressed_multiplicity(self.M, I, self.assignment)
            self.memo[I] = v
        return v


def _poset_for(M: Representation) -> IntervalPoset:
    if M.shape.kind != "grid":
        raise ValueError("interval approximation needs a grid module")
    return interval_poset(M.shape.p, M.shape.q)


def _check_roundtrip(poset: IntervalPoset, delta: Mapping, c: CValues) -> None:
    ivs = poset.intervals
    dvec = np.array([delta.get(I, 0) for I in ivs], dtype=np.int64)
    cvec = np.array([c(I) for I in ivs], dtype=np.int64)
    if not np.array_equal(poset.containment.astype(np.int64) @ dvec, cvec):
        raise AssertionError("interval approximation fails its defining identity")


def interval_approximation(M: Representation, assignment="ss", method: str = "mobius",
                           check: bool = True) -> SignedMultiplicityMap:
    """delta(I) = sum over subsets S of Cov(I) of (-1)^|S| c(join S)."""
    poset = _poset_for(M)
    c = CValues(M, assignment)
    delta = SignedMultiplicityMap()
    if method == "mobius":
        for I, terms in zip(poset.intervals, mobius_plan(M.shape.p, M.shape.q)):
            delta[I] = sum(sgn * c(J) for sgn, J in terms)
    elif method == "tracedown":
        delta.update(_trace_down(poset.intervals, c, poset.containment, poset.index))
    else:
        raise ValueError(f"unknown method {method!r}")
    if check:
        _check_roundtrip(poset, delta, c)
    return delta


def _trace_down(subset: Sequence[StaircaseInterval], c, containment=None, index=None) -> dict:
    order = sorted(range(len(subset)), key=lambda i: (-len(subset[i]), i))
    out: dict[StaircaseInterval, int] = {}
    done: list[int] = []
    for i in order:
        I = subset[i]
        above = 0
        for j in done:
            J = subset[j]
            if containment is not None:
                lt = containment[index[I], index[J]]
            else:
                lt = leq(I, J)
            if lt and I != J:
                above += out[J]
        out[I] = c(I) - above
        done.append(i)
    return out


def partial_interval_approximation(M: Representation, subset: Iterable[StaircaseInterval],
                                   assignment="ss") -> SignedMultiplicityMap:
    subset = list(dict.fromkeys(subset))
    c = CValues(M, assignment)
    res = SignedMultiplicityMap(_trace_down(subset, c))
    for I in subset:
        if c(I) != sum(res[J] for J in subset if leq(I, J)):
            raise AssertionError("partial approximation fails its defining identity")
    return res


def reconstruct_rank(delta: Mapping[StaircaseInterval, int], frm: GridPoint, to: GridPoint) -> int:
    """sum of delta(I) over intervals containing every vertex of the path frm -> to."""
    frm, to = GridPoint(*frm), GridPoint(*to)
    if not grid_leq(frm, to):
        return 0
    path = [GridPoint(x, frm.y) for x in range(frm.x, to.x + 1)]
    path += [GridPoint(to.x, y) for y in range(frm.y + 1, to.y + 1)]
    return sum(v for I, v in delta.items() if v and all(u in I for u in path))


def slice_pd(M: Representation, slice_points: Sequence[GridPoint], assignment="ss") -> dict[tuple[int, int], int]:
    """Barcode of M along a monotone sequence, indexed by slice positions 1..m."""
    pts = [GridPoint(*u) for u in slice_points]
    for a, b in zip(pts, pts[1:]):
        if not grid_leq(a, b):
            raise ValueError("slice must be monotone")
    m = len(pts)
    c = CValues(M, assignment)

    def r(b, d):
        if b < 1 or d > m:
            return 0
        return c(rectangle(pts[b - 1], pts[d - 1]))

    out = {}
    for b in range(1, m + 1):
        for d in range(b, m + 1):
            val = r(b, d) - r(b - 1, d) - r(b, d + 1) + r(b - 1, d + 1)
            if val:
                out[(b, d)] = val
    return out


def check_k_rank_invariant(pia: Mapping[StaircaseInterval, int], M: Representation, k: int,
                           assignment="ss") -> bool:
    """c_M(I) == sum_J pia(J) c_{V_J}(I) for every I with at most k+1 essential vertices."""
    p, q = M.shape.p, M.shape.q
    c = CValues(M, assignment)
    support = {J: v for J, v in pia.items() if v}
    modules = {J: interval_module(J, M.shape, M.prime) for J in support}
    for I in essential_up_to(p, q, k + 1):
        rhs = sum(v * compressed_multiplicity(modules[J], I, assignment) for J, v in support.items())
        if c(I) != rhs:
            return False
    return True


def rank_of_path(M: Representation, frm: GridPoint, to: GridPoint) -> int:
    if not grid_leq(frm, to):
        return 0
    return fl.rank(evaluate_path(M, frm, to), M.prime)
