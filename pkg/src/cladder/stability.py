"""Matchings, bottleneck distance and interleavings for ladder diagrams.

An unpacked diagram holds three multisets of integer pairs ``(b, d)``:
``upper`` (row 2 bars), ``lower`` (row 1 bars) and ``overlap`` (lower birth and
upper death of each two-row summand). Multisets are expanded into entries
``(b, d, k)`` where ``k`` counts copies, so a matching is a set of entry pairs.
"""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .cpd import ConnectedPD, cpd_from_delta
from .grid_poset import GridPoint
from .interval_approx import interval_approximation
from .quiver_rep import (
    Morphism,
    Representation,
    cokernel_rep,
    evaluate_path,
    image_subrep,
    kernel_subrep,
)

COMPONENTS = ("upper", "lower", "overlap")

Entry = tuple[int, int, int]


class NotIntervalDecomposable(ValueError):
    pass


class MultiplicityMismatch(AssertionError):
    pass


@dataclass(frozen=True)
class ShiftVector:
    d1: int
    d2: int

    def __post_init__(self):
        if self.d1 < 0 or self.d2 < 0:
            raise ValueError("shift components must be nonnegative")

    @property
    def norm1(self) -> int:
        return self.d1 + self.d2

    def scale(self, k: int) -> "ShiftVector":
        return ShiftVector(k * self.d1, k * self.d2)

    @property
    def upper_shift(self) -> int:
        return self.d1 + self.d2

    @property
    def lower_shift(self) -> int:
        return self.d1


def _as_shift(delta) -> ShiftVector:
    return delta if isinstance(delta, ShiftVector) else ShiftVector(*delta)


@dataclass
class UnpackedDiagram:
    upper: Counter = field(default_factory=Counter)
    lower: Counter = field(default_factory=Counter)
    overlap: Counter = field(default_factory=Counter)

    def component(self, name: str) -> Counter:
        return getattr(self, name)

    def is_empty(self) -> bool:
        return not any(+self.component(c) for c in COMPONENTS)


@dataclass
class MatchingTuple:
    """Per component, a list of ``(source entry, target entry)`` pairs."""

    pairs: dict[str, list[tuple[Entry, Entry]]] = field(
        default_factory=lambda: {c: [] for c in COMPONENTS})

    def coim(self, comp: str) -> set[Entry]:
        return {s for s, _ in self.pairs[comp]}

    def im(self, comp: str) -> set[Entry]:
        return {t for _, t in self.pairs[comp]}

    def as_dict(self, comp: str) -> dict[Entry, Entry]:
        return dict(self.pairs[comp])

    def to_json(self) -> dict:
        return {
            c: [{"src": list(s[:2]), "dst": list(t[:2])} for s, t in sorted(self.pairs[c])]
            for c in COMPONENTS
        }


def expand(ms: Counter) -> list[Entry]:
    return [(b, d, k) for (b, d), m in sorted(ms.items()) for k in range(m)]


# ---------------------------------------------------------------- unpacking


def unpack(cpd: ConnectedPD) -> UnpackedDiagram:
    if any(v < 0 for v in cpd.values()):
        raise NotIntervalDecomposable("not-interval-decomposable: negative cPD value")
    ud = UnpackedDiagram(Counter(cpd.upper), Counter(cpd.lower), Counter())
    for (b2, d2, b1, d1), m in cpd.connecting.items():
        ud.overlap[(b1, d2)] += m
    for c in COMPONENTS:
        setattr(ud, c, +ud.component(c))  # drop zero entries
    return ud


def truncate(ud: UnpackedDiagram, eps: int) -> UnpackedDiagram:
    return UnpackedDiagram(
        *(Counter({k: v for k, v in ud.component(c).items() if k[1] - k[0] >= eps}) for c in COMPONENTS)
    )


# ---------------------------------------------------------------- dislocation


def dislocate(M: Representation, delta) -> Representation:
    """Row 2 shifted left by d1 + d2 and row 1 by d1, zero past the right end.

    Columns that would come from indices below 1 are dropped; pad the module on
    the left when the shifted module must keep everything.
    """
    if not M.shape.is_ladder:
        raise ValueError("dislocation acts on ladder modules")
    dv = _as_shift(delta)
    n = M.shape.p
    sh = {2: dv.upper_shift, 1: dv.lower_shift}

    def src(v: GridPoint) -> GridPoint | None:
        x = v.x + sh[v.y]
        return GridPoint(x, v.y) if x <= n else None

    dims, maps = {}, {}
    for v in M.shape.vertices:
        s = src(v)
        dims[v] = M.dims[s] if s else 0
    for a in M.shape.arrows:
        s, t = src(a[0]), src(a[1])
        if s and t:
            maps[a] = evaluate_path(M, s, t)
    return Representation(M.shape, dims, maps, M.prime, check=False)


def natural_map(M: Representation, delta) -> Morphism:
    dv = _as_shift(delta)
    Md = dislocate(M, dv)
    n = M.shape.p
    sh = {2: dv.upper_shift, 1: dv.lower_shift}
    comps = {}
    for v in M.shape.vertices:
        x = v.x + sh[v.y]
        if x <= n:
            comps[v] = evaluate_path(M, v, GridPoint(x, v.y))
    return Morphism(M, Md, comps, check=False)


def reindex(h: Morphism, delta) -> Morphism:
    """h(δ): A(δ) -> B(δ) for h: A -> B."""
    dv = _as_shift(delta)
    A, B = dislocate(h.source, dv), dislocate(h.target, dv)
    n = h.source.shape.p
    sh = {2: dv.upper_shift, 1: dv.lower_shift}
    comps = {}
    for v in A.shape.vertices:
        x = v.x + sh[v.y]
        if x <= n:
            comps[v] = h.comps[GridPoint(x, v.y)]
    return Morphism(A, B, comps, check=False)


def is_trivial(M: Representation, delta) -> bool:
    return natural_map(M, delta).is_zero()


def same_representation(A: Representation, B: Representation) -> bool:
    return (
        A.shape == B.shape
        and A.dims == B.dims
        and all(np.array_equal(A.maps[a], B.maps[a]) for a in A.shape.arrows)
    )


def verify_interleaving(M: Representation, N: Representation, delta, f: Morphism, g: Morphism) -> bool:
    dv = _as_shift(delta)
    if M.shape != N.shape:
        raise ValueError("shape mismatch")
    Nd, Md = dislocate(N, dv), dislocate(M, dv)
    if not (same_representation(f.source, M) and same_representation(f.target, Nd)):
        return False
    if not (same_representation(g.source, N) and same_representation(g.target, Md)):
        return False
    if not (f.is_natural() and g.is_natural()):
        return False
    two = dv.scale(2)
    left = reindex(g, dv) @ f
    right = reindex(f, dv) @ g
    return left.equals(natural_map(M, two)) and right.equals(natural_map(N, two))


def kernel_cokernel_trivial(f: Morphism, delta) -> tuple[bool, bool]:
    two = _as_shift(delta).scale(2)
    K, _ = kernel_subrep(f)
    C, _ = cokernel_rep(f)
    return is_trivial(K, two), is_trivial(C, two)


# ---------------------------------------------------------------- matchings


def _check_entries(entries: Iterable[Entry], ms: Counter) -> bool:
    return all(ms.get((b, d), 0) > k for b, d, k in entries)


def rho_matching(ud_shifted: UnpackedDiagram, ud: UnpackedDiagram, delta) -> MatchingTuple:
    """Index-shift matching from the diagram of M(δ) back to the diagram of M."""
    dv = _as_shift(delta)
    shifts = {
        "upper": (dv.upper_shift, dv.upper_shift),
        "lower": (dv.lower_shift, dv.lower_shift),
        "overlap": (dv.lower_shift, dv.upper_shift),
    }
    out = MatchingTuple()
    for comp, (sb, sd) in shifts.items():
        src, tgt = ud_shifted.component(comp), ud.component(comp)
        pairs = [((b, d, k), (b + sb, d + sd, k)) for b, d, k in expand(src)]
        if not _check_entries((t for _, t in pairs), tgt):
            raise MultiplicityMismatch(f"{comp}: shifted entry missing from the target")
        hit = Counter((t[0], t[1]) for _, t in pairs)
        need = Counter(
            {k: v for k, v in tgt.items() if comp != "overlap" or k[1] - k[0] >= dv.d2}
        )
        if hit != +need:
            raise MultiplicityMismatch(f"{comp}: image is not the expected sub-multiset")
        out.pairs[comp] = pairs
    return out


def canonical_matching(ud_src: UnpackedDiagram, ud_tgt: UnpackedDiagram, direction: str) -> MatchingTuple:
    """``by_death`` groups by death, longest first; ``by_birth`` groups by birth, longest first."""
    if direction not in ("by_death", "by_birth"):
        raise ValueError(f"unknown direction {direction!r}")
    out = MatchingTuple()
    for comp in COMPONENTS:
        groups_s: dict[int, list[Entry]] = {}
        groups_t: dict[int, list[Entry]] = {}
        g = 1 if direction == "by_death" else 0
        for e in expand(ud_src.component(comp)):
            groups_s.setdefault(e[g], []).append(e)
        for e in expand(ud_tgt.component(comp)):
            groups_t.setdefault(e[g], []).append(e)
        if direction == "by_death":
            key = lambda e: (e[0], e[1], e[2])  # noqa: E731  earlier birth = longer
        else:
            key = lambda e: (-e[1], e[0], e[2])  # noqa: E731  later death = longer
        pairs = []
        for k in sorted(set(groups_s) & set(groups_t)):
            pairs.extend(zip(sorted(groups_s[k], key=key), sorted(groups_t[k], key=key)))
        out.pairs[comp] = pairs
    return out


def compose(second: MatchingTuple, first: MatchingTuple) -> MatchingTuple:
    """``second ∘ first``."""
    out = MatchingTuple()
    for comp in COMPONENTS:
        m2 = second.as_dict(comp)
        out.pairs[comp] = [(s, m2[t]) for s, t in first.pairs[comp] if t in m2]
    return out


def identity_matching(ud: UnpackedDiagram) -> MatchingTuple:
    out = MatchingTuple()
    for comp in COMPONENTS:
        out.pairs[comp] = [(e, e) for e in expand(ud.component(comp))]
    return out


def _certified_ud(M: Representation) -> UnpackedDiagram:
    delta = interval_approximation(M, "ss")
    if any(v < 0 for v in delta.values()):
        raise NotIntervalDecomposable("negative interval approximation")
    # dimension vectors must reconcile for an interval decomposition
    total = Counter()
    for I, v in delta.items():
        for u in I.vertices:
            total[u] += v
    if any(total[u] != M.dims[u] for u in M.shape.vertices):
        raise NotIntervalDecomposable("dimension vector does not reconcile")
    return unpack(cpd_from_delta(delta, M.shape.p, M.prime))


def induced_matching(f: Morphism) -> MatchingTuple:
    Im, j, q = image_subrep(f)
    ud_m = _certified_ud(f.source)
    ud_n = _certified_ud(f.target)
    try:
        ud_im = _certified_ud(Im)
    except NotIntervalDecomposable as exc:
        raise NotIntervalDecomposable(f"image-not-interval-decomposable: {exc}") from exc
    chi_q = canonical_matching(ud_m, ud_im, "by_birth")
    chi_j = canonical_matching(ud_im, ud_n, "by_death")
    return compose(chi_j, chi_q)


def is_matching(sigma: MatchingTuple, ud_m: UnpackedDiagram, ud_n: UnpackedDiagram) -> bool:
    for comp in COMPONENTS:
        pairs = sigma.pairs[comp]
        srcs = [s for s, _ in pairs]
        tgts = [t for _, t in pairs]
        if len(set(srcs)) != len(srcs) or len(set(tgts)) != len(tgts):
            return False
        if not _check_entries(srcs, ud_m.component(comp)) or not _check_entries(tgts, ud_n.component(comp)):
            return False
    return True


def is_delta_matching(sigma: MatchingTuple, ud_m: UnpackedDiagram, ud_n: UnpackedDiagram, delta: int) -> bool:
    if not is_matching(sigma, ud_m, ud_n):
        return False
    for comp in COMPONENTS:
        coim, im = sigma.coim(comp), sigma.im(comp)
        for e in expand(ud_m.component(comp)):
            if e[1] - e[0] >= 2 * delta and e not in coim:
                return False
        for e in expand(ud_n.component(comp)):
            if e[1] - e[0] >= 2 * delta and e not in im:
                return False
        for (b, d, _), (b2, d2, _) in sigma.pairs[comp]:
            if not (b2 - delta <= b <= d <= d2 + delta and b - delta <= b2 <= d2 <= d + delta):
                return False
    return True


# ---------------------------------------------------------------- bottleneck


def _max_flow(n: int, edges: list[tuple[int, int, int]], s: int, t: int) -> tuple[int, list[int]]:
    """Edmonds-Karp. Returns the flow value and the flow on every input edge."""
    graph: list[list[int]] = [[] for _ in range(n)]
    to, cap = [], []
    for u, v, c in edges:
        graph[u].append(len(to)); to.append(v); cap.append(c)  # noqa: E702
        graph[v].append(len(to)); to.append(u); cap.append(0)  # noqa: E702
    orig = list(cap)
    total = 0
    while True:
        prev = [-1] * n
        prev[s] = -2
        dq = deque([s])
        while dq and prev[t] == -1:
            u = dq.popleft()
            for eid in graph[u]:
                v = to[eid]
                if cap[eid] > 0 and prev[v] == -1:
                    prev[v] = eid
                    dq.append(v)
        if prev[t] == -1:
            break
        push, v = float("inf"), t
        while v != s:
            eid = prev[v]
            push = min(push, cap[eid])
            v = to[eid ^ 1]
        v = t
        while v != s:
            eid = prev[v]
            cap[eid] -= push
            cap[eid ^ 1] += push
            v = to[eid ^ 1]
        total += push
    flows = [orig[2 * i] - cap[2 * i] for i in range(len(edges))]
    return total, flows


def feasible_matching(left: list[Entry], right: list[Entry], delta: int) -> list[tuple[Entry, Entry]] | None:
    """A δ-matching of one component, via a circulation with lower bounds; None if infeasible."""
    L, R = len(left), len(right)
    S, T = L + R, L + R + 1
    lb_edges = []  # (u, v, lower, cap)
    for i, (b, d, _) in enumerate(left):
        lb_edges.append((S, i, 1 if d - b >= 2 * delta else 0, 1))
    for j, (b, d, _) in enumerate(right):
        lb_edges.append((L + j, T, 1 if d - b >= 2 * delta else 0, 1))
    pair_edges = []
    for i, (b, d, _) in enumerate(left):
        for j, (b2, d2, _) in enumerate(right):
            if abs(b - b2) <= delta and abs(d - d2) <= delta:
                pair_edges.append((i, j))
                lb_edges.append((i, L + j, 0, 1))
    big = L + R + 1
    lb_edges.append((T, S, 0, big))
    SS, TT = L + R + 2, L + R + 3
    excess = [0] * (L + R + 4)
    edges = []
    for u, v, lo, c in lb_edges:
        edges.append((u, v, c - lo))
        excess[v] += lo
        excess[u] -= lo
    need = 0
    for v, ex in enumerate(excess):
        if ex > 0:
            edges.append((SS, v, ex))
            need += ex
        elif ex < 0:
            edges.append((v, TT, -ex))
    value, flows = _max_flow(L + R + 4, edges, SS, TT)
    if value != need:
        return None
    start = L + R  # first pair edge index in lb_edges order
    out = []
    for k, (i, j) in enumerate(pair_edges):
        if flows[start + k]:
            out.append((left[i], right[j]))
    return out


def _ud_of(x) -> UnpackedDiagram:
    return x if isinstance(x, UnpackedDiagram) else unpack(x)


def bottleneck_matching(a, b, delta: int) -> MatchingTuple | None:
    ua, ub = _ud_of(a), _ud_of(b)
    out = MatchingTuple()
    for comp in COMPONENTS:
        res = feasible_matching(expand(ua.component(comp)), expand(ub.component(comp)), delta)
        if res is None:
            return None
        out.pairs[comp] = res
    return out


def _max_index(ud: UnpackedDiagram) -> int:
    vals = [x for c in COMPONENTS for k in ud.component(c) for x in k]
    return max(vals, default=0)


def bottleneck_distance(cpd_a, cpd_b, return_matching: bool = False):
    ua, ub = _ud_of(cpd_a), _ud_of(cpd_b)
    top = max(_max_index(ua), _max_index(ub), getattr(cpd_a, "n", 0), getattr(cpd_b, "n", 0), 1)
    best, best_match = None, None
    for delta in range(0, top + 1):
        m = bottleneck_matching(ua, ub, delta)
        if m is not None and best is None:
            best, best_match = delta, m
        elif m is None and best is not None:
            raise AssertionError("δ-matching feasibility is not monotone")
    if best is None:
        raise AssertionError("no δ-matching up to the diagram size")
    return (best, best_match) if return_matching else best


def interleaving_lower_bound(cpd_a, cpd_b) -> int:
    d = bottleneck_distance(cpd_a, cpd_b)
    return (d + 1) // 2
