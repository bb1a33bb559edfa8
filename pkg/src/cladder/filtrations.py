"""Simplicial complexes, ladder filtrations, random models and their homology modules."""

from __future__ import annotations

import itertools
import json
import math
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import field_linalg as fl
from .courses import Course, NonLinearCourseError
from .grid_poset import CapacityError, GridPoint
from .quiver_rep import Representation, Shape, check_commutativity

Simplex = tuple[int, ...]
TOL = 1e-9
INF = math.inf
DEFAULT_POINT_CAP = 64
GENERATOR = "numpy.random.PCG64"
SCHEMA = "cladder.triplet/1"


def _faces(s: Simplex) -> Iterable[Simplex]:
    for i in range(len(s)):
        yield s[:i] + s[i + 1:]


def _order(s: Simplex) -> tuple:
    return (len(s), s)


@dataclass(frozen=True)
class SimplicialComplex:
    simplices: tuple[Simplex, ...]

    def __post_init__(self):
        cleaned = tuple(sorted({tuple(sorted(s)) for s in self.simplices}, key=_order))
        object.__setattr__(self, "simplices", cleaned)
        present = set(cleaned)
        for s in cleaned:
            if any(f and f not in present for f in _faces(s)):
                raise ValueError(f"complex is not closed under faces at {s}")

    @classmethod
    def closure(cls, simplices: Iterable[Sequence[int]]) -> "SimplicialComplex":
        out: set[Simplex] = set()
        for s in simplices:
            s = tuple(sorted(s))
            for k in range(1, len(s) + 1):
                out.update(itertools.combinations(s, k))
        return cls(tuple(out))

    @cached_property
    def _set(self) -> frozenset:
        return frozenset(self.simplices)

    def __contains__(self, s) -> bool:
        return tuple(sorted(s)) in self._set

    def __len__(self) -> int:
        return len(self.simplices)

    @property
    def dim(self) -> int:
        return max((len(s) - 1 for s in self.simplices), default=-1)

    def skeleton(self, k: int) -> list[Simplex]:
        return [s for s in self.simplices if len(s) == k + 1]

    @property
    def vertices(self) -> list[int]:
        return [s[0] for s in self.skeleton(0)]

    def is_subcomplex(self, other: "SimplicialComplex") -> bool:
        return self._set <= other._set

    def betti(self, k: int, prime: int = fl.DEFAULT_PRIME) -> int:
        return homology_basis(self, k, prime).dim


def full_simplex(m: int, max_dim: int) -> SimplicialComplex:
    """All simplices of dimension at most ``max_dim`` on ``m`` vertices."""
    return SimplicialComplex(
        tuple(s for k in range(1, max_dim + 2) for s in itertools.combinations(range(m), k))
    )


# ---------------------------------------------------------------- filters


@dataclass
class LadderTriplet:
    """A complex with two monotone filters, ``f1 >= f2`` everywhere.

    Row 1 of the ladder is built from ``f1`` and row 2 from ``f2``, so row 1
    includes into row 2.
    """

    complex: SimplicialComplex
    f1: dict[Simplex, float]
    f2: dict[Simplex, float]
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        for name, f in (("f1", self.f1), ("f2", self.f2)):
            missing = [s for s in self.complex.simplices if s not in f]
            if missing:
                raise ValueError(f"{name} undefined on {missing[0]}")
            for s in self.complex.simplices:
                for face in _faces(s):
                    if face and f[face] > f[s] + TOL:
                        raise ValueError(f"{name} is not monotone: {face} after {s}")
        for s in self.complex.simplices:
            if self.f1[s] < self.f2[s] - TOL:
                raise ValueError(f"f1 < f2 on {s}")

    def critical_values(self) -> list[float]:
        vals = [v for f in (self.f1, self.f2) for v in f.values() if math.isfinite(v)]
        return dedupe(vals)

    def to_json(self) -> dict:
        simp = list(self.complex.simplices)
        enc = lambda v: v if math.isfinite(v) else None  # noqa: E731
        return {
            "schema": SCHEMA,
            "vertices": self.complex.vertices,
            "simplices": [list(s) for s in simp],
            "filters": {"f1": [enc(self.f1[s]) for s in simp], "f2": [enc(self.f2[s]) for s in simp]},
            "meta": self.meta,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "LadderTriplet":
        if obj.get("schema", SCHEMA) != SCHEMA:
            raise ValueError(f"unsupported triplet schema {obj.get('schema')!r}")
        simp = [tuple(s) for s in obj["simplices"]]
        dec = lambda v: INF if v is None else float(v)  # noqa: E731
        f1 = {s: dec(v) for s, v in zip(simp, obj["filters"]["f1"])}
        f2 = {s: dec(v) for s, v in zip(simp, obj["filters"]["f2"])}
        return cls(SimplicialComplex(tuple(simp)), f1, f2, obj.get("meta", {}))

    def save(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_json()) + "\n")

    @classmethod
    def load(cls, path: str | Path) -> "LadderTriplet":
        return cls.from_json(json.loads(Path(path).read_text()))


def dedupe(values: Iterable[float], tol: float = TOL) -> list[float]:
    out: list[float] = []
    for v in sorted(values):
        if not out or v - out[-1] > tol:
            out.append(v)
    return out


def sublevel(K: SimplicialComplex, f: Mapping[Simplex, float], r: float) -> SimplicialComplex:
    return SimplicialComplex(tuple(s for s in K.simplices if f[s] <= r + TOL))


@dataclass
class LadderFiltration:
    lower: list[SimplicialComplex]
    upper: list[SimplicialComplex]
    thresholds: list[float]

    def __post_init__(self):
        if len(self.lower) != len(self.upper):
            raise ValueError("rows of different lengths")
        for row in (self.lower, self.upper):
            for a, b in zip(row, row[1:]):
                if not a.is_subcomplex(b):
                    raise ValueError("horizontal maps must be inclusions")
        for a, b in zip(self.lower, self.upper):
            if not a.is_subcomplex(b):
                raise ValueError("vertical maps must be inclusions")

    @property
    def n(self) -> int:
        return len(self.lower)

    def complex(self, v: GridPoint) -> SimplicialComplex:
        return (self.lower if v.y == 1 else self.upper)[v.x - 1]


def ladder_filtration(triplet: LadderTriplet, thresholds: Sequence[float] | None = None) -> LadderFiltration:
    rs = list(thresholds) if thresholds is not None else triplet.critical_values()
    if any(b <= a for a, b in zip(rs, rs[1:])):
        raise ValueError("thresholds must be strictly increasing")
    K = triplet.complex
    return LadderFiltration(
        [sublevel(K, triplet.f1, r) for r in rs],
        [sublevel(K, triplet.f2, r) for r in rs],
        rs,
    )


# ---------------------------------------------------------------- Čech


def _circumball(pts: np.ndarray) -> tuple[np.ndarray, float] | None:
    """Smallest ball with every point on its boundary, inside their affine hull."""
    q0 = pts[0]
    if len(pts) == 1:
        return q0.copy(), 0.0
    V = pts[1:] - q0
    A = 2.0 * V @ V.T
    b = np.einsum("ij,ij->i", V, V)
    if abs(np.linalg.det(A)) < 1e-12 * max(1.0, float(np.abs(A).max()) ** len(A)):
        return None
    lam = np.linalg.solve(A, b)
    c = q0 + lam @ V
    return c, float(np.linalg.norm(c - q0))


def _inside(ball, p) -> bool:
    c, r = ball
    return float(np.linalg.norm(p - c)) <= r + TOL


def minimal_enclosing_ball(points) -> tuple[np.ndarray, float]:
    """Welzl's recursion; points are processed in the given order."""
    P = np.asarray(points, dtype=float)
    if len(P) == 0:
        raise ValueError("empty point set")

    def welzl(n: int, boundary: list[np.ndarray]):
        if n == 0 or len(boundary) == P.shape[1] + 1:
            if not boundary:
                return None
            return _circumball(np.array(boundary))
        ball = welzl(n - 1, boundary)
        p = P[n - 1]
        if ball is not None and _inside(ball, p):
            return ball
        return welzl(n - 1, boundary + [p])

    ball = welzl(len(P), [])
    if ball is None:
        raise ArithmeticError("degenerate configuration in enclosing-ball recursion")
    return ball


def cech_radius(points) -> float:
    return minimal_enclosing_ball(points)[1]


def _check_points(points, cap: int) -> np.ndarray:
    P = np.asarray(points, dtype=float)
    if P.ndim != 2 or P.shape[1] not in (2, 3):
        raise ValueError("points must lie in R^2 or R^3")
    if len(P) > cap:
        raise CapacityError(f"{len(P)} points exceed the cap of {cap}")
    return P


def cech_filter(points, max_dim: int, r_max: float = INF, cap: int = DEFAULT_POINT_CAP) -> dict[Simplex, float]:
    """Čech radius of every simplex of dimension at most ``max_dim`` with radius at most ``r_max``."""
    if max_dim > 3:
        raise ValueError("Čech complexes above dimension 3 are unsupported")
    P = _check_points(points, cap)
    m = len(P)
    D = np.linalg.norm(P[:, None, :] - P[None, :, :], axis=-1)
    nbr = [set(np.flatnonzero(D[i] <= 2 * r_max + TOL).tolist()) - {i} for i in range(m)]
    out: dict[Simplex, float] = {(i,): 0.0 for i in range(m)}
    frontier = [(i,) for i in range(m)]
    for _ in range(max_dim):
        nxt = []
        for s in frontier:
            common = set.intersection(*(nbr[v] for v in s))
            for v in sorted(w for w in common if w > s[-1]):
                t = s + (v,)
                if any(f not in out for f in _faces(t)):
                    continue
                r = cech_radius(P[list(t)])
                if r <= r_max + TOL:
                    out[t] = max(r, *(out[f] for f in _faces(t)))
                    nxt.append(t)
        frontier = nxt
    return out


def cech_complex(points, r: float, max_dim: int, cap: int = DEFAULT_POINT_CAP) -> SimplicialComplex:
    return SimplicialComplex(tuple(cech_filter(points, max_dim, r, cap)))


def thinning_triplet(P, P_sub: Sequence[int], max_dim: int, r_max: float = INF,
                     cap: int = DEFAULT_POINT_CAP) -> LadderTriplet:
    """Row 2 is the Čech filtration of ``P``; row 1 keeps only simplices on the subsample."""
    pts = _check_points(P, cap)
    sub = set(int(i) for i in P_sub)
    if not sub or len(sub) >= len(pts) or not sub <= set(range(len(pts))):
        raise ValueError("the subsample must be a non-empty proper subset of the points")
    f2 = cech_filter(pts, max_dim, r_max, cap)
    f1 = {s: (v if set(s) <= sub else INF) for s, v in f2.items()}
    K = SimplicialComplex(tuple(f2))
    meta = {"model": "thinning", "n_points": len(pts), "subsample": sorted(sub), "max_dim": max_dim}
    return LadderTriplet(K, f1, f2, meta)


def clique_model(m: int, seed: int | None = None, max_dim: int = 2) -> LadderTriplet:
    """Two coupled random graph processes: edge e appears at T_e below and at T_e * T~_e above."""
    if m < 3:
        raise ValueError("the clique model needs at least 3 vertices")
    rng = np.random.default_rng(seed)
    edges = list(itertools.combinations(range(m), 2))
    t = rng.random(len(edges))
    tt = rng.random(len(edges))
    lo = {e: float(a) for e, a in zip(edges, t)}
    up = {e: float(a * b) for e, a, b in zip(edges, t, tt)}
    K = full_simplex(m, max_dim)
    f1, f2 = {}, {}
    for s in K.simplices:
        es = list(itertools.combinations(s, 2))
        f1[s] = max((lo[e] for e in es), default=0.0)
        f2[s] = max((up[e] for e in es), default=0.0)
    meta = {"model": "clique", "m": m, "seed": seed, "generator": GENERATOR, "max_dim": max_dim}
    return LadderTriplet(K, f1, f2, meta)


def linial_meshulam_model(m: int, d: int, seed: int | None = None) -> LadderTriplet:
    """Full (d-1)-skeleton at 0; each d-simplex enters at T below and at T * T~ above."""
    if not 1 <= d <= m - 1:
        raise ValueError("need 1 <= d <= m - 1")
    if m > 12:
        raise CapacityError("the Linial-Meshulam model is capped at 12 vertices")
    rng = np.random.default_rng(seed)
    K = full_simplex(m, d)
    top = K.skeleton(d)
    t = rng.random(len(top))
    tt = rng.random(len(top))
    f1 = {s: 0.0 for s in K.simplices}
    f2 = dict(f1)
    for s, a, b in zip(top, t, tt):
        f1[s] = float(a)
        f2[s] = float(a * b)
    meta = {"model": "dlm", "m": m, "d": d, "seed": seed, "generator": GENERATOR}
    return LadderTriplet(K, f1, f2, meta)


# ---------------------------------------------------------------- one-parameter persistence


def persistence_pairs(K: SimplicialComplex, f: Mapping[Simplex, float]) -> list[tuple[int, float, float]]:
    """(dimension, birth, death) over F_2 by column reduction; essential classes die at inf."""
    simp = sorted((s for s in K.simplices if math.isfinite(f[s])), key=lambda s: (f[s], len(s), s))
    idx = {s: i for i, s in enumerate(simp)}
    cols = [set(idx[g] for g in _faces(s) if g) for s in simp]
    low_of: dict[int, int] = {}
    pairs, paired = [], set()
    for j, col in enumerate(cols):
        while col:
            low = max(col)
            if low not in low_of:
                break
            col ^= cols[low_of[low]]
        if col:
            low = max(col)
            low_of[low] = j
            paired.update((low, j))
            pairs.append((len(simp[low]) - 1, f[simp[low]], f[simp[j]]))
    for i, s in enumerate(simp):
        if i not in paired:
            pairs.append((len(s) - 1, f[s], INF))
    return pairs


def critical_values(triplet: LadderTriplet, k: int) -> list[float]:
    """Births and deaths of positive-length H_k classes of both rows, deduplicated."""
    vals = []
    for f in (triplet.f1, triplet.f2):
        for dim, b, d in persistence_pairs(triplet.complex, f):
            if dim == k and d - b > TOL:
                vals.append(b)
                if math.isfinite(d):
                    vals.append(d)
    return dedupe(vals)


# ---------------------------------------------------------------- homology over F_p


def boundary_matrix(K: SimplicialComplex, k: int, prime: int) -> np.ndarray:
    rows = K.skeleton(k - 1)
    cols = K.skeleton(k)
    if k == 0:
        return fl.zeros(0, len(cols))
    ridx = {s: i for i, s in enumerate(rows)}
    out = fl.zeros(len(rows), len(cols))
    for j, s in enumerate(cols):
        for i, face in enumerate(_faces(s)):
            out[ridx[face], j] = (-1) ** i % prime
    return out


class HomologyBasis:
    """Cycle representatives of a basis of H_k, and coordinates of cycles in it."""

    def __init__(self, K: SimplicialComplex, k: int, prime: int):
        self.k, self.prime = k, prime
        self.chains = K.skeleton(k)
        self.index = {s: i for i, s in enumerate(self.chains)}
        Z = fl.kernel_basis(boundary_matrix(K, k, prime), prime)
        if Z.shape[0] != len(self.chains):
            Z = fl.zeros(len(self.chains), 0)
        B = fl.image_basis(boundary_matrix(K, k + 1, prime), prime)
        B = B if B.shape[0] == len(self.chains) else fl.zeros(len(self.chains), 0)
        nb = B.shape[1]
        stacked = np.hstack([B, Z])
        _, pivots = fl.rref(stacked, prime) if stacked.size else (None, [])
        self.reps = stacked[:, [c for c in pivots if c >= nb]]
        self.system = np.hstack([B, self.reps])
        self.nb = nb

    @property
    def dim(self) -> int:
        return self.reps.shape[1]

    def coordinates(self, cycles: np.ndarray) -> np.ndarray:
        if self.dim == 0 or cycles.shape[1] == 0:
            return fl.zeros(self.dim, cycles.shape[1])
        try:
            x = fl.solve(self.system, cycles, self.prime)
        except fl.InconsistentSystem as exc:
            raise ArithmeticError("chain is not a cycle of the target complex") from exc
        return x[self.nb:]

    def push_forward(self, target: "HomologyBasis") -> np.ndarray:
        """Matrix of the map induced by the inclusion of this complex into the target."""
        emb = fl.zeros(len(target.chains), self.dim)
        for s, i in self.index.items():
            if s not in target.index:
                raise ValueError("source complex is not a subcomplex of the target")
            emb[target.index[s]] = self.reps[i]
        return target.coordinates(emb)


def homology_basis(K: SimplicialComplex, k: int, prime: int = fl.DEFAULT_PRIME) -> HomologyBasis:
    return HomologyBasis(K, k, prime)


def homology_rep(filt: LadderFiltration, k: int, prime: int = fl.DEFAULT_PRIME) -> Representation:
    shape = Shape.ladder(filt.n)
    H = {v: HomologyBasis(filt.complex(v), k, prime) for v in shape.vertices}
    dims = {v: H[v].dim for v in shape.vertices}
    maps = {(s, t): H[s].push_forward(H[t]) for s, t in shape.arrows}
    M = Representation(shape, dims, maps, prime, check=False)
    if not check_commutativity(M):
        raise AssertionError("induced homology maps do not commute")
    return M


def zigzag_along_course(filt: LadderFiltration, course: Course, k: int,
                        prime: int = fl.DEFAULT_PRIME) -> Representation:
    """Homology of only the complexes a course visits, with the induced inclusion maps."""
    if not course.is_linear:
        raise NonLinearCourseError("non-linear-course")
    H = [HomologyBasis(filt.complex(v), k, prime) for v in course.labels]
    shape = Shape.zigzag(course.orientation)
    dims = {i + 1: h.dim for i, h in enumerate(H)}
    maps = {(s + 1, t + 1): H[s].push_forward(H[t]) for s, t in course.arrows}
    return Representation(shape, dims, maps, prime)


# ---------------------------------------------------------------- worked example


_SQRT3 = math.sqrt(3.0)
EXAMPLE_RADII = [0.0, 1.0, _SQRT3, 2.0]
_LABELS = "ABCDEF"


def _named(spec: Mapping[str, float]) -> dict[Simplex, float]:
    return {tuple(sorted(_LABELS.index(c) for c in name)): v for name, v in spec.items()}


def example_triplet(which: str) -> LadderTriplet:
    """Two six-point configurations whose H_1 barcodes agree row by row.

    In ``a`` the lower triangle's cycle survives into the upper row at radius
    sqrt(3); in ``b`` it is already filled there.
    """
    s3 = _SQRT3
    lower = {"A": 0, "B": 0, "C": 0, "AB": s3, "BC": s3, "AC": s3, "ABC": 2}
    if which == "a":
        up = {"A": 0, "B": 0, "C": 0, "E": 0, "F": 0, "EF": 1, "CF": 1, "AF": 1,
              "CE": s3, "AC": s3, "BC": s3, "AB": s3, "AE": s3, "ACE": s3, "ABC": 2}
    elif which == "b":
        up = {"A": 0, "B": 0, "C": 0, "D": 0, "E": 0, "CD": 1, "AD": 1, "BD": 1,
              "BC": s3, "AC": s3, "CE": s3, "AE": s3, "AB": s3, "ABC": s3, "ACE": 2}
    else:
        raise ValueError("example is 'a' or 'b'")
    f2 = {s: float(v) for s, v in _named(up).items()}
    f1 = {s: INF for s in f2}
    f1.update({s: float(v) for s, v in _named(lower).items()})
    return LadderTriplet(SimplicialComplex(tuple(f2)), f1, f2, {"model": f"example-{which}"})


def example_filtration(which: str) -> LadderFiltration:
    return ladder_filtration(example_triplet(which), EXAMPLE_RADII)


# ---------------------------------------------------------------- crystal patches


_LAYER_SHIFT = {"A": 0.0, "B": 1.0 / 3.0, "C": 2.0 / 3.0}


def close_packed_patch(stacking: str, radius: float, nn: float = 2.0) -> tuple[np.ndarray, list[int]]:
    """Close-packed points within ``radius`` of a tetrahedral void.

    ``stacking`` is the repeating layer word, ``"ABC"`` for FCC and ``"AB"``
    for HCP. Returns the points and the indices of the four atoms around the
    central void (three in layer 0, one in layer 1).
    """
    a1 = np.array([nn, 0.0])
    a2 = np.array([nn / 2, nn * math.sqrt(3) / 2])
    h = nn * math.sqrt(2.0 / 3.0)
    tet = [np.r_[0.0, 0.0, 0.0], np.r_[a1, 0.0], np.r_[a2, 0.0], np.r_[(a1 + a2) / 3, h]]
    centre = sum(tet) / 4
    span = int(math.ceil(radius / nn)) + 2
    pts = []
    for z in range(-span, span + 1):
        shift = _LAYER_SHIFT[stacking[z % len(stacking)]] * (a1 + a2)
        for i, j in itertools.product(range(-2 * span, 2 * span + 1), repeat=2):
            p = np.r_[i * a1 + j * a2 + shift, z * h]
            if np.linalg.norm(p - centre) <= radius + TOL:
                pts.append(p)
    pts = np.array(pts)
    removed = [int(np.argmin(np.linalg.norm(pts - t, axis=1))) for t in tet]
    return pts, removed


def new_pairs(triplet: LadderTriplet, k: int, digits: int = 9) -> Counter:
    """H_k (birth, death) pairs of the lower row that the upper row does not have."""
    def pairs(f):
        return Counter((round(b, digits), round(d, digits) if math.isfinite(d) else INF)
                       for dim, b, d in persistence_pairs(triplet.complex, f) if dim == k and d - b > TOL)

    return pairs(triplet.f1) - pairs(triplet.f2)


def thinned_void_pair(stacking: str, radius: float = 4.2, r_max: float = 2.4,
                      cap: int = 80) -> tuple[float, float] | None:
    """The H_2 class created by deleting the four atoms around a tetrahedral void.

    Returns the new pair with the earliest birth, or None when thinning creates
    no H_2 class below ``r_max``.
    """
    pts, tet = close_packed_patch(stacking, radius)
    keep = [i for i in range(len(pts)) if i not in set(tet)]
    fresh = new_pairs(thinning_triplet(pts, keep, 3, r_max, cap), 2)
    return min(fresh) if fresh else None
