"""Indecomposable decompositions over CL(2), CL(3) and (with a data file) CL(4).

Course functions are evaluated on every member of a complete list of
indecomposables; a greedily chosen set of linearly independent rows gives an
invertible coefficient matrix, and multiplicities follow by an exact rational
solve.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Sequence

from .courses import Course, course_value, enumerate_azc_bfs
from .grid_poset import GridPoint, StaircaseInterval, enumerate_intervals
from .quiver_rep import Representation, Shape, hom_space, interval_module

CL4_ASSET = "cl4_indecomposables.json"
ASSET_SCHEMA = "cladder.indecomposables/1"


class InsufficientCourses(RuntimeError):
    pass


class DecompositionError(ArithmeticError):
    pass


@dataclass
class IndecomposableSet:
    n: int
    labels: list[str]
    reps: list[Representation]
    is_interval: list[bool]
    intervals: list[StaircaseInterval | None] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.reps)

    def index(self, label: str) -> int:
        return self.labels.index(label)

    @property
    def non_interval_labels(self) -> list[str]:
        return [l for l, iv in zip(self.labels, self.is_interval) if not iv]


def ladder_dual(M: Representation) -> Representation:
    """Vector-space dual, re-indexed by the half-turn so arrows point right and up again."""
    n = M.shape.p

    def flip(v):
        return GridPoint(n + 1 - v.x, 3 - v.y)

    dims = {v: M.dims[flip(v)] for v in M.shape.vertices}
    maps = {}
    for s, t in M.shape.arrows:
        maps[(s, t)] = M.maps[(flip(t), flip(s))].T
    return Representation(M.shape, dims, maps, M.prime)


def is_brick(M: Representation) -> bool:
    """End(M) is one-dimensional; for these algebras this certifies indecomposability."""
    return len(hom_space(M, M)) == 1


def _cl3_non_interval(prime: int = 2) -> Representation:
    # upper 1 -> 2 -> 1, lower 0 -> 1 -> 1; three distinct lines in the middle space
    P = GridPoint
    dims = {P(1, 2): 1, P(2, 2): 2, P(3, 2): 1, P(2, 1): 1, P(3, 1): 1}
    maps = {
        (P(1, 2), P(2, 2)): [[1], [0]],
        (P(2, 2), P(3, 2)): [[1, 0]],
        (P(2, 1), P(3, 1)): [[1]],
        (P(2, 1), P(2, 2)): [[1], [1]],
        (P(3, 1), P(3, 2)): [[1]],
    }
    return Representation(Shape.ladder(3), dims, maps, prime)


def interval_members(n: int, prime: int = 2) -> IndecomposableSet:
    ivs = enumerate_intervals(n, 2)
    shape = Shape.ladder(n)
    return IndecomposableSet(
        n,
        [str(I) for I in ivs],
        [interval_module(I, shape, prime) for I in ivs],
        [True] * len(ivs),
        list(ivs),
    )


def builtin_indecomposables(n: int, prime: int = 2) -> IndecomposableSet:
    if n not in (1, 2, 3):
        raise ValueError("built-in representatives exist for CL(1), CL(2) and CL(3)")
    L = interval_members(n, prime)
    if n == 3:
        N1 = _cl3_non_interval(prime)
        for label, M in (("N1", N1), ("N2", ladder_dual(N1))):
            L.labels.append(label)
            L.reps.append(M)
            L.is_interval.append(False)
            L.intervals.append(None)
    assert_distinct(L)
    return L


def fingerprint(M: Representation, courses: Sequence[Course]) -> tuple:
    return M.dimvec + tuple(course_value(M, c) for c in courses)


def assert_distinct(L: IndecomposableSet, N: int = 4) -> None:
    courses = enumerate_azc_bfs(L.n, 2, N)
    fps = [fingerprint(M, courses) for M in L.reps]
    if len(set(fps)) != len(fps):
        raise ValueError("indecomposable representatives are not pairwise distinct")


def save_indecomposables(L: IndecomposableSet, path: str | Path, note: str = "") -> None:
    members = []
    for label, M, iv, I in zip(L.labels, L.reps, L.is_interval, L.intervals):
        entry = {"label": label, "interval": iv, "representation": M.to_json()}
        if I is not None:
            entry["support"] = I.to_json()
        members.append(entry)
    obj = {"schema": ASSET_SCHEMA, "n": L.n, "field": L.reps[0].prime if L.reps else 2,
           "note": note, "members": members}
    Path(path).write_text(json.dumps(obj, indent=1) + "\n")


def load_indecomposables(path: str | Path | None = None) -> IndecomposableSet:
    """Read a representative list; ``None`` loads the packaged CL(4) asset."""
    if path is None:
        text = resources.files("cladder.data").joinpath(CL4_ASSET).read_text()
    else:
        text = Path(path).read_text()
    obj = json.loads(text)
    if obj.get("schema") != ASSET_SCHEMA:
        raise ValueError(f"unsupported representative schema {obj.get('schema')!r}")
    L = IndecomposableSet(obj["n"], [], [], [], [])
    for m in obj["members"]:
        L.labels.append(m["label"])
        L.reps.append(Representation.from_json(m["representation"]))
        L.is_interval.append(bool(m["interval"]))
        L.intervals.append(StaircaseInterval.from_json(m["support"]) if "support" in m else None)
    assert_distinct(L)
    return L


def cl4_asset_available() -> bool:
    try:
        return resources.files("cladder.data").joinpath(CL4_ASSET).is_file()
    except (ModuleNotFoundError, FileNotFoundError):
        return False


# ---------------------------------------------------------------- exact rank


class RationalEchelon:
    """Incremental row echelon basis over Q."""

    def __init__(self, width: int):
        self.width = width
        self.rows: list[list[Fraction]] = []
        self.pivots: list[int] = []

    @property
    def rank(self) -> int:
        return len(self.rows)

    def reduce(self, vec: Sequence) -> list[Fraction]:
        v = [Fraction(x) for x in vec]
        for r, pc in zip(self.rows, self.pivots):
            if v[pc]:
                f = v[pc]
                v = [a - f * b for a, b in zip(v, r)]
        return v

    def add(self, vec: Sequence) -> bool:
        v = self.reduce(vec)
        pc = next((i for i, x in enumerate(v) if x), None)
        if pc is None:
            return False
        inv = 1 / v[pc]
        v = [x * inv for x in v]
        self.rows.append(v)
        self.pivots.append(pc)
        return True


def rational_rank(rows: Sequence[Sequence[int]]) -> int:
    if not rows:
        return 0
    ech = RationalEchelon(len(rows[0]))
    for r in rows:
        ech.add(r)
    return ech.rank


def _invert(rows: list[list[int]]) -> list[list[Fraction]]:
    n = len(rows)
    a = [[Fraction(x) for x in r] + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(rows)]
    for col in range(n):
        piv = next(i for i in range(col, n) if a[i][col])
        a[col], a[piv] = a[piv], a[col]
        inv = 1 / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for i in range(n):
            if i != col and a[i][col]:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[col])]
    return [r[n:] for r in a]


@dataclass
class CoefficientMatrix:
    """Rows are course functions evaluated on every member of the representative list."""

    members: IndecomposableSet
    courses: list[Course]
    rows: list[list[int]]
    trajectory: list[int] = field(default_factory=list)

    @property
    def rank(self) -> int:
        return rational_rank(self.rows)

    def left_inverse(self) -> list[list[Fraction]]:
        if not hasattr(self, "_inv"):
            if len(self.rows) != len(self.members):
                raise InsufficientCourses("Insufficient courses in the input")
            self._inv = _invert(self.rows)
        return self._inv


def build_coefficient_matrix(L: IndecomposableSet, courses: Sequence[Course],
                             require_full: bool = True) -> CoefficientMatrix:
    ech = RationalEchelon(len(L))
    chosen, rows, traj = [], [], []
    for course in courses:
        row = [course_value(M, course) for M in L.reps]
        if ech.add(row):
            chosen.append(course)
            rows.append(row)
            traj.append(ech.rank)
            if ech.rank == len(L):
                break
    if require_full and ech.rank < len(L):
        raise InsufficientCourses("Insufficient courses in the input")
    return CoefficientMatrix(L, chosen, rows, traj)


def evaluate_courses(target, courses: Sequence[Course], k: int | None = None, prime: int = 2) -> list[int]:
    """Course-function values of a module, or of H_k of a ladder filtration."""
    if isinstance(target, Representation):
        return [course_value(target, c) for c in courses]
    from .filtrations import LadderFiltration, zigzag_along_course
    from .quiver_rep import generalized_rank

    if not isinstance(target, LadderFiltration):
        raise TypeError("target must be a Representation or a LadderFiltration")
    if k is None:
        raise ValueError("homology degree k is required for filtration targets")
    out = []
    for c in courses:
        Z = zigzag_along_course(target, c, k, prime)
        out.append(generalized_rank(Z, 1, len(c)))
    return out


def decompose(target, C: CoefficientMatrix, k: int | None = None, prime: int = 2) -> dict[str, int]:
    vals = evaluate_courses(target, C.courses, k, prime)
    inv = C.left_inverse()
    out = {}
    for label, row in zip(C.members.labels, inv):
        x = sum(a * b for a, b in zip(row, vals))
        if x.denominator != 1 or x < 0:
            raise DecompositionError(f"non-integral or negative multiplicity {x} at {label}")
        out[label] = int(x)
    return out


def has_non_interval_summand(decomposition: dict[str, int], L: IndecomposableSet) -> bool:
    flags = dict(zip(L.labels, L.is_interval))
    return any(m and not flags[l] for l, m in decomposition.items())
