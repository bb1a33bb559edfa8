"""Courses, tours, essential assignments and alternating zigzag course discovery."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterable, Sequence

from .grid_poset import (
    GridPoint,
    Quiver,
    StaircaseInterval,
    essential_vertices,
    grid_leq,
    hasse_quiver,
)
from .quiver_rep import Representation, Shape, evaluate_path, generalized_rank


class NonLinearCourseError(ValueError):
    """The course quiver is not of type A_m."""


class InvalidCourseError(ValueError):
    pass


@dataclass(frozen=True)
class Course:
    """A connected quiver on vertices ``0..m-1`` with grid labels.

    Linear courses keep their arrows between consecutive vertices so that
    ``orientation`` is well defined.
    """

    labels: tuple[GridPoint, ...]
    arrows: tuple[tuple[int, int], ...]

    def __post_init__(self):
        for s, t in self.arrows:
            if not grid_leq(self.labels[s], self.labels[t]):
                raise InvalidCourseError(f"no grid path {self.labels[s]} -> {self.labels[t]}")

    @classmethod
    def linear(cls, orientation: str, labels: Sequence) -> "Course":
        labels = tuple(GridPoint(*v) for v in labels)
        if len(orientation) != len(labels) - 1:
            raise InvalidCourseError("orientation length must be one less than label count")
        arrows = tuple((i, i + 1) if c == "f" else (i + 1, i) for i, c in enumerate(orientation))
        return cls(labels, arrows)

    def __len__(self) -> int:
        return len(self.labels)

    @property
    def is_linear(self) -> bool:
        m = len(self.labels)
        return len(self.arrows) == m - 1 and all(abs(s - t) == 1 for s, t in self.arrows) and (
            len({min(a) for a in self.arrows}) == m - 1
        )

    @property
    def orientation(self) -> str:
        if not self.is_linear:
            raise NonLinearCourseError("course is not of type A_m")
        out = [""] * (len(self.labels) - 1)
        for s, t in self.arrows:
            out[min(s, t)] = "f" if t > s else "b"
        return "".join(out)

    def key(self) -> tuple:
        return (self.orientation, self.labels)

    def to_json(self) -> dict:
        return {"orientation": self.orientation, "labels": [list(v) for v in self.labels]}

    @classmethod
    def from_json(cls, obj: dict) -> "Course":
        return cls.linear(obj["orientation"], obj["labels"])

    def __str__(self) -> str:
        if not self.is_linear:
            return f"Course({self.labels}, {self.arrows})"
        parts = [f"{self.labels[0].x}{self.labels[0].y}"]
        for c, v in zip(self.orientation, self.labels[1:]):
            parts.append("→" if c == "f" else "←")
            parts.append(f"{v.x}{v.y}")
        return "".join(parts)


def course_from_quiver(Q: Quiver) -> Course:
    """Linearize a Hasse quiver when it is a path; otherwise keep it general."""
    order = Q.underlying_path()
    if order is None:
        idx = {v: i for i, v in enumerate(Q.vertices)}
        return Course(tuple(Q.vertices), tuple((idx[s], idx[t]) for s, t in Q.arrows))
    arrows = set(Q.arrows)

    def orient(seq):
        return "".join("f" if (a, b) in arrows else "b" for a, b in zip(seq, seq[1:]))

    rev = order[::-1]
    o1, o2 = orient(order), orient(rev)
    # prefer a forward first arrow, then the smaller starting label
    if (o2[:1] == "f") > (o1[:1] == "f") or ((o2[:1] == "f") == (o1[:1] == "f") and rev[0] < order[0]):
        order, o1 = rev, o2
    return Course.linear(o1, order)


@lru_cache(maxsize=None)
def assignment_ss(I: StaircaseInterval) -> Course:
    return course_from_quiver(hasse_quiver(essential_vertices(I), I))


def corner_complete_vertices(I: StaircaseInterval) -> frozenset[GridPoint]:
    E = essential_vertices(I)
    rows = {v.y for v in E}
    cols = {v.x for v in E}
    return frozenset(v for v in I.vertices if v.y in rows and v.x in cols)


@lru_cache(maxsize=None)
def assignment_cc(I: StaircaseInterval) -> Course:
    return course_from_quiver(hasse_quiver(corner_complete_vertices(I), I))


@lru_cache(maxsize=None)
def assignment_tot(I: StaircaseInterval) -> Course:
    return course_from_quiver(hasse_quiver(I.vertices, I))


ASSIGNMENTS: dict[str, Callable[[StaircaseInterval], Course]] = {
    "ss": assignment_ss,
    "cc": assignment_cc,
    "tot": assignment_tot,
}


def get_assignment(assignment) -> Callable[[StaircaseInterval], Course]:
    if callable(assignment):
        return assignment
    try:
        return ASSIGNMENTS[assignment]
    except KeyError:
        raise ValueError(f"unknown essential assignment {assignment!r}") from None


def is_essential_course(course: Course, I: StaircaseInterval) -> bool:
    labels = set(course.labels)
    return essential_vertices(I) <= labels <= I.vertices


def tour(M: Representation, course: Course) -> Representation:
    """Evaluate ``M`` along the course; a zigzag module when the course is linear."""
    if M.shape.kind != "grid":
        raise InvalidCourseError("tours are taken over grid modules")
    for v in course.labels:
        if not (1 <= v.x <= M.shape.p and 1 <= v.y <= M.shape.q):
            raise InvalidCourseError(f"label {v} outside the grid")
    dims = {i + 1: M.dim(v) for i, v in enumerate(course.labels)}
    if course.is_linear:
        shape = Shape.zigzag(course.orientation)
    else:
        shape = Shape.general(range(1, len(course) + 1), [(s + 1, t + 1) for s, t in course.arrows])
    maps = {(s + 1, t + 1): evaluate_path(M, course.labels[s], course.labels[t]) for s, t in course.arrows}
    return Representation(shape, dims, maps, M.prime, check=False)


def course_value(M: Representation, course: Course) -> int:
    """Multiplicity of the longest interval in the tour of M along a linear course."""
    if not course.is_linear:
        raise NonLinearCourseError("non-linear-course")
    return generalized_rank(tour(M, course), 1, len(course))


def course_function(course: Course) -> Callable[[Representation], int]:
    return lambda M: course_value(M, course)


def compressed_multiplicity(M: Representation, I: StaircaseInterval, assignment="ss") -> int:
    course = get_assignment(assignment)(I)
    if not course.is_linear:
        raise NonLinearCourseError(f"non-linear-course for {I}")
    return course_value(M, course)


def normalize_backward(orientation: str, labels: Sequence) -> tuple[str, tuple[GridPoint, ...]]:
    """Rewrite a course whose first arrow points backward so that it starts forward.

    ``x <- y -> ...`` becomes ``y -> x <- y -> ...`` by repeating the first arrow.
    """
    labels = tuple(GridPoint(*v) for v in labels)
    if not orientation.startswith("b"):
        return orientation, labels
    return "fb" + orientation[1:], (labels[1], labels[0]) + labels[1:]


# ---------------------------------------------------------------- enumeration


def nontrivial_paths(p: int, q: int) -> list[tuple[GridPoint, GridPoint]]:
    """Pairs u < v of grid vertices; commutativity identifies paths with their endpoints."""
    verts = [GridPoint(x, y) for y in range(1, q + 1) for x in range(1, p + 1)]
    return sorted((u, v) for u in verts for v in verts if u != v and grid_leq(u, v))


def _alternating_orientation(m: int) -> str:
    return "".join("f" if i % 2 == 0 else "b" for i in range(m - 1))


def enumerate_azc_bfs(p: int, q: int, N: int) -> list[Course]:
    """Alternating zigzag courses of type A_m, m <= N, grown breadth first."""
    paths = nontrivial_paths(p, q)
    starting = {}
    ending = {}
    for u, v in paths:
        starting.setdefault(u, []).append(v)
        ending.setdefault(v, []).append(u)
    verts = sorted(GridPoint(x, y) for y in range(1, q + 1) for x in range(1, p + 1))
    level = [(v,) for v in verts]
    out: list[Course] = []
    m = 1
    while level:
        out.extend(Course.linear(_alternating_orientation(m), labels) for labels in level)
        if m + 1 > N:
            break
        nxt = []
        for labels in level:
            last = labels[-1]
            if m % 2 == 1:
                nxt.extend(labels + (v,) for v in starting.get(last, []))
            else:
                nxt.extend(labels + (u,) for u in ending.get(last, []))
        level = sorted(nxt)
        m += 1
    return out


def enumerate_azc_enum(p: int, q: int, N: int) -> list[Course]:
    """Reference enumeration: filter every label sequence by the alternating rule."""
    verts = sorted(GridPoint(x, y) for y in range(1, q + 1) for x in range(1, p + 1))
    out = []
    for m in range(1, N + 1):
        found = []
        for labels in itertools.product(verts, repeat=m):
            ok = True
            for i in range(m - 1):
                a, b = labels[i], labels[i + 1]
                if i % 2 == 0:
                    ok = a != b and grid_leq(a, b)
                else:
                    ok = a != b and grid_leq(b, a)
                if not ok:
                    break
            if ok:
                found.append(labels)
        out.extend(Course.linear(_alternating_orientation(m), lab) for lab in sorted(found))
    return out


def courses_from_paths(paths: Iterable[tuple[GridPoint, GridPoint]]) -> Course:
    """The alternating course determined by a path sequence p_1, p_2, ...

    Consecutive paths share their target after odd steps and their source after
    even steps.
    """
    paths = [(GridPoint(*u), GridPoint(*v)) for u, v in paths]
    if not paths:
        raise InvalidCourseError("empty path sequence")
    labels = [paths[0][0], paths[0][1]]
    for i, (u, v) in enumerate(paths[1:], start=1):
        if i % 2 == 1:
            if v != labels[-1]:
                raise InvalidCourseError("paths must share targets after odd steps")
            labels.append(u)
        else:
            if u != labels[-1]:
                raise InvalidCourseError("paths must share sources after even steps")
            labels.append(v)
    return Course.linear(_alternating_orientation(len(labels)), labels)
