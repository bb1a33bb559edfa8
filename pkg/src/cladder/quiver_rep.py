"""Representations of zigzag quivers, commutative ladders and small grids."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping

import numpy as np

from . import field_linalg as fl
from .grid_poset import GridPoint, grid_leq

Vertex = object  # int for zigzags, GridPoint for grids, anything for general quivers


class NoPathError(ValueError):
    pass


class NaturalityError(ValueError):
    pass


@dataclass(frozen=True)
class Shape:
    """``zigzag`` (vertices 1..n, orientation string), ``grid`` (p x q) or ``general``."""

    kind: str
    p: int = 0
    q: int = 1
    orientation: str = ""
    general_vertices: tuple = ()
    general_arrows: tuple = ()

    @classmethod
    def zigzag(cls, orientation: str) -> "Shape":
        if set(orientation) - {"f", "b"}:
            raise ValueError(f"bad orientation string {orientation!r}")
        return cls("zigzag", p=len(orientation) + 1, orientation=orientation)

    @classmethod
    def ladder(cls, n: int) -> "Shape":
        return cls("grid", p=n, q=2)

    @classmethod
    def grid(cls, p: int, q: int) -> "Shape":
        return cls("grid", p=p, q=q)

    @classmethod
    def general(cls, vertices: Iterable, arrows: Iterable[tuple]) -> "Shape":
        return cls("general", general_vertices=tuple(vertices), general_arrows=tuple(arrows))

    @property
    def is_ladder(self) -> bool:
        return self.kind == "grid" and self.q == 2

    @cached_property
    def vertices(self) -> tuple:
        if self.kind == "zigzag":
            return tuple(range(1, self.p + 1))
        if self.kind == "grid":
            return tuple(GridPoint(x, y) for y in range(1, self.q + 1) for x in range(1, self.p + 1))
        return self.general_vertices

    @cached_property
    def arrows(self) -> tuple[tuple, ...]:
        if self.kind == "zigzag":
            return tuple(
                (i, i + 1) if c == "f" else (i + 1, i) for i, c in enumerate(self.orientation, start=1)
            )
        if self.kind == "grid":
            out = []
            for v in self.vertices:
                if v.x < self.p:
                    out.append((v, GridPoint(v.x + 1, v.y)))
                if v.y < self.q:
                    out.append((v, GridPoint(v.x, v.y + 1)))
            return tuple(out)
        return self.general_arrows

    def to_json(self) -> dict:
        if self.kind == "zigzag":
            return {"kind": "zigzag", "n": self.p, "orientation": self.orientation}
        if self.kind == "grid":
            return {"kind": "grid", "p": self.p, "q": self.q}
        raise ValueError("general shapes are not serialized")

    @classmethod
    def from_json(cls, obj: dict) -> "Shape":
        if obj["kind"] == "zigzag":
            return cls.zigzag(obj["orientation"])
        if obj["kind"] == "grid":
            return cls.grid(obj["p"], obj["q"])
        raise ValueError(f"unknown shape kind {obj['kind']!r}")


class Representation:
    """Per-vertex dimensions and per-arrow matrices over F_p.

    Grid representations are checked for commutativity on construction.
    Matrices map the source space to the target space (``target x source``).
    """

    def __init__(self, shape: Shape, dims: Mapping, maps: Mapping | None = None,
                 prime: int = fl.DEFAULT_PRIME, check: bool = True):
        self.shape = shape
        self.prime = prime
        self.dims = {v: int(dims.get(v, 0)) for v in shape.vertices}
        self.maps: dict[tuple, np.ndarray] = {}
        maps = maps or {}
        for a in shape.arrows:
            s, t = a
            if a in maps:
                m = fl.as_matrix(maps[a], prime).reshape(self.dims[t], self.dims[s])
            else:
                m = fl.zeros(self.dims[t], self.dims[s])
            self.maps[a] = m
        self._paths: dict[tuple, np.ndarray] = {}
        if check and shape.kind == "grid" and not check_commutativity(self):
            raise ValueError("grid representation does not commute")

    def dim(self, v) -> int:
        return self.dims.get(v, 0)

    @property
    def dimvec(self) -> tuple[int, ...]:
        return tuple(self.dims[v] for v in self.shape.vertices)

    @property
    def total_dim(self) -> int:
        return sum(self.dims.values())

    def is_zero(self) -> bool:
        return self.total_dim == 0

    def __repr__(self) -> str:
        return f"Representation({self.shape.kind}, dims={self.dimvec})"

    def to_json(self) -> dict:
        def key(v):
            return list(v) if isinstance(v, tuple) else v

        out = {
            "schema": "cladder.representation/1",
            "shape": self.shape.to_json(),
            "field": self.prime,
            "dims": [[key(v), d] for v, d in self.dims.items()],
            "arrows": [
                {"from": key(s), "to": key(t), "matrix": self.maps[(s, t)].tolist()}
                for s, t in self.shape.arrows
            ],
        }
        if self.shape.kind == "zigzag":
            out["orientation"] = self.shape.orientation
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "Representation":
        shape = Shape.from_json(obj["shape"])

        def key(v):
            return GridPoint(*v) if isinstance(v, list) else v

        dims = {key(v): d for v, d in obj["dims"]}
        maps = {}
        for a in obj["arrows"]:
            s, t = key(a["from"]), key(a["to"])
            maps[(s, t)] = np.array(a["matrix"], dtype=np.int64).reshape(dims.get(t, 0), dims.get(s, 0))
        return cls(shape, dims, maps, prime=obj.get("field", fl.DEFAULT_PRIME))


def zero_rep(shape: Shape, prime: int = fl.DEFAULT_PRIME) -> Representation:
    return Representation(shape, {}, {}, prime)


def check_commutativity(M: Representation) -> bool:
    if M.shape.kind != "grid":
        return True
    p, q = M.shape.p, M.shape.q
    P = M.prime
    for y in range(1, q):
        for x in range(1, p):
            a, b = GridPoint(x, y), GridPoint(x + 1, y)
            c, d = GridPoint(x, y + 1), GridPoint(x + 1, y + 1)
            right_up = fl.mul(M.maps[(b, d)], M.maps[(a, b)], P)
            up_right = fl.mul(M.maps[(c, d)], M.maps[(a, c)], P)
            if not np.array_equal(right_up, up_right):
                return False
    return True


def interval_module(I, shape: Shape, prime: int = fl.DEFAULT_PRIME) -> Representation:
    """V_I: a one-dimensional space on I, identities inside, zero elsewhere.

    For zigzags ``I`` is a pair ``(b, d)``; for grids a ``StaircaseInterval``.
    """
    if shape.kind == "zigzag":
        b, d = I
        if not 1 <= b <= d <= shape.p:
            raise ValueError(f"interval {I} out of range")
        support = set(range(b, d + 1))
    elif shape.kind == "grid":
        if not I.fits(shape.p, shape.q):
            raise ValueError(f"interval {I} does not fit {shape}")
        support = I.vertices
    else:
        support = set(I)
    dims = {v: 1 for v in shape.vertices if v in support}
    maps = {a: [[1]] for a in shape.arrows if a[0] in support and a[1] in support}
    return Representation(shape, dims, maps, prime, check=False)


def direct_sum(Ms: Iterable[Representation], shape: Shape | None = None,
               prime: int | None = None) -> Representation:
    Ms = list(Ms)
    if not Ms:
        if shape is None:
            raise ValueError("empty direct sum needs a shape")
        return zero_rep(shape, prime or fl.DEFAULT_PRIME)
    shape = shape or Ms[0].shape
    P = Ms[0].prime
    for M in Ms:
        if M.shape != shape:
            raise ValueError("shape mismatch in direct sum")
        if M.prime != P:
            raise ValueError("field mismatch in direct sum")
    dims = {v: sum(M.dims[v] for M in Ms) for v in shape.vertices}
    maps = {a: fl.block_diag([M.maps[a] for M in Ms]) for a in shape.arrows}
    return Representation(shape, dims, maps, P, check=False)


def _arrow_map(M: Representation, s, t) -> np.ndarray:
    return M.maps[(s, t)]


def evaluate_path(M: Representation, frm, to) -> np.ndarray:
    """Composite along the monotone path frm -> to: horizontal steps, then vertical."""
    key = (frm, to)
    if key in M._paths:
        return M._paths[key]
    shape = M.shape
    P = M.prime
    if frm == to:
        out = fl.identity(M.dim(frm))
    elif shape.kind == "grid":
        frm, to = GridPoint(*frm), GridPoint(*to)
        if not grid_leq(frm, to):
            raise NoPathError(f"no path {frm} -> {to}")
        out = fl.identity(M.dim(frm))
        x, y = frm
        while x < to.x:
            out = fl.mul(M.maps[(GridPoint(x, y), GridPoint(x + 1, y))], out, P)
            x += 1
        while y < to.y:
            out = fl.mul(M.maps[(GridPoint(x, y), GridPoint(x, y + 1))], out, P)
            y += 1
    elif shape.kind == "zigzag":
        step = 1 if to > frm else -1
        out = fl.identity(M.dim(frm))
        for i in range(frm, to, step):
            if (i, i + step) not in M.maps:
                raise NoPathError(f"no path {frm} -> {to}")
            out = fl.mul(M.maps[(i, i + step)], out, P)
    else:
        if (frm, to) not in M.maps:
            raise NoPathError("general quivers only evaluate single arrows")
        out = M.maps[(frm, to)]
    M._paths[key] = out
    return out


def restrict(M: Representation, subgrid) -> Representation:
    """Restriction to a sub-rectangle ``((x0, y0), (x1, y1))`` of a grid, or to a
    zigzag range ``(b, d)``; vertices are re-indexed from 1."""
    shape = M.shape
    if shape.kind == "zigzag":
        b, d = subgrid
        sub = Shape.zigzag(shape.orientation[b - 1:d - 1])
        dims = {i - b + 1: M.dims[i] for i in range(b, d + 1)}
        maps = {(s - b + 1, t - b + 1): m for (s, t), m in M.maps.items()
                if b <= s <= d and b <= t <= d}
        return Representation(sub, dims, maps, M.prime, check=False)
    (x0, y0), (x1, y1) = subgrid
    sub = Shape.grid(x1 - x0 + 1, y1 - y0 + 1)

    def rel(v):
        return GridPoint(v.x - x0 + 1, v.y - y0 + 1)

    inside = lambda v: x0 <= v.x <= x1 and y0 <= v.y <= y1  # noqa: E731
    dims = {rel(v): d for v, d in M.dims.items() if inside(v)}
    maps = {(rel(s), rel(t)): m for (s, t), m in M.maps.items() if inside(s) and inside(t)}
    return Representation(sub, dims, maps, M.prime, check=False)


def row_module(M: Representation, row: int) -> Representation:
    """Row ``row`` of a grid module as an equi-oriented zigzag module."""
    p = M.shape.p
    sub = Shape.zigzag("f" * (p - 1))
    dims = {x: M.dims[GridPoint(x, row)] for x in range(1, p + 1)}
    maps = {(x, x + 1): M.maps[(GridPoint(x, row), GridPoint(x + 1, row))] for x in range(1, p)}
    return Representation(sub, dims, maps, M.prime, check=False)


# ---------------------------------------------------------------- zigzag algebra


def generalized_rank(Z: Representation, b: int, d: int) -> int:
    """Rank of the canonical map lim -> colim of Z restricted to [b, d]."""
    if Z.shape.kind != "zigzag":
        raise ValueError("generalized rank needs a zigzag module")
    n = Z.shape.p
    if not 1 <= b <= d <= n:
        raise IndexError(f"[{b},{d}] outside [1,{n}]")
    P = Z.prime
    dims = [Z.dims[i] for i in range(b, d + 1)]
    if min(dims) == 0:
        return 0
    if b == d:
        return dims[0]
    offs = np.concatenate([[0], np.cumsum(dims)])
    D = int(offs[-1])
    arrows = [a for a in Z.shape.arrows if b <= min(a) and max(a) <= d]
    if all(s < t for s, t in arrows):
        return fl.rank(evaluate_path(Z, b, d), P)
    if all(s > t for s, t in arrows):
        return fl.rank(evaluate_path(Z, d, b), P)
    cons, rels = [], []
    for s, t in arrows:
        A = Z.maps[(s, t)]
        si, ti = s - b, t - b
        # v_t = A v_s
        c = fl.zeros(dims[ti], D)
        c[:, offs[si]:offs[si + 1]] = A
        c[:, offs[ti]:offs[ti + 1]] = (-fl.identity(dims[ti])) % P
        cons.append(c)
        # relation iota_t A e - iota_s e
        r = fl.zeros(D, dims[si])
        r[offs[ti]:offs[ti + 1], :] = A
        r[offs[si]:offs[si + 1], :] = (-fl.identity(dims[si])) % P
        rels.append(r)
    lim = fl.kernel_basis(np.vstack(cons), P)
    if lim.shape[1] == 0:
        return 0
    R = np.hstack(rels)
    L = fl.zeros(D, lim.shape[1])
    L[: dims[0], :] = lim[: dims[0], :]
    return fl.rank(np.hstack([R, L]), P) - fl.rank(R, P)


def decompose_an(Z: Representation) -> dict[tuple[int, int], int]:
    """Interval multiplicities of a zigzag module by inclusion-exclusion of granks."""
    n = Z.shape.p
    gr: dict[tuple[int, int], int] = {}

    def g(b, d):
        if b < 1 or d > n:
            return 0
        if (b, d) not in gr:
            gr[(b, d)] = generalized_rank(Z, b, d)
        return gr[(b, d)]

    out = {}
    for b in range(1, n + 1):
        for d in range(b, n + 1):
            m = g(b, d) - g(b - 1, d) - g(b, d + 1) + g(b - 1, d + 1)
            if m < 0:
                raise AssertionError(f"negative zigzag multiplicity at {(b, d)}")
            if m:
                out[(b, d)] = m
    return out


# ---------------------------------------------------------------- morphisms


class Morphism:
    """Per-vertex matrices ``comps[v]: source_v -> target_v``."""

    def __init__(self, source: Representation, target: Representation, comps: Mapping | None = None,
                 check: bool = True):
        if source.shape != target.shape:
            raise ValueError("morphism between different shapes")
        self.source, self.target = source, target
        P = source.prime
        comps = comps or {}
        self.comps = {}
        for v in source.shape.vertices:
            shp = (target.dims[v], source.dims[v])
            if v in comps:
                self.comps[v] = fl.as_matrix(comps[v], P).reshape(shp)
            else:
                self.comps[v] = fl.zeros(*shp)
        if check and not self.is_natural():
            raise NaturalityError("components do not commute with the structure maps")

    @property
    def prime(self) -> int:
        return self.source.prime

    def is_natural(self) -> bool:
        P = self.prime
        for a in self.source.shape.arrows:
            s, t = a
            lhs = fl.mul(self.comps[t], self.source.maps[a], P)
            rhs = fl.mul(self.target.maps[a], self.comps[s], P)
            if not np.array_equal(lhs, rhs):
                return False
        return True

    def is_zero(self) -> bool:
        return all(fl.is_zero(m) for m in self.comps.values())

    def compose(self, first: "Morphism") -> "Morphism":
        """``self ∘ first``."""
        P = self.prime
        comps = {v: fl.mul(self.comps[v], first.comps[v], P) for v in self.source.shape.vertices}
        return Morphism(first.source, self.target, comps, check=False)

    def __matmul__(self, other: "Morphism") -> "Morphism":
        return self.compose(other)

    def equals(self, other: "Morphism") -> bool:
        return all(np.array_equal(self.comps[v], other.comps[v]) for v in self.source.shape.vertices)

    def is_injective(self) -> bool:
        return all(fl.rank(m, self.prime) == m.shape[1] for m in self.comps.values())

    def is_surjective(self) -> bool:
        return all(fl.rank(m, self.prime) == m.shape[0] for m in self.comps.values())


def identity_morphism(M: Representation) -> Morphism:
    return Morphism(M, M, {v: fl.identity(d) for v, d in M.dims.items()}, check=False)


def zero_morphism(M: Representation, N: Representation) -> Morphism:
    return Morphism(M, N, {}, check=False)


def image_subrep(f: Morphism) -> tuple[Representation, Morphism, Morphism]:
    """``(Im f, j_f: Im f -> N, q_f: M -> Im f)`` with ``j_f ∘ q_f = f``."""
    if not f.is_natural():
        raise NaturalityError("not a morphism")
    P = f.prime
    N = f.target
    B = {v: fl.image_basis(f.comps[v], P) for v in N.shape.vertices}
    dims = {v: B[v].shape[1] for v in B}
    maps = {}
    for a in N.shape.arrows:
        s, t = a
        maps[a] = fl.solve(B[t], fl.mul(N.maps[a], B[s], P), P)
    Im = Representation(N.shape, dims, maps, P, check=False)
    j = Morphism(Im, N, B, check=False)
    q = Morphism(f.source, Im, {v: fl.solve(B[v], f.comps[v], P) for v in B}, check=False)
    return Im, j, q


def kernel_subrep(f: Morphism) -> tuple[Representation, Morphism]:
    """``(Ker f, inclusion into M)``."""
    P = f.prime
    M = f.source
    K = {v: fl.kernel_basis(f.comps[v], P) for v in M.shape.vertices}
    for v in K:
        if K[v].shape[0] != M.dims[v]:
            K[v] = fl.zeros(M.dims[v], 0)
    dims = {v: K[v].shape[1] for v in K}
    maps = {a: fl.solve(K[a[1]], fl.mul(M.maps[a], K[a[0]], P), P) for a in M.shape.arrows}
    Ker = Representation(M.shape, dims, maps, P, check=False)
    return Ker, Morphism(Ker, M, K, check=False)


def cokernel_rep(f: Morphism) -> tuple[Representation, Morphism]:
    """``(Coker f, projection from N)``."""
    P = f.prime
    N = f.target
    proj, sec = {}, {}
    for v in N.shape.vertices:
        proj[v], sec[v] = fl.cokernel_projection(f.comps[v], P)
    dims = {v: proj[v].shape[0] for v in proj}
    maps = {a: fl.mul(fl.mul(proj[a[1]], N.maps[a], P), sec[a[0]], P) for a in N.shape.arrows}
    C = Representation(N.shape, dims, maps, P, check=False)
    return C, Morphism(N, C, proj, check=False)


def hom_space(M: Representation, N: Representation) -> list[Morphism]:
    """A basis of Hom(M, N) obtained by solving the naturality equations."""
    if M.shape != N.shape:
        raise ValueError("shape mismatch")
    P = M.prime
    verts = M.shape.vertices
    offs, total = {}, 0
    for v in verts:
        offs[v] = total
        total += N.dims[v] * M.dims[v]
    if total == 0:
        return []
    rows = []
    for a in M.shape.arrows:
        s, t = a
        A, B = M.maps[a], N.maps[a]
        # phi_t A - B phi_s = 0, phi stored row-major
        nt, ms = N.dims[t], M.dims[s]
        mt, ns = M.dims[t], N.dims[s]
        if nt == 0 or ms == 0:
            continue
        block = fl.zeros(nt * ms, total)
        # (phi_t A)[i, j] = sum_k phi_t[i, k] A[k, j]
        for i in range(nt):
            for j in range(ms):
                r = i * ms + j
                for k in range(mt):
                    block[r, offs[t] + i * mt + k] += A[k, j]
                for k in range(ns):
                    block[r, offs[s] + k * ms + j] -= B[i, k]
        rows.append(block % P)
    basis = fl.kernel_basis(np.vstack(rows), P) if rows else fl.identity(total)
    out = []
    for c in range(basis.shape[1]):
        vec = basis[:, c]
        comps = {v: vec[offs[v]: offs[v] + N.dims[v] * M.dims[v]].reshape(N.dims[v], M.dims[v]) for v in verts}
        out.append(Morphism(M, N, comps, check=False))
    return out


def random_morphism(M: Representation, N: Representation, rng: np.random.Generator) -> Morphism:
    """A uniformly random element of Hom(M, N)."""
    basis = hom_space(M, N)
    P = M.prime
    comps = {v: fl.zeros(N.dims[v], M.dims[v]) for v in M.shape.vertices}
    for h in basis:
        c = int(rng.integers(P))
        for v in comps:
            comps[v] = (comps[v] + c * h.comps[v]) % P
    return Morphism(M, N, comps, check=False)
