"""Search for the non-interval indecomposables of CL(4) over F_2 and write the data asset.

A ladder module is a morphism between its two row modules, so sampling random
row maps and then a random element of Hom(lower, upper) gives a uniformly
random commutative module for a fixed dimension vector. Modules whose
endomorphism ring is one-dimensional are indecomposable; CL(4) is
representation-directed, so one brick per dimension vector suffices.
"""

from __future__ import annotations

import argparse
import itertools
import time
from pathlib import Path

import numpy as np

from cladder.courses import enumerate_azc_bfs
from cladder.decompose_finite import (
    CL4_ASSET,
    build_coefficient_matrix,
    interval_members,
    is_brick,
    save_indecomposables,
)
from cladder.grid_poset import GridPoint
from cladder.quiver_rep import Representation, Shape, hom_space

N_COLS = 4
EXPECTED_NON_INTERVALS = 21


def random_row(dims, rng, prime):
    shape = Shape.zigzag("f" * (len(dims) - 1))
    maps = {(i, i + 1): rng.integers(0, prime, (dims[i], dims[i - 1])) for i in range(1, len(dims))}
    return Representation(shape, dict(zip(range(1, len(dims) + 1), dims)), maps, prime)


def random_ladder(lower, upper, rng, prime):
    lo, up = random_row(lower, rng, prime), random_row(upper, rng, prime)
    homs = hom_space(lo, up)
    coeffs = rng.integers(0, prime, len(homs))
    P = GridPoint
    maps = {}
    for x in range(1, N_COLS):
        maps[(P(x, 1), P(x + 1, 1))] = lo.maps[(x, x + 1)]
        maps[(P(x, 2), P(x + 1, 2))] = up.maps[(x, x + 1)]
    for x in range(1, N_COLS + 1):
        vert = np.zeros((upper[x - 1], lower[x - 1]), dtype=np.int64)
        for c, h in zip(coeffs, homs):
            vert = (vert + c * h.comps[x]) % prime
        maps[(P(x, 1), P(x, 2))] = vert
    dims = {P(x, 1): lower[x - 1] for x in range(1, N_COLS + 1)}
    dims.update({P(x, 2): upper[x - 1] for x in range(1, N_COLS + 1)})
    return Representation(Shape.ladder(N_COLS), dims, maps, prime)


def tits_form(lower, upper) -> int:
    """Euler form of the ladder algebra: vertices minus arrows plus commutativity relations."""
    q = sum(a * a for a in lower) + sum(a * a for a in upper)
    q -= sum(lower[x] * lower[x + 1] + upper[x] * upper[x + 1] for x in range(N_COLS - 1))
    q -= sum(lower[x] * upper[x] for x in range(N_COLS))
    q += sum(lower[x] * upper[x + 1] for x in range(N_COLS - 1))
    return q


def connected_support(lower, upper) -> bool:
    cells = {(x, 1) for x in range(N_COLS) if lower[x]} | {(x, 2) for x in range(N_COLS) if upper[x]}
    if not cells:
        return False
    seen, stack = set(), [next(iter(cells))]
    while stack:
        x, y = stack.pop()
        if (x, y) in seen:
            continue
        seen.add((x, y))
        for nb in ((x - 1, y), (x + 1, y), (x, 3 - y)):
            if nb in cells:
                stack.append(nb)
    return seen == cells


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--trials", type=int, default=2000, help="samples per dimension vector")
    ap.add_argument("--max-dim", type=int, default=3)
    ap.add_argument("--out", type=Path, default=Path(__file__).resolve().parents[1] / "src/cladder/data" / CL4_ASSET)
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)
    prime = 2
    t0 = time.time()
    found: dict[tuple, Representation] = {}
    for vec in itertools.product(range(args.max_dim + 1), repeat=2 * N_COLS):
        lower, upper = vec[:N_COLS], vec[N_COLS:]
        if max(vec) < 2 or tits_form(lower, upper) != 1 or not connected_support(lower, upper):
            continue  # thin indecomposables of a ladder are intervals
        for _ in range(args.trials):
            M = random_ladder(lower, upper, rng, prime)
            if is_brick(M):
                found[vec] = M
                break
    print(f"found {len(found)} non-interval bricks in {time.time() - t0:.1f}s")
    for vec in sorted(found):
        print("  lower", vec[:N_COLS], "upper", vec[N_COLS:])
    if len(found) != EXPECTED_NON_INTERVALS:
        raise SystemExit(f"expected {EXPECTED_NON_INTERVALS} non-interval classes")

    L = interval_members(N_COLS, prime)
    for i, vec in enumerate(sorted(found), 1):
        L.labels.append(f"N{i}")
        L.reps.append(found[vec])
        L.is_interval.append(False)
        L.intervals.append(None)
    C = build_coefficient_matrix(L, enumerate_azc_bfs(N_COLS, 2, 6))
    print(f"coefficient matrix rank {len(C.rows)} from {len(C.courses)} courses")
    save_indecomposables(L, args.out, note=f"random brick search over F_2, seed {args.seed}")
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
