import itertools
from collections import Counter

import hypothesis.strategies as st
import numpy as np
import pytest
from hypothesis import given, settings

from cladder import field_linalg as fl
from cladder.grid_poset import GridPoint, enumerate_intervals, lower, two_row
from cladder.quiver_rep import (
    Morphism,
    NaturalityError,
    NoPathError,
    Representation,
    Shape,
    check_commutativity,
    cokernel_rep,
    decompose_an,
    direct_sum,
    evaluate_path,
    generalized_rank,
    hom_space,
    identity_morphism,
    image_subrep,
    interval_module,
    kernel_subrep,
    random_morphism,
    restrict,
    row_module,
    zero_morphism,
    zero_rep,
)

from modgen import change_basis, random_interval_sum


def span_size(vectors, p=2):
    if not vectors:
        return 1
    V = np.array(vectors, dtype=np.int64)
    return len({tuple(np.mod(np.array(c) @ V, p)) for c in itertools.product(range(p), repeat=len(V))})


def brute_grank(Z, b, d):
    """lim -> colim by enumerating every vector of the direct sum over F_2."""
    idx = list(range(b, d + 1))
    dims = [Z.dims[i] for i in idx]
    offs = np.concatenate([[0], np.cumsum(dims)]).astype(int)
    D = int(offs[-1])
    arrows = [a for a in Z.shape.arrows if b <= min(a) and max(a) <= d]

    def part(v, i):
        return v[offs[i - b]:offs[i - b + 1]]

    lim = []
    for bits in itertools.product((0, 1), repeat=D):
        v = np.array(bits, dtype=np.int64)
        if all(np.array_equal(np.mod(Z.maps[(s, t)] @ part(v, s), 2), part(v, t)) for s, t in arrows):
            lim.append(v)
    rels = []
    for s, t in arrows:
        for j in range(Z.dims[s]):
            e = np.zeros(D, dtype=np.int64)
            e[offs[s - b] + j] = 1
            r = e.copy()
            r[offs[t - b]:offs[t - b + 1]] = Z.maps[(s, t)][:, j]
            r[offs[s - b] + j] = 1
            rels.append(np.mod(r, 2))
    images = []
    for v in lim:
        w = np.zeros(D, dtype=np.int64)
        w[:dims[0]] = v[:dims[0]]
        images.append(w)
    full = span_size(rels + images)
    base = span_size(rels)
    return int(round(np.log2(full // base)))


orientations = st.text(alphabet="fb", min_size=0, max_size=4)


@st.composite
def zigzag_sums(draw, max_summands=4):
    o = draw(orientations)
    n = len(o) + 1
    shape = Shape.zigzag(o)
    bars = draw(st.lists(st.tuples(st.integers(1, n), st.integers(1, n)).map(lambda t: (min(t), max(t))),
                         max_size=max_summands))
    seed = draw(st.integers(0, 2**32 - 1))
    M = direct_sum([interval_module(bar, shape) for bar in bars], shape)
    return change_basis(M, np.random.default_rng(seed)), Counter(bars)


@given(zigzag_sums())
@settings(max_examples=150, deadline=None)
def test_decompose_an_recovers_construction(data):
    Z, bars = data
    assert decompose_an(Z) == dict(bars)


@given(zigzag_sums(max_summands=3))
@settings(max_examples=60, deadline=None)
def test_generalized_rank_matches_enumeration(data):
    Z, _ = data
    n = Z.shape.p
    for b in range(1, n + 1):
        for d in range(b, n + 1):
            if sum(Z.dims[i] for i in range(b, d + 1)) <= 10:
                assert generalized_rank(Z, b, d) == brute_grank(Z, b, d)


@given(zigzag_sums())
@settings(max_examples=60, deadline=None)
def test_generalized_rank_is_monotone(data):
    Z, _ = data
    n = Z.shape.p
    for b, d in itertools.combinations_with_replacement(range(1, n + 1), 2):
        for b2 in range(1, b + 1):
            for d2 in range(d, n + 1):
                assert generalized_rank(Z, b2, d2) <= generalized_rank(Z, b, d)


def test_generalized_rank_examples():
    s = Shape.zigzag("ff")
    Z = direct_sum([interval_module((1, 2), s), interval_module((2, 3), s)])
    assert generalized_rank(Z, 1, 3) == 0
    assert brute_grank(Z, 1, 3) == 0
    full = interval_module((1, 3), s)
    assert all(generalized_rank(full, b, d) == 1 for b in range(1, 4) for d in range(b, 4))
    fb = Representation(Shape.zigzag("fb"), {1: 1, 2: 1, 3: 1}, {(1, 2): [[1]], (3, 2): [[1]]})
    assert decompose_an(fb) == {(1, 3): 1}
    k2 = Representation(Shape.zigzag("ff"), {1: 1, 2: 1}, {(1, 2): [[1]]})
    assert decompose_an(k2) == {(1, 2): 1}
    with pytest.raises(IndexError):
        generalized_rank(full, 0, 2)


@pytest.mark.parametrize("seed", range(5))
def test_equioriented_rank_is_composite_rank(seed):
    rng = np.random.default_rng(seed)
    M, _ = random_interval_sum(6, rng)
    Z = row_module(M, 1)
    for b in range(1, 7):
        for d in range(b, 7):
            assert generalized_rank(Z, b, d) == fl.rank(evaluate_path(Z, b, d))


def test_interval_module_dimension_vector():
    M = interval_module(two_row(2, 3, 2, 4), Shape.ladder(4))
    assert [M.dims[GridPoint(x, 1)] for x in range(1, 5)] == [0, 1, 1, 1]
    assert [M.dims[GridPoint(x, 2)] for x in range(1, 5)] == [0, 1, 1, 0]
    I = two_row(1, 3, 2, 3)
    V = interval_module(I, Shape.ladder(4))
    assert [V.dims[GridPoint(x, 2)] for x in range(1, 5)] == [1, 1, 1, 0]
    assert [V.dims[GridPoint(x, 1)] for x in range(1, 5)] == [0, 1, 1, 0]


@pytest.mark.parametrize("p,q", [(4, 2), (3, 3)])
def test_every_interval_module_commutes(p, q):
    for I in enumerate_intervals(p, q):
        assert check_commutativity(interval_module(I, Shape.grid(p, q)))


def test_non_commuting_grid_rejected():
    P = GridPoint
    dims = {P(1, 1): 1, P(2, 1): 1, P(1, 2): 1, P(2, 2): 1}
    maps = {(P(1, 1), P(2, 1)): [[1]], (P(2, 1), P(2, 2)): [[1]], (P(1, 1), P(1, 2)): [[0]],
            (P(1, 2), P(2, 2)): [[1]]}
    with pytest.raises(ValueError):
        Representation(Shape.ladder(2), dims, maps)


def test_evaluate_path_on_interval_modules():
    I = two_row(2, 3, 2, 4)
    V = interval_module(I, Shape.ladder(4))
    assert np.array_equal(evaluate_path(V, GridPoint(2, 1), GridPoint(3, 2)), [[1]])
    assert fl.is_zero(evaluate_path(V, GridPoint(2, 1), GridPoint(4, 2)))
    assert np.array_equal(evaluate_path(V, GridPoint(3, 1), GridPoint(3, 1)), [[1]])
    with pytest.raises(NoPathError):
        evaluate_path(V, GridPoint(3, 2), GridPoint(3, 1))


@pytest.mark.parametrize("seed", range(8))
def test_direct_sum_dimension_vectors_add(seed):
    rng = np.random.default_rng(seed)
    M, _ = random_interval_sum(4, rng)
    N, _ = random_interval_sum(4, rng)
    S = direct_sum([M, N])
    assert S.dimvec == tuple(a + b for a, b in zip(M.dimvec, N.dimvec))
    Z = direct_sum([M, zero_rep(M.shape)])
    assert Z.dimvec == M.dimvec


def test_direct_sum_shape_mismatch():
    with pytest.raises(ValueError):
        direct_sum([zero_rep(Shape.ladder(2)), zero_rep(Shape.ladder(3))])


def test_restrict_and_row_module():
    V = interval_module(two_row(1, 3, 2, 4), Shape.ladder(4))
    R = restrict(V, ((2, 1), (3, 2)))
    assert R.shape == Shape.ladder(2)
    assert R.dimvec == (1, 1, 1, 1)
    assert decompose_an(row_module(V, 1)) == {(2, 4): 1}
    assert decompose_an(row_module(V, 2)) == {(1, 3): 1}


def test_json_roundtrip():
    rng = np.random.default_rng(3)
    M, _ = random_interval_sum(4, rng)
    N = Representation.from_json(M.to_json())
    assert N.dims == M.dims
    assert all(np.array_equal(N.maps[a], M.maps[a]) for a in M.shape.arrows)


def canonical_surjection():
    shape = Shape.ladder(3)
    A = interval_module(lower(1, 3), shape)
    B = interval_module(lower(1, 2), shape)
    return Morphism(A, B, {GridPoint(1, 1): [[1]], GridPoint(2, 1): [[1]]})


def test_image_of_canonical_map():
    f = canonical_surjection()
    Im, j, q = image_subrep(f)
    assert decompose_an(row_module(Im, 1)) == {(1, 2): 1}
    assert j.is_injective() and q.is_surjective()
    assert (j @ q).equals(f)


def test_naturality_enforced():
    shape = Shape.ladder(3)
    A = interval_module(lower(1, 2), shape)
    B = interval_module(lower(1, 3), shape)
    with pytest.raises(NaturalityError):
        Morphism(A, B, {GridPoint(1, 1): [[1]], GridPoint(2, 1): [[1]]})


@pytest.mark.parametrize("seed", range(12))
def test_kernel_image_cokernel_dimensions(seed):
    rng = np.random.default_rng(seed)
    M, _ = random_interval_sum(3, rng, max_dim=3, max_summands=4)
    N, _ = random_interval_sum(3, rng, max_dim=3, max_summands=4)
    f = random_morphism(M, N, rng)
    assert f.is_natural()
    Im, j, q = image_subrep(f)
    K, inc = kernel_subrep(f)
    C, proj = cokernel_rep(f)
    for v in M.shape.vertices:
        assert K.dims[v] + Im.dims[v] == M.dims[v]
        assert C.dims[v] == N.dims[v] - Im.dims[v]
    assert (f @ inc).is_zero()
    assert (proj @ f).is_zero()
    assert check_commutativity(Im) and check_commutativity(K) and check_commutativity(C)


def test_trivial_kernels_and_cokernels():
    f = canonical_surjection()
    assert cokernel_rep(f)[0].is_zero()
    M = f.source
    assert kernel_subrep(identity_morphism(M))[0].is_zero()
    K, _ = kernel_subrep(zero_morphism(M, f.target))
    assert K.dims == M.dims
    assert image_subrep(identity_morphism(M))[0].dims == M.dims
    assert image_subrep(zero_morphism(M, f.target))[0].is_zero()


def test_hom_space_of_interval_modules():
    shape = Shape.ladder(3)
    A = interval_module(lower(1, 3), shape)
    B = interval_module(lower(1, 2), shape)
    assert len(hom_space(A, B)) == 1
    assert len(hom_space(B, A)) == 0
    assert len(hom_space(A, A)) == 1
