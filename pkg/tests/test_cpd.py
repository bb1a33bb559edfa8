import re

import pytest

from cladder.cpd import (
    ConnectedPD,
    connected_pd,
    cpd_from_delta,
    delta_from_tilde,
    has_negative,
    render_cpd,
    tilde_delta,
)
from cladder.decompose_finite import builtin_indecomposables
from cladder.filtrations import EXAMPLE_RADII, example_filtration, homology_rep
from cladder.grid_poset import lower, two_row, upper
from cladder.interval_approx import interval_approximation
from cladder.quiver_rep import Shape, decompose_an, row_module, zero_rep

from modgen import corpus, left_pad


def test_tilde_of_single_row_indicator():
    assert tilde_delta({lower(2, 4): 1}) == ({(2, 4): 1}, {}, {})
    assert tilde_delta({upper(1, 3): 2}) == ({}, {(1, 3): 2}, {})


def test_tilde_of_two_row_indicator():
    low, up, con = tilde_delta({two_row(1, 3, 2, 4): 1})
    assert low == {(2, 4): 1}
    assert up == {(1, 3): 1}
    assert con == {(1, 3, 2, 4): 1}


@pytest.mark.parametrize("M,known", corpus(12, seed=31, n_max=6))
def test_tilde_roundtrip(M, known):
    delta = interval_approximation(M).nonzero()
    assert delta_from_tilde(*tilde_delta(delta)) == delta


@pytest.mark.parametrize("M,known", corpus(25, seed=32, n_max=7))
def test_rows_of_the_cpd_are_the_row_barcodes(M, known):
    D = connected_pd(M)
    assert D.lower == decompose_an(row_module(M, 1))
    assert D.upper == decompose_an(row_module(M, 2))
    assert all(v >= 0 for v in D.lower.values())
    assert not has_negative(D)


def test_rows_stay_barcodes_for_non_interval_modules():
    L = builtin_indecomposables(3)
    for label in L.non_interval_labels:
        M = L.reps[L.index(label)]
        D = connected_pd(M)
        assert D.lower == decompose_an(row_module(M, 1))
        assert D.upper == decompose_an(row_module(M, 2))


def test_worked_example_connecting_values():
    Ma = homology_rep(example_filtration("a"), 1)
    Mb = homology_rep(example_filtration("b"), 1)
    Da, Db = connected_pd(Ma), connected_pd(Mb)
    assert Da.connecting == {(3, 3, 3, 3): 1}
    assert Db.connecting == {}
    assert Da.lower == Db.lower == {(3, 3): 1}
    assert Da.upper == Db.upper


def test_zero_module_gives_an_empty_diagram():
    assert connected_pd(zero_rep(Shape.ladder(4))).is_empty()


@pytest.mark.parametrize("pad", [2, 3])
def test_embedded_non_interval_is_detected(pad):
    L = builtin_indecomposables(3)
    M = left_pad(L.reps[L.index("N1")], pad)
    assert M.shape.p >= 5
    assert has_negative(connected_pd(M))


def test_json_uses_inclusive_storage_and_roundtrips():
    D = cpd_from_delta({two_row(1, 3, 2, 4): 1, lower(1, 1): 2}, 4)
    obj = D.to_json()
    assert obj["connecting"] == [{"b2": 1, "d2": 3, "b1": 2, "d1": 4, "m": 1}]
    assert ConnectedPD.from_json(obj) == D
    with pytest.raises(ValueError):
        ConnectedPD.from_json({**obj, "schema": "other/1"})


def test_empty_svg_has_axes_only():
    svg = render_cpd(ConnectedPD(4))
    assert svg.startswith("<?xml")
    assert "<circle" not in svg and 'class="connecting"' not in svg
    assert svg.count("<line") == 3


def test_worked_example_plot_topology():
    D = connected_pd(homology_rep(example_filtration("a"), 1), axis_labels=EXAMPLE_RADII)
    svg = render_cpd(D)
    assert svg.count('class="lower"') == 1
    assert svg.count('class="upper"') == len(D.upper)
    assert svg.count('class="connecting"') == 1
    assert "1.73" in svg


def test_negative_segments_are_dashed():
    D = ConnectedPD(4, connecting={(1, 2, 2, 3): -1, (1, 3, 2, 4): 2}, lower={(2, 3): 1}, upper={(1, 2): 1})
    for style in ("triangles", "layered"):
        svg = render_cpd(D, style)
        segs = re.findall(r'<line class="connecting"[^>]*>', svg)
        assert len(segs) == 2
        assert sum("stroke-dasharray" in s for s in segs) == 1
        assert "stroke-dasharray" in segs[0]  # weaker segment drawn first
    assert render_cpd(D) == render_cpd(D)


def test_triangles_place_lower_row_below_diagonal():
    D = ConnectedPD(4, lower={(1, 2): 1}, upper={(1, 2): 1})
    svg = render_cpd(D, "triangles")
    (lx, ly), = [(float(a), float(b)) for a, b in re.findall(r'class="lower" cx="([\d.]+)" cy="([\d.]+)"', svg)]
    (ux, uy), = [(float(a), float(b)) for a, b in re.findall(r'class="upper" cx="([\d.]+)" cy="([\d.]+)"', svg)]
    assert lx > ux and ly > uy  # screen y grows downward
    with pytest.raises(ValueError):
        render_cpd(D, "bars")
