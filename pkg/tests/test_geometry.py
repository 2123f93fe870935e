import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ehpack.geometry import (
    BLUE,
    RED,
    Escape,
    Overlap,
    PlacedItem,
    blue_cell,
    blue_slot,
    red_cell,
    red_cells,
    red_slot,
    verify,
)
from ehpack.params import make_params


def sq(side, x, y):
    return PlacedItem(Fraction(side), (Fraction(x), Fraction(y)), BLUE, 1)


def brute_red_cells(beta, gamma, d):
    inner = beta - gamma
    return [c for c in itertools.product(range(beta), repeat=d) if any(x >= inner for x in c)]


def test_blue_slot_examples():
    p = make_params(d=2, t=["1", "0.45", "0.1"], M=10, alpha=["0", "0"], Delta=[], phi=[0, 0])
    assert blue_slot(2, 3, p) == (Fraction("0.45"), Fraction("0.45"))
    assert blue_slot(1, 0, p) == (0, 0)
    assert blue_cell(5, 2, 3) == (1, 0, 1)
    with pytest.raises(IndexError):
        blue_cell(4, 2, 2)


def test_red_cells_examples():
    assert list(red_cells(2, 1, 2)) == [(0, 1), (1, 0), (1, 1)]
    assert len(list(red_cells(5, 2, 2))) == 16
    assert list(red_cells(3, 3, 2)) == list(itertools.product(range(3), repeat=2))
    with pytest.raises(IndexError):
        red_cell(3, 2, 1, 2)


def brute_red_count(beta, gamma, d):
    """Count cells of [0, beta)^d with some coordinate >= beta - gamma."""
    grid = np.indices((beta,) * d).reshape(d, -1)
    return int((grid >= beta - gamma).any(axis=0).sum())


@pytest.mark.parametrize("d", [2, 3])
def test_red_slot_count_matches_theta(d, request):
    p = request.getfixturevalue(f"eh{d}")
    for j in range(1, p.N + 1):
        b, g = p.beta(j), p.gamma(j)
        assert brute_red_count(b, g, d) == p.theta(j), j
        # the slot enumerator covers exactly theta cells
        if p.theta(j):
            red_cell(p.theta(j) - 1, b, g, d)
        with pytest.raises(IndexError):
            red_cell(p.theta(j), b, g, d)
        if b**d <= 20000:
            assert list(red_cells(b, g, d)) == brute_red_cells(b, g, d)


def test_prior_red_slot_count(prior2):
    for j in range(1, prior2.N + 1):
        assert len(brute_red_cells(prior2.beta(j), prior2.gamma(j), 2)) == prior2.theta(j)


def test_verify_examples():
    assert verify([sq("0.5", 0, 0), sq("0.5", "0.5", 0)], d=2) is None
    assert verify([sq("0.5", 0, 0), sq("0.5", "0.4", 0)], d=2) == Overlap(0, 1)
    bad = verify([sq("0.6", "0.5", 0)], d=2)
    assert isinstance(bad, Escape) and bad.item == 0 and bad.axis == 0


def test_verify_negative_anchor():
    assert isinstance(verify([sq("0.1", "-0.05", 0)], d=2), Escape)


def _blue_grid(p, i):
    return [PlacedItem(p.t(i), blue_slot(i, s, p), BLUE, i) for s in range(p.blue_capacity(i))]


def _red_grid(p, j):
    return [PlacedItem(p.t(j), red_slot(j, s, p), RED, j) for s in range(p.theta(j))]


def _host_with_reds(p, i, j):
    return _blue_grid(p, i) + _red_grid(p, j)


def test_compatibility_all_pairs_d2(eh2):
    """Every full blue grid plus every red grid it may host fits in one bin."""
    p = eh2
    hosts = {i: _blue_grid(p, i) for i in range(1, p.N + 1) if p.phi(i)}
    reds = {j: _red_grid(p, j) for j in range(1, p.N + 1) if p.theta(j) and p.alpha(j)}
    pairs = 0
    for i, blue in hosts.items():
        for j, red in reds.items():
            if p.gamma(j) * p.t(j) <= p.delta(i):
                assert verify(blue + red, d=2) is None, (i, j)
                pairs += 1
    assert pairs == 2802


def test_displaced_red_item_is_caught(eh2):
    p = eh2
    items = _host_with_reds(p, 2, 151)
    last = items[-1]
    items[-1] = PlacedItem(last.side, (last.anchor[0] - last.side / 2, last.anchor[1]), RED, 151)
    assert isinstance(verify(items, d=2), Overlap)


def test_compatibility_sample_d3(eh3):
    p = eh3
    hosts = [i for i in range(1, p.N + 1) if p.phi(i)][:6]
    reds = [j for j in range(1, p.N + 1) if p.theta(j) and p.alpha(j) and p.beta(j) <= 12]
    for i in hosts:
        for j in reds:
            if p.gamma(j) * p.t(j) <= p.delta(i):
                assert verify(_host_with_reds(p, i, j), d=3) is None, (i, j)


def test_self_hosting_type_uses_both_corners(prior2):
    # a type may host its own reds; the red strip must not collide with the blue grid
    p = prior2
    for i in range(1, p.N + 1):
        if p.phi(i) and p.theta(i) and p.gamma(i) * p.t(i) <= p.delta(i):
            assert verify(_host_with_reds(p, i, i), d=2) is None


coord = st.fractions(min_value=0, max_value=1, max_denominator=20)


@settings(max_examples=300, deadline=None)
@given(st.lists(st.tuples(st.fractions(min_value=Fraction(1, 20), max_value=Fraction(1, 2), max_denominator=20),
                          coord, coord), min_size=2, max_size=6))
def test_verify_agrees_with_pairwise_oracle(raw):
    items = [sq(s, x, y) for s, x, y in raw]
    got = verify(items, d=2)
    escape = next((k for k, it in enumerate(items)
                   if any(a < 0 or a + it.side > 1 for a in it.anchor)), None)
    overlap = next(((a, b) for a, b in itertools.combinations(range(len(items)), 2)
                    if all(items[a].anchor[k] < items[b].anchor[k] + items[b].side
                           and items[b].anchor[k] < items[a].anchor[k] + items[a].side
                           for k in range(2))), None)
    if escape is None and overlap is None:
        assert got is None
    else:
        assert got is not None
        if isinstance(got, Overlap):
            assert overlap is not None
        else:
            assert escape is not None
