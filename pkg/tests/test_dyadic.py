import pytest
from hypothesis import given
from hypothesis import strategies as st

import idemrange as ir
from idemrange.dyadic import Node


def test_build_examples():
    t = ir.build_dyadic_tree(0.0, 1.0, 1)
    assert t.interval(Node(1, 0)) == (0.0, 0.5)
    assert t.interval(Node(1, 1)) == (0.5, 1.0)
    t3 = ir.build_dyadic_tree(0.0, 1.0, 3)
    widths = {t3.b(Node(3, r)) - t3.a(Node(3, r)) for r in range(8)}
    assert widths == {0.125}
    th = ir.build_dyadic_tree(0.5, 1.0, 2)
    assert th.b(Node(2, 0)) - th.a(Node(2, 0)) == 0.125


def test_build_guards():
    with pytest.raises(ValueError):
        ir.build_dyadic_tree(0.7, 0.3, 2)
    with pytest.raises(ValueError):
        ir.build_dyadic_tree(0.0, 1.0, 31)


def test_locate_leaf():
    t = ir.build_dyadic_tree(0.0, 1.0, 3)
    assert t.locate_leaf(0.0) == Node(3, 0)
    assert t.locate_leaf(1.0) == Node(3, 7)
    assert t.locate_leaf(0.6) == Node(3, 4)  # [0.5, 0.625]
    with pytest.raises(ValueError):
        t.locate_leaf(1.5)


def test_prefix_cover_examples():
    t = ir.build_dyadic_tree(0.0, 1.0, 3)
    assert ir.balanced_prefix_cover(t, t.locate_leaf(0.0)) == []
    # leaf [5/8, 6/8]
    pairs = ir.balanced_prefix_cover(t, Node(3, 5))
    assert [(t.interval(p.u), t.interval(p.w)) for p in pairs] == [
        ((0.0, 0.5), (0.5, 1.0)),
        ((0.5, 0.625), (0.625, 0.75)),
    ]
    # leaf [1/8, 2/8]
    pairs = ir.balanced_prefix_cover(t, Node(3, 1))
    assert [(t.interval(p.u), t.interval(p.w)) for p in pairs] == [((0.0, 0.125), (0.125, 0.25))]


def _check_cover_properties(t, leaf, pairs):
    intervals = sorted(t.interval(p.u) for p in pairs)
    # pairwise disjoint and tiling [z1, a(leaf)]
    cursor = t.z1
    for a, b in intervals:
        assert a == cursor
        assert b > a
        cursor = b
    assert cursor == t.a(leaf)
    # adjacency of each pair, equal depth
    for p in pairs:
        assert p.u.depth == p.w.depth
        assert t.b(p.u) == t.a(p.w)
    depths = [p.u.depth for p in pairs]
    assert all(depths.count(dd) <= 2 for dd in depths)
    assert len(pairs) <= 2 * t.height


@pytest.mark.parametrize("height", range(1, 8))
def test_prefix_cover_properties_exhaustive(height):
    t = ir.build_dyadic_tree(0.0, 1.0, height)
    for rank in range(1 << height):
        _check_cover_properties(t, Node(height, rank), ir.balanced_prefix_cover(t, Node(height, rank)))


@given(st.integers(1, 10), st.data())
def test_suffix_cover_mirrors(height, data):
    t = ir.build_dyadic_tree(0.0, 1.0, height)
    rank = data.draw(st.integers(0, (1 << height) - 1))
    leaf = Node(height, rank)
    pairs = ir.suffix_cover(t, leaf)
    intervals = sorted(t.interval(p.u) for p in pairs)
    cursor = t.b(leaf)
    for a, b in intervals:
        assert a == cursor
        cursor = b
    assert cursor == t.z2
    for p in pairs:
        assert p.u.depth == p.w.depth
        assert t.a(p.u) == t.b(p.w)


def test_cover_within_subtree():
    t = ir.build_dyadic_tree(0.0, 1.0, 4)
    root = Node(1, 1)  # [0.5, 1]
    leaf = t.locate_leaf(0.8)
    pairs = ir.balanced_prefix_cover(t, leaf, root=root)
    cursor = t.a(root)
    for a, b in sorted(t.interval(p.u) for p in pairs):
        assert a == cursor
        cursor = b
    assert cursor == t.a(leaf)


def test_node_arithmetic():
    t = ir.build_dyadic_tree(0.0, 1.0, 4)
    v = Node(2, 1)
    assert t.parent(t.left_child(v)) == v
    assert t.left_neighbor(Node(2, 0)) is None
    assert t.right_neighbor(Node(2, 3)) is None
    assert t.is_ancestor(v, Node(4, 7))
    assert not t.is_ancestor(v, Node(4, 8))
    assert t.m(Node(0, 0)) == 0.5
