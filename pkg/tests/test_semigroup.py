import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import idemrange as ir
from idemrange.semigroup import fold_values


def _random_values(sg, rng, count):
    if sg.name == "max":
        return list(rng.standard_normal(count) * 10)
    if sg.name == "or":
        return [int(x) for x in rng.integers(0, 2**63, count, dtype=np.uint64)]
    return [frozenset(rng.integers(0, 50, rng.integers(0, 6)).tolist()) for _ in range(count)]


@pytest.mark.parametrize("name", ["max", "or", "idset"])
def test_semigroup_laws_random_triples(name):
    # associativity, commutativity, idempotence on 10^4 sampled triples
    sg = ir.semigroup_by_name(name)
    rng = np.random.default_rng(1)
    vals = _random_values(sg, rng, 30)
    checked = 0
    while checked < 10_000:
        a, b, c = (vals[i] for i in rng.integers(0, len(vals), 3))
        assert sg.equal(sg.combine(a, sg.combine(b, c)), sg.combine(sg.combine(a, b), c))
        assert sg.equal(sg.combine(a, b), sg.combine(b, a))
        assert sg.equal(sg.combine(a, a), a)
        checked += 1


def test_combine_all_examples():
    assert ir.combine_all([1, 5, 3], ir.MAX_REAL) == 5
    assert set(ir.combine_all([{1, 2}, {2, 3}], ir.ID_SET).tolist()) == {1, 2, 3}
    assert ir.combine_all([0b0101], ir.BIT_OR64) == 0b0101


def test_combine_all_empty_raises():
    with pytest.raises(ir.EmptyAggregate):
        ir.combine_all([], ir.MAX_REAL)
    with pytest.raises(ir.EmptyAggregate):
        fold_values([], ir.ID_SET)


def test_fold_matches_combine_all():
    rng = np.random.default_rng(2)
    for name in ("max", "or", "idset"):
        sg = ir.semigroup_by_name(name)
        for _ in range(50):
            vals = _random_values(sg, rng, int(rng.integers(1, 8)))
            assert sg.equal(fold_values(vals, sg), ir.combine_all(vals, sg))


@given(st.lists(st.frozensets(st.integers(0, 100), max_size=5), min_size=1, max_size=6))
def test_idset_fold_is_union(sets):
    got = fold_values(sets, ir.ID_SET)
    assert set(got.tolist()) == set().union(*sets)


def test_semigroup_by_name_unknown():
    with pytest.raises(KeyError):
        ir.semigroup_by_name("sum")
