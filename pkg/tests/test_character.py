import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from toric_index.character import (
    CharacterError,
    FiberCount,
    FiniteSum,
    FiniteSupport,
    add,
    delta,
    equal_on_probes,
    evaluate,
    from_dict,
    indicator,
    probe_weights,
    restrict,
    scale,
    tensor,
    to_dict,
    zero,
)
from toric_index.lattice_core import primitive
from toric_index.polytope import Polyhedron, lattice_points

SQUARE = Polyhedron.box((0, 0), (2, 2))
QUADRANT = Polyhedron.from_inequalities(2, [((1, 0), 0), ((0, 1), 0)])
SLAB = Polyhedron.from_inequalities(2, [((1, 0), 0), ((-1, 0), -1)])


def test_delta():
    assert evaluate(delta((0,)), (0,)) == 1
    assert evaluate(delta((2,)), (3,)) == 0
    assert evaluate(delta((1, -1)), (1, -1)) == 1


def test_add_examples():
    assert add(delta((2,)), delta((2,))) == FiniteSupport(1, (((2,), 2),))
    assert add(delta((1,)), scale(delta((1,)), -1)) == zero(1)
    assert evaluate(add(indicator(SQUARE), delta((1, 1))), (1, 1)) == 2
    with pytest.raises(CharacterError, match="rank mismatch"):
        add(delta((1,)), delta((1, 1)))


def test_finite_support_prunes_zeros():
    c = FiniteSupport(1, (((0,), 0), ((1,), 3), ((1,), -3)))
    assert c.coeffs == ()


def test_tensor_examples():
    assert tensor(delta((2,)), delta((3,))) == delta((5,))
    c = indicator(QUADRANT)
    assert equal_on_probes(tensor(delta((0, 0)), c), c)
    assert tensor(delta((1,)), delta((2,)), mode="outer") == delta((1, 2))
    with pytest.raises(CharacterError, match="infinitely supported"):
        tensor(indicator(QUADRANT), indicator(SLAB))
    with pytest.raises(CharacterError, match="unknown tensor mode"):
        tensor(delta((1,)), delta((1,)), mode="inner")


def test_evaluate_examples():
    assert evaluate(indicator(SQUARE), (1, 1)) == 1
    assert evaluate(indicator(SQUARE), (3, 3)) == 0
    s = FiniteSum(2, ((1, indicator(QUADRANT)), (-1, delta((0, 0)))))
    assert evaluate(s, (0, 0)) == 0
    with pytest.raises(CharacterError, match="rank"):
        evaluate(delta((1,)), (1, 2))


def test_restrict_examples():
    r = restrict(indicator(SQUARE), (1, 0))
    assert evaluate(r, (1,)) == 3 and evaluate(r, (5,)) == 0
    q = restrict(indicator(QUADRANT), (1, 1))
    assert isinstance(q, FiberCount)
    assert evaluate(q, (2,)) == 3 and evaluate(q, (-1,)) == 0
    with pytest.raises(CharacterError, match="fiber-compactness"):
        restrict(indicator(QUADRANT), (1, 0))
    with pytest.raises(CharacterError, match="not primitive"):
        restrict(indicator(SQUARE), (2, 0))


def test_restrict_slab_across_lines():
    r = restrict(indicator(SLAB), (0, 1))
    assert [evaluate(r, (m,)) for m in (-7, 0, 9)] == [2, 2, 2]


def test_restrict_outer_product_and_shift():
    c = tensor(indicator(Polyhedron.box((0,), (2,))), indicator(Polyhedron.box((0,), (1,))),
               mode="outer")
    r = restrict(c, (1, 1))
    assert [evaluate(r, (m,)) for m in range(-1, 5)] == [0, 1, 2, 2, 1, 0]
    shifted = tensor(delta((1, 1)), indicator(SQUARE))
    r2 = restrict(shifted, (1, 0))
    assert [evaluate(r2, (m,)) for m in range(0, 5)] == [0, 3, 3, 3, 0]


weights2 = st.tuples(st.integers(-4, 4), st.integers(-4, 4))
finite2 = st.lists(st.tuples(weights2, st.integers(-3, 3)), max_size=5).map(
    lambda items: FiniteSupport(2, tuple(items)))


@given(finite2)
def test_tensor_delta_zero_identity_finite(c):
    assert tensor(delta((0, 0)), c) == c


@given(finite2, finite2, finite2)
def test_tensor_commutative_associative(a, b, c):
    assert tensor(a, b) == tensor(b, a)
    assert tensor(tensor(a, b), c) == tensor(a, tensor(b, c))


@given(weights2, st.tuples(st.integers(-3, 3), st.integers(-3, 3)).filter(any))
def test_restrict_delta(w, xi):
    xi = primitive(xi)
    assert restrict(delta(w), xi) == delta((xi[0] * w[0] + xi[1] * w[1],))


@given(st.integers(0, 3), st.integers(0, 3),
       st.tuples(st.integers(-3, 3), st.integers(-3, 3)).filter(any))
def test_fubini(a, b, xi):
    xi = primitive(xi)
    p = Polyhedron.box((0, 0), (a, b))
    r = restrict(indicator(p), xi)
    total = sum(evaluate(r, (m,)) for m in range(-30, 31))
    assert total == len(lattice_points(p))


def test_indicator_tensor_identity_on_probes():
    for p in (SQUARE, QUADRANT, SLAB):
        c = indicator(p)
        d = tensor(delta((0, 0)), c)
        assert all(evaluate(c, w) == evaluate(d, w)
                   for w in itertools.product(range(-3, 4), repeat=2))


def test_probe_semidecision_detects_difference():
    a = indicator(SQUARE)
    b = add(indicator(SQUARE), delta((2, 2)))
    assert not equal_on_probes(a, b)
    assert (2, 2) in probe_weights(a)


def test_serialization_round_trip():
    c = add(tensor(delta((1, -1)), indicator(QUADRANT)), scale(delta((0, 0)), 3))
    c = add(c, tensor(delta((1,)), indicator(Polyhedron.box((0,), (3,))), mode="outer"))
    r = restrict(indicator(QUADRANT), (1, 1))
    for x in (c, r):
        assert from_dict(to_dict(x)) == x
