import math
from collections import Counter

import pytest
from hypothesis import given, strategies as st

from mallestat.errors import InvalidInput, ResourceLimitExceeded
from mallestat.permgroup import (
    Perm, closure, compose, conjugacy_classes, cycle_type_counts, ind,
    power_action_orbits, product_embed, symmetric_generators,
)

perms = st.integers(1, 7).flatmap(lambda n: st.permutations(range(n))).map(Perm)


def test_parse_and_print_roundtrip():
    p = Perm.parse("(1 2)(3 4 5)")
    assert p.images == (1, 0, 3, 4, 2)
    assert str(p) == "(1 2)(3 4 5)"
    assert Perm.parse("()", 3) == Perm.identity(3)


def test_parse_rejects_garbage():
    with pytest.raises(InvalidInput):
        Perm.parse("(1 1)")
    with pytest.raises(InvalidInput):
        Perm.parse("(0 2)")


def test_compose_applies_right_first():
    p, q = Perm.parse("(1 2)", 3), Perm.parse("(2 3)", 3)
    r = compose(p, q)
    assert all(r(i) == p(q(i)) for i in range(3))


def test_symmetric_orders():
    for n in range(1, 6):
        assert len(closure(symmetric_generators(n))) == math.factorial(n)


def test_closure_cap():
    with pytest.raises(ResourceLimitExceeded):
        closure(symmetric_generators(6), cap=100)


def test_s4_classes():
    cs = conjugacy_classes(symmetric_generators(4))
    assert cs.group_order == 24
    assert sorted(c.size for c in cs) == [1, 3, 6, 6, 8]
    by_type = Counter()
    for c in cs:
        by_type[c.representative.cycle_type()] += c.size
    assert by_type == cycle_type_counts(4)


def test_power_orbits_of_c5_merge_nontrivial_classes():
    c5 = [Perm.parse("(1 2 3 4 5)")]
    cs = conjugacy_classes(c5)
    orbits = power_action_orbits(cs)
    assert sorted(len(o) for o in orbits) == [1, 4]


def test_cycle_type_counts_sum_to_factorial():
    for n in range(1, 8):
        assert sum(cycle_type_counts(n).values()) == math.factorial(n)


@given(perms)
def test_ind_is_degree_minus_orbits(p):
    assert ind(p) == p.N - len(p.cycles(include_fixed=True))
    assert ind(p) == ind(p.cycle_type())


@given(perms)
def test_order_and_inverse(p):
    assert p ** p.order() == Perm.identity(p.N)
    assert compose(p, p.inverse()) == Perm.identity(p.N)
    assert math.lcm(*p.cycle_type()) == p.order()


@given(perms, perms)
def test_product_embed_is_homomorphic(s, t):
    e = product_embed(s, t)
    assert e.N == s.N * t.N
    assert e.order() == math.lcm(s.order(), t.order())
    e2 = product_embed(s ** 2, t ** 2)
    assert e2 == e ** 2
