from __future__ import annotations

import itertools

import pytest
from hypothesis import given, strategies as st

from associoid_kit import cyclic, symmetric
from associoid_kit.algebra import (
    close_generators, direct_product, double_cosets, find_isomorphism, from_cayley, is_subgroup,
    left_cosets, right_cosets, subgroup,
)
from associoid_kit.equivalence import commutes
from associoid_kit.errors import GroupAxiomError, NotSubgroupError
from associoid_kit.relations import compose

E, T12, C123 = 0, 2, 3   # identity, (12), (123) in symmetric(3)


def subgroups(G):
    """Every subgroup, by brute force over subsets (fine for order <= 8)."""
    return [s for s in G.ground.all_subsets() if is_subgroup(G, s)]


class TestConstructors:
    def test_trivial_cyclic(self):
        G = cyclic(1)
        assert G.order == 1 and G.identity == 0

    def test_symmetric_order(self):
        assert symmetric(3).order == 6
        assert symmetric(4).order == 24

    def test_symmetric_lexicographic(self):
        S = symmetric(3)
        assert list(S.perms) == sorted(itertools.permutations(range(3)))
        assert S.perms[T12] == (1, 0, 2)
        assert S.perms[C123] == (1, 2, 0)

    def test_close_generators(self):
        G = close_generators([(1, 0, 2), (1, 2, 0)])
        assert G.order == 6
        assert G.perms == symmetric(3).perms

    def test_bad_tables(self):
        with pytest.raises(GroupAxiomError):
            from_cayley([[0, 1], [1, 1]])
        with pytest.raises(GroupAxiomError):
            from_cayley([[0, 1]])
        with pytest.raises(GroupAxiomError):
            close_generators([(0, 0, 1)])

    def test_non_associative_table(self):
        # a Latin square with identity 0 that is not a group
        t = [[0, 1, 2, 3, 4], [1, 0, 3, 4, 2], [2, 4, 0, 1, 3], [3, 2, 4, 0, 1], [4, 3, 1, 2, 0]]
        with pytest.raises(GroupAxiomError) as err:
            from_cayley(t)
        x, y, z = err.value.witness
        assert t[t[x][y]][z] != t[x][t[y][z]]

    def test_direct_product(self):
        G = direct_product(cyclic(2), cyclic(3))
        assert find_isomorphism(G, cyclic(6)) is not None
        assert G.ground.label(4) == "(1,1)"

    def test_torsor_operation(self):
        G = cyclic(6)
        assert G.torsor(1, 4, 0) == 3


class TestSubgroups:
    def test_rejects_non_subgroup(self):
        S = symmetric(3)
        with pytest.raises(NotSubgroupError):
            subgroup(S, [E, T12, C123])

    def test_right_cosets_trivial(self):
        G = cyclic(4)
        assert right_cosets(G, [0]).masks == tuple(1 << g for g in range(4))

    def test_right_cosets_z6(self):
        blocks = [b.elements() for b in right_cosets(cyclic(6), [0, 3]).blocks]
        assert blocks == [(0, 3), (1, 4), (2, 5)]

    def test_left_right_differ_in_s3(self):
        S = symmetric(3)
        assert left_cosets(S, [E, T12]) != right_cosets(S, [E, T12])

    def test_subgroup_counts(self):
        assert len(subgroups(symmetric(3))) == 6
        assert len(subgroups(cyclic(6))) == 4


def test_cosets_partition_evenly_and_commute():
    for G in (cyclic(6), symmetric(3), direct_product(cyclic(2), cyclic(4))):
        subs = subgroups(G)
        for A, B in itertools.product(subs, repeat=2):
            assert G.order % len(A) == 0
            a, b = right_cosets(G, A), left_cosets(G, B)
            assert {len(blk) for blk in a.blocks} == {len(A)}
            assert {len(blk) for blk in b.blocks} == {len(B)}
            assert commutes(a, b)
            ab = compose(a.as_relation(), b.as_relation())
            assert ab == double_cosets(G, A, B).as_relation()


@given(st.integers(1, 12))
def test_cyclic_is_abelian_and_self_isomorphic(n):
    G = cyclic(n)
    assert G.is_abelian()
    iso = find_isomorphism(G, G)
    assert iso is not None and iso[G.identity] == G.identity


def test_isomorphism_search_negative():
    assert find_isomorphism(cyclic(6), symmetric(3)) is None
    assert find_isomorphism(cyclic(4), direct_product(cyclic(2), cyclic(2))) is None


def test_isomorphism_is_homomorphism():
    G = close_generators([(1, 0, 2, 3), (1, 2, 3, 0)])
    H = symmetric(4)
    phi = find_isomorphism(G, H)
    assert phi is not None and sorted(phi) == list(range(24))
    for g, h in itertools.product(range(24), repeat=2):
        assert phi[G.mul(g, h)] == H.mul(phi[g], phi[h])
