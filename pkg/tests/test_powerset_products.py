from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from associoid_kit import Equiv, GroundSet, cyclic
from associoid_kit.equivalence import commutes, enumerate_local_bisections, enumerate_sections
from associoid_kit.errors import NotCommutingError
from associoid_kit.powerset_products import (
    BOOKKEEPING_ROUTES, Law, TernaryLawReport, bookkeeping_batch, bookkeeping_formulas,
    bookkeeping_oracle, bookkeeping_product, bookkeeping_table, bookkeeping_witnesses,
    check_chasles, check_endomorphism, check_idempotent, check_para_associativity,
    check_symmetry_law, full_table, gamma_oracle, gamma_product, gamma_table, gamma_witnesses,
    pa_on_instances, prev_product, prev_table, prev_witnesses, table_condition_c,
    table_idempotent, table_monotone, table_para_associativity, table_symmetry,
)
from associoid_kit.structures import homogeneous, pair_pregroupoid
from associoid_kit.demos import demo

from conftest import equivs_on, grounds, subsets_of


def grid():
    g = GroundSet(4)
    return g, Equiv(g, [[0, 1], [2, 3]]), Equiv(g, [[0, 2], [1, 3]])


@st.composite
def commuting_pairs(draw, lo=0, hi=4):
    g = draw(grounds(lo, hi))
    a = draw(equivs_on(g))
    b = draw(equivs_on(g))
    if not commutes(a, b):
        b = a if draw(st.booleans()) else Equiv.identity(g)
    return g, a, b


class TestReport:
    def test_failure_needs_witness(self):
        with pytest.raises(ValueError):
            TernaryLawReport(Law.PA, False)

    def test_json(self):
        r = TernaryLawReport(Law.IP, False, witness=((1, 2), (3, 4)), instances=7)
        assert r.to_json()["witness"] == [[1, 2], [3, 4]]
        assert not r


class TestBookkeeping:
    def test_diagonal_case_is_intersection(self):
        g = GroundSet(4)
        i = Equiv.identity(g)
        out = bookkeeping_product(i, i, g.subset([0, 1]), g.subset([1, 2]), g.subset([1, 3]))
        assert out == g.subset([1])

    def test_all_relation_saturates(self):
        g = GroundSet(3)
        O = Equiv.all(g)
        x, y, z = g.subset([0]), g.subset([1]), g.subset([2])
        assert bookkeeping_product(O, O, x, y, z) == g.full()
        assert bookkeeping_product(O, O, x, g.empty(), z) == g.empty()

    def test_grid(self):
        g, a, b = grid()
        x, y, z = g.subset([0]), g.subset([1]), g.subset([3])
        assert bookkeeping_product(a, b, x, y, z) == g.subset([2])
        assert bookkeeping_witnesses(a, b, x, y, z) == {2: [(0, 1, 3)]}

    def test_refuses_non_commuting(self):
        g = GroundSet(3)
        a, b = Equiv(g, [[0, 1], [2]]), Equiv(g, [[1, 2], [0]])
        with pytest.raises(NotCommutingError) as err:
            bookkeeping_product(a, b, g.full(), g.full(), g.full())
        assert err.value.witness is not None

    def test_all_relation_fails_idempotency(self):
        g = GroundSet(2)
        O = Equiv.all(g)
        rep = table_idempotent(bookkeeping_table(O, O))
        assert not rep.holds
        (x, y), (left, right, want) = rep.witness
        assert left != want or right != want

    def test_transversal_reduction_to_relations(self):
        # element e*|F| + f read as the pair (f, e) of a relation E -> F
        T = pair_pregroupoid(2, 3)
        table = bookkeeping_table(T.a, T.b)
        assert (table == gamma_table(T)).all()

        def pairs(bits):
            return {(w % 3, w // 3) for w in range(6) if bits >> w & 1}

        rng = np.random.default_rng(1)
        for X, Y, Z in rng.integers(0, 64, size=(300, 3)):
            x, y, z = pairs(X), pairs(Y), pairs(Z)
            rel = {(f, e) for (f1, e) in z for (f2, e2) in y if f2 == f1
                   for (f, e3) in x if e3 == e2}
            assert pairs(int(table[X, Y, Z])) == rel


class TestGamma:
    def test_singletons(self):
        T = homogeneous(cyclic(6), [0, 3], [0, 2, 4])
        P = T.pregroupoid_part()
        g = T.ground
        for xi, eta, zeta in itertools.product(range(6), repeat=3):
            out = gamma_product(P, g.subset([xi]), g.subset([eta]), g.subset([zeta]))
            w = P.product(xi, eta, zeta)
            assert out == (g.subset([w]) if w is not None else g.empty())

    def test_z6_structure_equation(self):
        P = homogeneous(cyclic(6), [0, 3], [0, 2, 4]).pregroupoid_part()
        g = P.ground
        assert gamma_product(P, g.subset([1]), g.subset([4]), g.subset([0])) == g.subset([3])
        assert gamma_witnesses(P, g.subset([1]), g.subset([4]), g.subset([0])) == {3: [(1, 4, 0)]}

    def test_local_bisection_left_unit(self):
        P = demo("s3-A12-B12").pregroupoid_part()
        subsets = P.ground.all_subsets()
        for x in enumerate_local_bisections(P.a, P.b):
            kx = P.b.saturate_bits(x.bits)
            for z in subsets:
                if P.b.saturate_bits(z.bits) == kx:
                    assert gamma_product(P, x, x, z) == z

    def test_oracle_agrees(self):
        for name in ("grid-2x2", "s3-A12-B12", "z6-A03-B024"):
            P = demo(name)
            P = P.pregroupoid_part() if P.flavor.value == "commuting_prev_pair" else P
            rng = np.random.default_rng(7)
            subs = P.ground.all_subsets()
            for i, j, k in rng.integers(0, len(subs), size=(200, 3)):
                x, y, z = subs[i], subs[j], subs[k]
                assert gamma_product(P, x, y, z) == gamma_oracle(P, x, y, z)


class TestPrev:
    def bundle(self):
        return demo("z6-torsorbundle-A03")

    def test_z6_bundle_example(self):
        T = self.bundle()
        g = T.ground
        assert prev_product(T, g.subset([0]), g.subset([3]), g.subset([3])) == g.subset([0])
        assert prev_witnesses(T, g.subset([0]), g.subset([3]), g.subset([3])) == {0: [(0, 3, 3)]}

    def test_sections_idempotent(self):
        T = self.bundle()
        secs = list(enumerate_sections(T.a))
        for r, t in itertools.product(secs, repeat=2):
            assert prev_product(T, r, r, t) == t

    def test_per_class_pointwise(self):
        T = self.bundle()
        g = T.ground
        for x, y, z in itertools.product(g.all_subsets()[::3], repeat=3):
            out = prev_product(T, x, y, z)
            for blk in T.a.blocks:
                parts = [s & blk for s in (x, y, z)]
                want = {T.product(p, q, r) for p in parts[0] for q in parts[1] for r in parts[2]}
                assert set((out & blk).elements()) == want


class TestGenericCheckers:
    def test_group_torsor_passes(self):
        G = cyclic(4)
        prod = G.torsor
        carrier = list(range(4))
        assert check_para_associativity(prod, carrier).holds
        assert check_idempotent(prod, carrier).holds
        assert all(check_chasles(prod, carrier))
        assert check_endomorphism(prod, carrier).holds
        assert check_symmetry_law(prod, lambda x, y, z: prod(z, y, x), carrier).holds

    def test_detects_broken_product(self):
        prod = lambda x, y, z: (x * y + z) % 3        # noqa: E731
        rep = check_para_associativity(prod, [0, 1, 2])
        assert not rep.holds
        q, sides = rep.witness
        assert len(set(sides)) > 1

    def test_conditional_reading(self):
        # defined only on the diagonal: every term defined => equal
        prod = lambda x, y, z: x if x == y == z else None   # noqa: E731
        assert check_para_associativity(prod, [0, 1]).holds

    def test_sampling_records_seed(self):
        G = cyclic(5)
        rep = check_para_associativity(G.torsor, list(range(5)), budget=100, seed=9)
        assert rep.holds and not rep.exhaustive and rep.seed == 9 and rep.instances == 100

    def test_table_sampling(self):
        g, a, b = grid()
        t = bookkeeping_table(a, b)
        rep = table_para_associativity(t, budget=1000, seed=3)
        assert rep.holds and rep.seed == 3 and not rep.exhaustive
        q = np.array([[1, 2, 3, 4, 5], [15, 15, 15, 15, 15]])
        assert pa_on_instances(t, q).holds


# -- properties ------------------------------------------------------------


@given(commuting_pairs(), st.data())
def test_routes_agree_with_oracle(pair, data):
    g, a, b = pair
    x, y, z = (data.draw(subsets_of(g)) for _ in range(3))
    want = bookkeeping_oracle(a, b, x, y, z)
    assert bookkeeping_product(a, b, x, y, z) == want
    assert all(f == want for f in bookkeeping_formulas(a, b, x, y, z))
    for route in BOOKKEEPING_ROUTES:
        got = bookkeeping_batch(a, b, np.array([x.bits]), np.array([y.bits]), np.array([z.bits]),
                                route)
        assert int(got[0]) == want.bits


@given(commuting_pairs(0, 3))
def test_para_associative_symmetric_monotone(pair):
    g, a, b = pair
    tab, tba = bookkeeping_table(a, b), bookkeeping_table(b, a)
    assert table_para_associativity(tab, exhaustive=True).holds
    assert table_symmetry(tab, tba).holds
    assert table_monotone(tab, g.size).holds
    if a.dom == b.dom:
        assert table_condition_c(tab, a, b).holds


def test_condition_c_needs_equal_domains():
    g = GroundSet(1)
    a, b = Equiv(g, []), Equiv(g, [[0]])
    rep = table_condition_c(bookkeeping_table(a, b), a, b)
    assert not rep.holds
    assert rep.witness == ((1, 0, 0), 0)     # x={0}, y=z=empty, (xyz)=empty not b-related to x


def test_condition_c_total_pairs_four_points():
    from associoid_kit.equivalence import enumerate_equivalences
    eqs = enumerate_equivalences(GroundSet(4))
    for a, b in itertools.product(eqs, repeat=2):
        if commutes(a, b):
            assert table_condition_c(bookkeeping_table(a, b), a, b).holds


@given(commuting_pairs(4, 4))
def test_para_associative_sampled_four_points(pair):
    g, a, b = pair
    assert table_para_associativity(bookkeeping_table(a, b), budget=20_000, seed=0).holds


def test_gamma_and_prev_tables_match_scalar_products():
    T = demo("z6-torsorbundle-A03")
    tg, tp = gamma_table(T), prev_table(T)
    subs = T.ground.all_subsets()
    rng = np.random.default_rng(2)
    for i, j, k in rng.integers(0, 64, size=(300, 3)):
        assert int(tg[i, j, k]) == gamma_product(T, subs[i], subs[j], subs[k]).bits
        assert int(tp[i, j, k]) == prev_product(T, subs[i], subs[j], subs[k]).bits


def test_table_limit():
    g = GroundSet(8)
    with pytest.raises(ValueError):
        full_table(lambda X, Y, Z: X, g.size)
