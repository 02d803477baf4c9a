from __future__ import annotations

import itertools

import pytest

from associoid_kit import cyclic, symmetric
from associoid_kit.algebra import find_isomorphism
from associoid_kit.bisections import (
    AutKind, OpKind, action_formula_check, affine_chart, associative_pair_products,
    aut_membership, automorphism_check, bisection_torsor, canonical_kernel, chart_checks,
    compose_maps, group_at, kernel_action_check, left_distributivity_counterexample,
    local_bisection_pregroupoid, operator, pregroupoid_of, projection,
    right_distributivity_check, section_torsor, self_distributivity_check,
    structure_automorphisms,
)
from associoid_kit.demos import demo
from associoid_kit.equivalence import (
    enumerate_bisections, enumerate_local_bisections, enumerate_sections,
)
from associoid_kit.errors import NotBijectionError, NotBisectionError, NotTransversalError
from associoid_kit.powerset_products import gamma_product, gamma_table, prev_product
from associoid_kit.structures import Flavor, homogeneous, pair_pregroupoid, validate

WITH_BISECTIONS = ["grid-2x2", "pair-3x3", "s3-A12-B12", "z3xz3-A10-B01", "z6-torsorbundle-A03"]


def setup(name):
    P = pregroupoid_of(demo(name))
    return P, list(enumerate_bisections(P.a, P.b))


class TestBisectionTorsor:
    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_pair_groupoid_gives_symmetric_group(self, n):
        BT = bisection_torsor(pair_pregroupoid(n, n))
        assert len(BT) == [1, 2, 6, 24][n - 1]
        assert all(r.holds for r in BT.reports)
        for y in BT.carrier[:3]:
            G = group_at(BT, y)
            assert G.identity == BT.index(y)
            assert find_isomorphism(G, symmetric(n)) is not None

    def test_empty_when_quotients_differ(self):
        BT = bisection_torsor(demo("z6-A03-B024"))
        assert len(BT) == 0 and all(r.holds for r in BT.reports)

    def test_index_rejects_non_bisections(self):
        BT = bisection_torsor(demo("grid-2x2"))
        with pytest.raises(NotBisectionError):
            BT.index(BT.base.ground.subset([0, 1]))

    def test_section_torsor_of_bundle(self):
        BT = section_torsor(demo("z6-torsorbundle-A03"))
        assert len(BT) == 8 and all(r.holds for r in BT.reports)

    @pytest.mark.parametrize("name", ["grid-2x2", "s3-A12-B12", "s3-A12-B123", "z6-A03-B024"])
    def test_local_bisections_form_a_pregroupoid(self, name):
        L, carrier = local_bisection_pregroupoid(demo(name))
        assert L.ground.size == len(carrier)
        assert all(r.holds for r in validate(L))
        assert carrier[0].bits == 0


class TestOperators:
    def test_projection(self):
        P, _ = setup("grid-2x2")
        assert projection(P.a, P.ground.subset([0, 3])) == (0, 0, 3, 3)
        with pytest.raises(NotTransversalError):
            projection(P.a, P.ground.subset([0]))

    @pytest.mark.parametrize("name", WITH_BISECTIONS)
    def test_unit_and_inverse(self, name):
        P, U = setup(name)
        ident = tuple(range(P.ground.size))
        for x in U:
            assert operator(P, OpKind.L, x, x).action == ident
            for y in U:
                lxy = operator(P, "L", x, y).action
                lyx = operator(P, "L", y, x).action
                assert compose_maps(lxy, lyx) == ident

    @pytest.mark.parametrize("name", WITH_BISECTIONS)
    def test_operators_realise_the_product(self, name):
        P, U = setup(name)
        for x, y, z in itertools.product(U, repeat=3):
            w = gamma_product(P, x, y, z)
            assert operator(P, "L", x, y).image(z) == w
            assert operator(P, "M", x, z).image(y) == w
            assert operator(P, "R", z, y).image(x) == w

    @pytest.mark.parametrize("name", ["s3-A12-B123", "s3-A12-B12", "z6-A03-B024"])
    def test_semitorsor_relation(self, name):
        # x, u sections of a; y, v sections of b
        P = pregroupoid_of(demo(name))
        ua, ub = list(enumerate_sections(P.a)), list(enumerate_sections(P.b))
        L = {(x.bits, y.bits): operator(P, "L", x, y).action for x in ua for y in ub}
        count = 0
        for x, u in itertools.product(ua, repeat=2):
            for y, v in itertools.product(ub, repeat=2):
                xyu = gamma_product(P, x, y, u)
                assert compose_maps(L[x.bits, y.bits], L[u.bits, v.bits]) == L[xyu.bits, v.bits]
                count += 1
        assert count == len(ua) ** 2 * len(ub) ** 2 > 0


class TestAutMembership:
    def test_kinds(self):
        P, U = setup("grid-2x2")
        assert aut_membership((0, 1, 2, 3), P.a) is AutKind.AUT1
        assert aut_membership((2, 3, 0, 1), P.a) is AutKind.AUT
        assert aut_membership((0, 2, 1, 3), P.a) is AutKind.NEITHER
        with pytest.raises(NotBijectionError):
            aut_membership((0, 0, 1, 2), P.a)

    @pytest.mark.parametrize("name", WITH_BISECTIONS)
    def test_left_operators_fix_a_classes(self, name):
        P, U = setup(name)
        for x, y in itertools.product(U, repeat=2):
            lxy = operator(P, "L", x, y).action
            assert aut_membership(lxy, P.a) is AutKind.AUT1
            assert aut_membership(lxy, P.b) is not AutKind.NEITHER


class TestKernel:
    def test_equal_relations_give_identity(self):
        T = homogeneous(cyclic(6), [0, 3], [0, 3])
        assert T.a == T.b
        P = pregroupoid_of(T)
        U = list(enumerate_bisections(P.a, P.b))
        assert len(U) == 8
        for x, y in itertools.product(U, repeat=2):
            k = canonical_kernel(P, y, x)
            assert k.as_dict() == {e: e for e in y}

    def test_transversal_pair_gives_bijections(self):
        P, U = setup("pair-3x3")
        maps = {canonical_kernel(P, U[0], x).values for x in U}
        assert all(sorted(m) == list(U[0].elements()) for m in maps)
        assert len(maps) == 6

    @pytest.mark.parametrize("name", WITH_BISECTIONS)
    def test_action_in_transposed_form(self, name):
        P, U = setup(name)
        BT = bisection_torsor(P)
        for y in U:
            assert all(r.holds for r in kernel_action_check(P, y, transposed=True, BT=BT))

    def test_untransposed_form_reverses_order(self):
        P, U = setup("pair-3x3")
        y = U[0]
        assert not kernel_action_check(P, y)[0].holds
        for x, z in itertools.product(U, repeat=2):
            bx, bz = canonical_kernel(P, y, x), canonical_kernel(P, y, z)
            bxyz = canonical_kernel(P, y, gamma_product(P, x, y, z))
            assert all(bxyz(e) == bz(bx(e)) for e in y)

    def test_kernel_is_bijective_on_bisections(self):
        P, U = setup("s3-A12-B12")
        for x, y in itertools.product(U, repeat=2):
            assert canonical_kernel(P, y, x).is_bijective


class TestAssociativePair:
    @pytest.mark.parametrize("name", ["z6-A03-B024", "s3-A12-B123", "s3-A12-B12"])
    def test_closed_and_para_associative(self, name):
        pair = associative_pair_products(demo(name))
        assert all(r.holds for r in pair.check_para_associativity())

    def test_z6_sizes(self):
        pair = associative_pair_products(demo("z6-A03-B024"))
        assert (len(pair.plus_carrier), len(pair.minus_carrier)) == (8, 9)
        assert pair.plus.shape == (8, 9, 8) and pair.minus.shape == (9, 8, 9)


class TestAffinePicture:
    @pytest.mark.parametrize("name", ["z6-torsorbundle-A03", "s3-A12-B12", "s3-A12-B123"])
    def test_chart(self, name):
        T = demo(name)
        y = next(iter(enumerate_sections(T.left_part().a)))
        reports = chart_checks(affine_chart(T, y))
        assert all(r.holds for r in reports), [r for r in reports if not r.holds]

    def test_chart_needs_a_section(self):
        T = demo("z6-torsorbundle-A03")
        with pytest.raises(NotTransversalError):
            affine_chart(T, T.ground.subset([0]))

    @pytest.mark.parametrize("name", ["s3-A12-B12", "z3xz3-A10-B01", "z6-torsorbundle-A03"])
    def test_action_formula(self, name):
        T = demo(name)
        P = T.pregroupoid_part()
        for y in enumerate_bisections(P.a, P.b):
            assert action_formula_check(T, y).holds

    @pytest.mark.parametrize("name", ["s3-A12-B12", "z3xz3-A10-B01", "z6-torsorbundle-A03"])
    def test_right_distributivity(self, name):
        T = demo(name)
        P = T.pregroupoid_part()
        U = list(enumerate_bisections(P.a, P.b))
        ua = list(enumerate_sections(P.a))
        rep = right_distributivity_check(T, ua, U, U)
        assert rep.holds and rep.instances == len(U) ** 2 * len(ua) ** 3

    def test_right_distributivity_needs_bisections(self):
        T = demo("s3-A12-B12")
        P = T.pregroupoid_part()
        ua, ub = list(enumerate_sections(P.a)), list(enumerate_sections(P.b))
        assert not right_distributivity_check(T, ua, ua, ub).holds

    def test_left_distributivity_fails(self):
        T = demo("z3xz3-A10-B01")
        P = T.pregroupoid_part()
        ua, U = list(enumerate_sections(P.a)), list(enumerate_bisections(P.a, P.b))
        # x a section, y a bisection: multiplication by x on the left is not affine
        cex = left_distributivity_counterexample(T, ua, ua, U)
        assert cex == ((0, 1, 5), (0, 4, 8), (0, 1, 2), (0, 1, 5), (0, 1, 2), (0, 1, 5), (0, 1, 2))
        x, y, u, v, w, lhs, rhs = (T.ground.subset(s) for s in cex)
        assert gamma_product(P, x, y, prev_product(T.left_part(), u, v, w)) == lhs != rhs
        # with a bisection on the left it does distribute
        assert left_distributivity_counterexample(T, ua, U, U) is None


class TestSelfDistributivity:
    @pytest.mark.parametrize("name", ["grid-2x2", "s3-A12-B12", "z6-torsorbundle-A03"])
    def test_bisections_distribute(self, name):
        P, U = setup(name)
        t = gamma_table(P)
        pairs = [(x.bits, y.bits) for x, y in itertools.product(U, repeat=2)]
        assert all(r.holds for r in self_distributivity_check(t, pairs, pairs))

    def test_local_bisections_do_not(self):
        P, _ = setup("grid-2x2")
        t = gamma_table(P)
        loc = [(x.bits, y.bits)
               for x, y in itertools.product(enumerate_local_bisections(P.a, P.b), repeat=2)]
        left, right = self_distributivity_check(t, loc, loc)
        assert not left.holds and not right.holds

    @pytest.mark.parametrize("name", ["grid-2x2", "z6-A03-B024", "s3-A12-B12"])
    def test_automorphisms_act_on_subsets(self, name):
        P = pregroupoid_of(demo(name))
        autos = structure_automorphisms(P)
        assert tuple(range(P.ground.size)) in autos
        assert automorphism_check(gamma_table(P), autos).holds

    def test_bad_map_is_caught(self):
        P = pregroupoid_of(demo("grid-2x2"))
        rep = automorphism_check(gamma_table(P), [(1, 0, 2, 3)])
        assert not rep.holds and rep.witness[0] == (1, 0, 2, 3)


def test_flavors_of_demos():
    assert demo("pair-3x3").flavor is Flavor.PREGROUPOID
    assert demo("s3-A12-B12").flavor is Flavor.COMMUTING_PREV_PAIR
