"""Bisection torsors, the L/M/R operator calculus, the canonical kernel and the affine chart."""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .algebra import FiniteGroup
from .equivalence import (
    Equiv,
    InducedEquivalence,
    enumerate_bisections,
    enumerate_local_bisections,
    enumerate_sections,
)
from .errors import NotBijectionError, NotBisectionError, NotTransversalError, StructureError
from .powerset_products import (
    DEFAULT_BUDGET,
    Law,
    TernaryLawReport,
    gamma_product,
    prev_product,
    table_idempotent,
    table_para_associativity,
)
from .relations import GroundSet, Subset, iter_bits
from .structures import (
    Flavor,
    TernaryStructure,
    left_translation,
    require_valid,
    translation_group,
)

Map = tuple[int, ...]


def pregroupoid_of(T: TernaryStructure) -> TernaryStructure:
    """The pregroupoid restriction of a commuting pair, or ``T`` itself."""
    return T.pregroupoid_part() if T.flavor is Flavor.COMMUTING_PREV_PAIR else T


def _index(carrier: Sequence[Subset]) -> dict[int, int]:
    return {s.bits: i for i, s in enumerate(carrier)}


# --------------------------------------------------------------------------
# the torsor of bisections


@dataclass
class BisectionTorsor:
    """``U_ab`` in canonical order with its ternary table (indices into ``carrier``)."""

    base: TernaryStructure
    carrier: list[Subset]
    table: np.ndarray
    reports: list[TernaryLawReport] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.carrier)

    def index(self, s: Subset) -> int:
        try:
            return _index(self.carrier)[s.bits]
        except KeyError:
            raise NotBisectionError(f"{s!r} is not a bisection", witness=s.elements()) from None

    def product(self, x: Subset, y: Subset, z: Subset) -> Subset:
        i, j, k = self.index(x), self.index(y), self.index(z)
        return self.carrier[int(self.table[i, j, k])]


def _ternary_table(T: TernaryStructure, xs: Sequence[Subset], ys: Sequence[Subset],
                   zs: Sequence[Subset], out: Sequence[Subset], law: str) -> np.ndarray:
    """Tabulate ``gamma`` over ``xs x ys x zs``; every value must land in ``out``."""
    where = _index(out)
    tab = np.zeros((len(xs), len(ys), len(zs)), dtype=np.int64)
    for (i, x), (j, y), (k, z) in itertools.product(enumerate(xs), enumerate(ys), enumerate(zs)):
        w = gamma_product(T, x, y, z)
        if w.bits not in where:
            raise StructureError(f"{law}: ({x!r} {y!r} {z!r}) = {w!r} leaves the carrier",
                                 witness=((x.elements(), y.elements(), z.elements()), w.elements()),
                                 reports=[TernaryLawReport(Law.CLOSURE, False,
                                                           witness=(x, y, z, w))])
        tab[i, j, k] = where[w.bits]
    return tab


def bisection_torsor(T: TernaryStructure, budget: int = DEFAULT_BUDGET, seed: int = 0,
                     require: bool = True) -> BisectionTorsor:
    """``U_ab`` with ``(xyz)_ab``; (PA) always, (IP) demanded for pregroupoids."""
    P = pregroupoid_of(T)
    carrier = list(enumerate_bisections(P.a, P.b))
    tab = _ternary_table(P, carrier, carrier, carrier, carrier, "U_ab")
    reports = [TernaryLawReport(Law.CLOSURE, True, instances=tab.size)]
    if carrier:
        reports += [table_para_associativity(tab, budget, seed), table_idempotent(tab)]
    else:
        reports += [TernaryLawReport(Law.PA, True), TernaryLawReport(Law.IP, True)]
    if require:
        need = {Law.PA, Law.CLOSURE} | ({Law.IP} if P.flavor is not Flavor.SEMI_PREGROUPOID else set())
        bad = [r for r in reports if not r.holds and r.law in need]
        if bad:
            raise StructureError(f"U_ab fails {bad[0].law}", witness=bad[0].witness, reports=reports)
    return BisectionTorsor(P, carrier, tab, reports)


def section_torsor(T: TernaryStructure, budget: int = DEFAULT_BUDGET, seed: int = 0) -> BisectionTorsor:
    """``U_a`` with the prev product ``(xyz)_a`` (torsor of sections)."""
    carrier = list(enumerate_sections(T.a))
    where = _index(carrier)
    tab = np.zeros((len(carrier),) * 3, dtype=np.int64)
    for (i, x), (j, y), (k, z) in itertools.product(enumerate(carrier), repeat=3):
        w = prev_product(T, x, y, z)
        if w.bits not in where:
            raise StructureError(f"U_a not closed at {(x, y, z)}", witness=(x, y, z, w))
        tab[i, j, k] = where[w.bits]
    reports = [TernaryLawReport(Law.CLOSURE, True, instances=tab.size)]
    if carrier:
        reports += [table_para_associativity(tab, budget, seed), table_idempotent(tab)]
    return BisectionTorsor(T, carrier, tab, reports)


def group_at(BT: BisectionTorsor, y: Subset) -> FiniteGroup:
    """``x*z = (xyz)`` with neutral element ``y``."""
    j = BT.index(y)
    labels = ["{" + ",".join(map(str, s.elements())) + "}" for s in BT.carrier]
    return FiniteGroup(BT.table[:, j, :].tolist(), labels=labels, name=f"U at {y!r}")


def local_bisection_pregroupoid(T: TernaryStructure) -> tuple[TernaryStructure, list[Subset]]:
    """``U_ab^loc`` with induced ``(a, b)`` and ``gamma`` as a pregroupoid."""
    P = pregroupoid_of(T)
    carrier = list(enumerate_local_bisections(P.a, P.b))
    g = GroundSet(len(carrier), ["{" + ",".join(map(str, s.elements())) + "}" for s in carrier])
    ia = InducedEquivalence(P.a).on(g, carrier)
    ib = InducedEquivalence(P.b).on(g, carrier)
    where = _index(carrier)

    def prod(i, j, k):
        w = gamma_product(P, carrier[i], carrier[j], carrier[k])
        if w.bits not in where:
            raise StructureError(f"U_ab^loc not closed at {(i, j, k)}", witness=(i, j, k))
        return where[w.bits]

    L = TernaryStructure.tabulate(g, ia, ib, Flavor.PREGROUPOID, prod)
    return require_valid(L), carrier


# --------------------------------------------------------------------------
# projections and operators


def projection(e: Equiv, x: Subset) -> Map:
    """``P^e_x`` as a total map; ``x`` must be a transversal of ``e``."""
    out = []
    for w in range(e.ground.size):
        m = e.class_mask(w) & x.bits
        if m == 0 or m & (m - 1):
            i = e.block_of[w]
            raise NotTransversalError(
                f"class {i} of {w} meets {x!r} in {len(list(iter_bits(m)))} elements",
                witness=(i, tuple(iter_bits(m))))
        out.append(m.bit_length() - 1)
    return tuple(out)


class OpKind(str, enum.Enum):
    L = "L"
    M = "M"
    R = "R"


@dataclass(frozen=True)
class OperatorTriple:
    kind: OpKind
    params: tuple
    action: Map

    def __call__(self, w: int) -> int:
        return self.action[w]

    def image(self, s: Subset) -> Subset:
        return Subset(s.ground, sum(1 << self.action[t] for t in s))


def operator(T: TernaryStructure, kind: OpKind | str, first: Subset, second: Subset) -> OperatorTriple:
    """``L_{xayb}`` (first=x, second=y), ``M_{xabz}`` (x, z), ``R_{zbya}`` (z, y)."""
    P = pregroupoid_of(T)
    kind = OpKind(kind)
    a, b = P.a, P.b
    n = P.ground.size
    p = P.product
    if kind is OpKind.L:
        pa, pb = projection(a, first), projection(b, second)
        act = [p(pa[pb[z]], pb[z], z) for z in range(n)]
    elif kind is OpKind.M:
        pa, pb = projection(a, first), projection(b, second)
        act = [p(pa[y], y, pb[y]) for y in range(n)]
    else:
        pb, pa = projection(b, first), projection(a, second)
        act = [p(x, pa[x], pb[pa[x]]) for x in range(n)]
    if None in act:
        raise StructureError(f"{kind.value}-operator leaves the domain", witness=tuple(act))
    return OperatorTriple(kind, (first, second), tuple(act))  # type: ignore[arg-type]


class AutKind(str, enum.Enum):
    AUT1 = "Aut1"
    AUT = "Aut"
    NEITHER = "neither"


def aut_membership(g: Sequence[int], a: Equiv) -> AutKind:
    """``Aut1`` if ``g`` fixes every class, ``Aut`` if it only permutes them."""
    n = a.ground.size
    if len(g) != n or sorted(g) != list(range(n)):
        raise NotBijectionError("aut_membership needs a bijection", witness=tuple(g))
    images = [sum(1 << g[t] for t in iter_bits(m)) for m in a.masks]
    if images == list(a.masks):
        return AutKind.AUT1
    if sorted(images) == sorted(a.masks):
        return AutKind.AUT
    return AutKind.NEITHER


def compose_maps(f: Sequence[int], g: Sequence[int]) -> Map:
    """``f o g``."""
    return tuple(f[t] for t in g)


# --------------------------------------------------------------------------
# canonical kernel


@dataclass(frozen=True)
class CanonicalKernelMap:
    """``eta -> P^first_y P^second_x (eta)`` on ``y``; ``values[i]`` is the image of ``y``'s i-th element."""

    y: Subset
    x: Subset
    values: tuple[int, ...]

    def __call__(self, eta: int) -> int:
        return self.values[self.y.elements().index(eta)]

    def as_dict(self) -> dict[int, int]:
        return dict(zip(self.y.elements(), self.values))

    @property
    def is_bijective(self) -> bool:
        return sorted(self.values) == list(self.y.elements())


def canonical_kernel(T: TernaryStructure, y: Subset, x: Subset,
                     transposed: bool = False) -> CanonicalKernelMap:
    """``B^{axb}_y = P^a_y o P^b_x`` restricted to ``y`` (``x`` in ``U_b``, ``y`` in ``U_a``).

    With ``transposed=True`` the roles of ``a`` and ``b`` swap: ``P^b_y o P^a_x``.
    """
    P = pregroupoid_of(T)
    first, second = (P.b, P.a) if transposed else (P.a, P.b)
    py, px = projection(first, y), projection(second, x)
    return CanonicalKernelMap(y, x, tuple(py[px[eta]] for eta in y))


def kernel_action_check(T: TernaryStructure, y: Subset, transposed: bool = False,
                        BT: Optional[BisectionTorsor] = None) -> list[TernaryLawReport]:
    """``B^{(xyz)} = B^x o B^z`` and ``(B^x)^-1 = B^{(yxy)}`` for all ``x, z`` in ``U_ab``."""
    BT = BT or bisection_torsor(T)
    ker = {x.bits: canonical_kernel(T, y, x, transposed).as_dict() for x in BT.carrier}
    j = BT.index(y)
    hom = inv = None
    count = 0
    for i, x in enumerate(BT.carrier):
        bx = ker[x.bits]
        for k, z in enumerate(BT.carrier):
            count += 1
            bz = ker[z.bits]
            bxyz = ker[BT.carrier[int(BT.table[i, j, k])].bits]
            if hom is None and any(bxyz[e] != bx[bz[e]] for e in y):
                hom = ((x.elements(), z.elements()), bxyz, {e: bx[bz[e]] for e in y})
        byxy = ker[BT.carrier[int(BT.table[j, i, j])].bits]
        if inv is None and any(byxy[bx[e]] != e for e in y):
            inv = (x.elements(), bx, byxy)
    note = "P^b_y P^a_x" if transposed else "P^a_y P^b_x"
    return [TernaryLawReport(Law.HOMOMORPHISM, hom is None, witness=hom, instances=count, note=note),
            TernaryLawReport(Law.INVERSE, inv is None, witness=inv, instances=len(BT), note=note)]


# --------------------------------------------------------------------------
# associative pair (U_a, U_b)


@dataclass
class AssociativePair:
    plus_carrier: list[Subset]      # U_a
    minus_carrier: list[Subset]     # U_b
    plus: np.ndarray                # [U_a, U_b, U_a] -> U_a
    minus: np.ndarray               # [U_b, U_a, U_b] -> U_b

    def check_para_associativity(self) -> list[TernaryLawReport]:
        out = []
        for sign, p, q in (("+", self.plus, self.minus), ("-", self.minus, self.plus)):
            na, nb = p.shape[0], p.shape[1]
            count = 0
            bad = None
            # <xy<uvw>> = <x<vuy>w> = <<xyu>vw>, x,u,w on the p side, y,v on the q side
            for x in range(na):
                for y in range(nb):
                    s1 = p[x, y][p[:, :, :]]                        # [u, v, w]
                    vuy = q[:, :, y]                                # [v, u]
                    s2 = p[x][vuy.T[:, :, None], np.arange(na)[None, None, :]]
                    s3 = p[p[x, y, :]][:, :, :]                     # [u, v, w]
                    mism = (s1 != s2) | (s2 != s3)
                    count += mism.size
                    if mism.any() and bad is None:
                        u, v, w = (int(t) for t in np.argwhere(mism)[0])
                        bad = ((x, y, u, v, w), (int(s1[u, v, w]), int(s2[u, v, w]), int(s3[u, v, w])))
            out.append(TernaryLawReport(Law.PA, bad is None, witness=bad, instances=count,
                                        note=f"associative pair, {sign} side"))
        return out


def associative_pair_products(T: TernaryStructure) -> AssociativePair:
    """``<xyz>+`` on ``U_a x U_b x U_a`` and ``<xyz>-`` on ``U_b x U_a x U_b``, closure checked."""
    P = pregroupoid_of(T)
    ua = list(enumerate_sections(P.a))
    ub = list(enumerate_sections(P.b))
    plus = _ternary_table(P, ua, ub, ua, ua, "<>+")
    minus = _ternary_table(P, ub, ua, ub, ub, "<>-")
    return AssociativePair(ua, ub, plus, minus)


# --------------------------------------------------------------------------
# affine picture


@dataclass
class AffineChart:
    """``U_a <-> Map(y, G^a)`` for a left prev and a zero section ``y``."""

    prev: TernaryStructure
    y: Subset
    group: list[Map]             # G^a, sorted

    def to_map(self, z: Subset) -> tuple[Map, ...]:
        """``eta -> lambda^a_{P^a_z(eta), eta}`` for each ``eta`` in ``y``."""
        pz = projection(self.prev.a, z)
        return tuple(left_translation(self.prev, pz[eta], eta) for eta in self.y)

    def from_map(self, f: Sequence[Map]) -> Subset:
        return self.y.ground.subset(g[eta] for g, eta in zip(f, self.y))

    def all_maps(self):
        return itertools.product(self.group, repeat=len(self.y))


def affine_chart(T: TernaryStructure, y: Subset) -> AffineChart:
    if T.flavor is Flavor.COMMUTING_PREV_PAIR:
        T = T.left_part()
    if T.flavor is not Flavor.LEFT_PREV:
        raise StructureError("the affine chart needs a left prev")
    projection(T.a, y)
    return AffineChart(T, y, translation_group(T))


def chart_checks(chart: AffineChart) -> list[TernaryLawReport]:
    """Round trips both ways, zero section to identity, and the pointwise group law."""
    T, y = chart.prev, chart.y
    ua = list(enumerate_sections(T.a))
    ident = tuple(range(T.ground.size))
    out = []
    bad = next((z for z in ua if chart.from_map(chart.to_map(z)) != z), None)
    out.append(TernaryLawReport(Law.ROUND_TRIP, bad is None, witness=bad, instances=len(ua),
                                note="U_a -> maps -> U_a"))
    count = 0
    bad = None
    for f in chart.all_maps():
        count += 1
        if chart.to_map(chart.from_map(f)) != tuple(f):
            bad = f
            break
    out.append(TernaryLawReport(Law.ROUND_TRIP, bad is None, witness=bad, instances=count,
                                note="maps -> U_a -> maps"))
    zero = chart.to_map(y)
    out.append(TernaryLawReport(Law.IDENTITY, all(g == ident for g in zero), witness=zero,
                                note="zero section"))
    bad = None
    for x, z in itertools.product(ua, repeat=2):
        fx, fz = chart.to_map(x), chart.to_map(z)
        fs = chart.to_map(prev_product(T, x, y, z))
        want = tuple(compose_maps(gx, gz) for gx, gz in zip(fx, fz))
        if fs != want:
            bad = (x, z, fs, want)
            break
    out.append(TernaryLawReport(Law.HOMOMORPHISM, bad is None, witness=bad, instances=len(ua) ** 2,
                                note="pointwise group law"))
    return out


def action_formula_check(T: TernaryStructure, y: Subset) -> TernaryLawReport:
    """``f_{x.z}(eta) = f_x(B^{bza}_y(eta)) o f_z(eta)`` for all ``x, z`` in ``U_a``."""
    if T.flavor is not Flavor.COMMUTING_PREV_PAIR:
        raise StructureError("the action formula needs a commuting prev pair")
    P = T.pregroupoid_part()
    chart = affine_chart(T, y)
    ua = list(enumerate_sections(P.a))
    ys = y.elements()
    count = 0
    for x, z in itertools.product(ua, repeat=2):
        count += 1
        fx, fz = dict(zip(ys, chart.to_map(x))), chart.to_map(z)
        fxz = chart.to_map(gamma_product(P, x, y, z))
        twist = canonical_kernel(P, y, z, transposed=True)        # P^b_y P^a_z
        for i, eta in enumerate(ys):
            want = compose_maps(fx[twist(eta)], fz[i])
            if fxz[i] != want:
                return TernaryLawReport(Law.HOMOMORPHISM, False,
                                        witness=(x.elements(), z.elements(), eta, fxz[i], want),
                                        instances=count, note="action formula")
    return TernaryLawReport(Law.HOMOMORPHISM, True, instances=count, note="action formula")


def right_distributivity_check(T: TernaryStructure, outer: Sequence[Subset],
                               ys: Sequence[Subset], zs: Sequence[Subset]) -> TernaryLawReport:
    """``((uvw)_a y z)_ab == ((uyz)(vyz)(wyz))_a`` for ``u, v, w`` in ``outer``."""
    P = pregroupoid_of(T)
    L = T.left_part() if T.flavor is Flavor.COMMUTING_PREV_PAIR else T
    count = 0
    for y, z in itertools.product(ys, zs):
        r = {u.bits: gamma_product(P, u, y, z) for u in outer}
        for u, v, w in itertools.product(outer, repeat=3):
            count += 1
            lhs = gamma_product(P, prev_product(L, u, v, w), y, z)
            rhs = prev_product(L, r[u.bits], r[v.bits], r[w.bits])
            if lhs != rhs:
                return TernaryLawReport(
                    Law.DISTRIBUTIVITY, False,
                    witness=tuple(s.elements() for s in (u, v, w, y, z, lhs, rhs)),
                    instances=count, note="right")
    return TernaryLawReport(Law.DISTRIBUTIVITY, True, instances=count, note="right")


def left_distributivity_counterexample(T: TernaryStructure, outer: Sequence[Subset],
                                       xs: Sequence[Subset], ys: Sequence[Subset]):
    """First ``(x, y, u, v, w)`` with ``(x y (uvw)_a)_ab != ((xyu)(xyv)(xyw))_a``, or None."""
    P = pregroupoid_of(T)
    L = T.left_part() if T.flavor is Flavor.COMMUTING_PREV_PAIR else T
    for x, y in itertools.product(xs, ys):
        l = {u.bits: gamma_product(P, x, y, u) for u in outer}
        for u, v, w in itertools.product(outer, repeat=3):
            lhs = gamma_product(P, x, y, prev_product(L, u, v, w))
            rhs = prev_product(L, l[u.bits], l[v.bits], l[w.bits])
            if lhs != rhs:
                return tuple(s.elements() for s in (x, y, u, v, w, lhs, rhs))
    return None


# --------------------------------------------------------------------------
# self-distributivity and automorphisms on the power set


def self_distributivity_check(table: np.ndarray, pairs_left: Sequence[tuple[int, int]],
                              pairs_right: Sequence[tuple[int, int]]) -> list[TernaryLawReport]:
    """Left ``(xy(uvw)) = ((xyu)(xyv)(xyw))`` over ``(x, y)`` and right twin over ``(y, z)``.

    ``table`` is the tabulated product on all subsets; ``u, v, w`` range over all subsets.
    """
    t = table.astype(np.int64)
    out = []
    count = 0
    bad = None
    for x, y in pairs_left:
        lhs = t[x, y][t]
        row = t[x, y]
        rhs = t[row[:, None, None], row[None, :, None], row[None, None, :]]
        count += lhs.size
        if (lhs != rhs).any():
            u, v, w = (int(i) for i in np.argwhere(lhs != rhs)[0])
            bad = ((x, y, u, v, w), (int(lhs[u, v, w]), int(rhs[u, v, w])))
            break
    out.append(TernaryLawReport(Law.ENDOMORPHISM, bad is None, witness=bad, instances=count,
                                note="left self-distributivity"))
    count = 0
    bad = None
    for y, z in pairs_right:
        lhs = t[:, y, z][t]
        col = t[:, y, z]
        rhs = t[col[:, None, None], col[None, :, None], col[None, None, :]]
        count += lhs.size
        if (lhs != rhs).any():
            u, v, w = (int(i) for i in np.argwhere(lhs != rhs)[0])
            bad = ((u, v, w, y, z), (int(lhs[u, v, w]), int(rhs[u, v, w])))
            break
    out.append(TernaryLawReport(Law.ENDOMORPHISM, bad is None, witness=bad, instances=count,
                                note="right self-distributivity"))
    return out


def structure_automorphisms(T: TernaryStructure) -> list[Map]:
    """Permutations in ``Aut(a) & Aut(b)`` that preserve the pregroupoid product."""
    P = pregroupoid_of(T)
    n = P.ground.size
    out = []
    for g in itertools.permutations(range(n)):
        if aut_membership(g, P.a) is AutKind.NEITHER or aut_membership(g, P.b) is AutKind.NEITHER:
            continue
        if all(P.product(g[x], g[y], g[z]) == g[w] for (x, y, z), w in P.table.items()):
            out.append(g)
    return out


def automorphism_check(table: np.ndarray, autos: Sequence[Map]) -> TernaryLawReport:
    """``g (xyz) = (gx gy gz)`` on all subset triples for every listed automorphism."""
    t = table.astype(np.int64)
    N = t.shape[0]
    idx = np.arange(N, dtype=np.int64)
    count = 0
    for g in autos:
        gs = np.zeros(N, dtype=np.int64)
        for i, gi in enumerate(g):
            gs |= ((idx >> i) & 1) << gi
        lhs = gs[t]
        rhs = t[gs[:, None, None], gs[None, :, None], gs[None, None, :]]
        count += lhs.size
        if (lhs != rhs).any():
            x, y, z = (int(i) for i in np.argwhere(lhs != rhs)[0])
            return TernaryLawReport(Law.AUTOMORPHISM, False, witness=(g, (x, y, z)), instances=count)
    return TernaryLawReport(Law.AUTOMORPHISM, True, instances=count)
