"""Element-level partial ternary structures: pregroupoids, prevs, torsors, groupoids.

A ``TernaryStructure`` stores its product sparsely on the domain fixed by
its flavor; ``product`` returns None off that domain, never a default
element, since the conditional reading of para-associativity depends on
telling the two apart.
"""

from __future__ import annotations

import enum
import itertools
import random
from dataclasses import dataclass
from typing import Callable, Iterator, Optional, Sequence

import numpy as np

from .algebra import FiniteGroup, close_generators, left_cosets, right_cosets
from .equivalence import (
    Equiv,
    commutation_witness,
    enumerate_bisections,
    from_relation,
)
from .errors import ActionError, NotBisectionError, StructureError
from .powerset_products import (
    DEFAULT_BUDGET,
    Law,
    TernaryLawReport,
    table_idempotent,
    table_para_associativity,
)
from .relations import GroundSet, Subset, compose, iter_bits


class Flavor(str, enum.Enum):
    SEMI_PREGROUPOID = "semi_pregroupoid"
    PREGROUPOID = "pregroupoid"
    LEFT_PREV = "left_prev"
    RIGHT_PREV = "right_prev"
    COMMUTING_PREV_PAIR = "commuting_prev_pair"
    TORSOR = "torsor"

    def __str__(self) -> str:
        return self.value


Triple = tuple[int, int, int]


class TernaryStructure:
    """Ground set, pair ``(a, b)``, flavor, and a product table on the flavor's domain."""

    __slots__ = ("ground", "a", "b", "flavor", "table")

    def __init__(self, ground: GroundSet, a: Equiv, b: Equiv, flavor: Flavor | str,
                 table: dict[Triple, int]):
        flavor = Flavor(flavor)
        if a.ground is not ground or b.ground is not ground:
            raise StructureError("equivalences must live on the structure's ground set")
        if flavor in (Flavor.LEFT_PREV, Flavor.TORSOR) and not b.masks == Equiv.all(ground).masks:
            raise StructureError(f"{flavor} needs b to be the all-relation")
        if flavor in (Flavor.RIGHT_PREV, Flavor.TORSOR) and not a.masks == Equiv.all(ground).masks:
            raise StructureError(f"{flavor} needs a to be the all-relation")
        self.ground = ground
        self.a = a
        self.b = b
        self.flavor = flavor
        self.table = dict(table)
        self._check_shape()

    # -- domain ------------------------------------------------------------

    def in_domain(self, x: int, y: int, z: int) -> bool:
        left = self.a.related(x, y)
        right = self.b.related(y, z)
        if self.flavor in (Flavor.SEMI_PREGROUPOID, Flavor.PREGROUPOID):
            return left and right
        if self.flavor is Flavor.LEFT_PREV:
            return left
        if self.flavor is Flavor.RIGHT_PREV:
            return right
        if self.flavor is Flavor.COMMUTING_PREV_PAIR:
            return left or right
        return True

    def domain_triples(self) -> Iterator[Triple]:
        n = self.ground.size
        for x, y, z in itertools.product(range(n), repeat=3):
            if self.in_domain(x, y, z):
                yield (x, y, z)

    def _check_shape(self) -> None:
        n = self.ground.size
        for key, w in self.table.items():
            if len(key) != 3 or not all(0 <= t < n for t in key):
                raise StructureError(f"table key {key} out of range", witness=key)
            if not self.in_domain(*key):
                raise StructureError(f"table entry {key} lies outside the {self.flavor} domain",
                                     witness=key)
            if not 0 <= w < n:
                raise StructureError(f"table value at {key} out of range", witness=(key, w))
        for t in self.domain_triples():
            if t not in self.table:
                raise StructureError(f"table undefined at {t}", witness=t)

    def product(self, x: int, y: int, z: int) -> Optional[int]:
        return self.table.get((x, y, z))

    def __call__(self, x: int, y: int, z: int) -> Optional[int]:
        return self.table.get((x, y, z))

    # -- derived structures --------------------------------------------------

    def restrict(self, flavor: Flavor | str) -> "TernaryStructure":
        """Same table cut down to the domain of a smaller flavor."""
        flavor = Flavor(flavor)
        g = self.ground
        a, b = self.a, self.b
        if flavor is Flavor.LEFT_PREV:
            b = Equiv.all(g)
        elif flavor is Flavor.RIGHT_PREV:
            a = Equiv.all(g)
        probe = TernaryStructure.__new__(TernaryStructure)
        probe.ground, probe.a, probe.b, probe.flavor = g, a, b, flavor
        table = {t: w for t, w in self.table.items() if probe.in_domain(*t)}
        return TernaryStructure(g, a, b, flavor, table)

    def pregroupoid_part(self) -> "TernaryStructure":
        return self.restrict(Flavor.PREGROUPOID)

    def left_part(self) -> "TernaryStructure":
        return self.restrict(Flavor.LEFT_PREV)

    def right_part(self) -> "TernaryStructure":
        return self.restrict(Flavor.RIGHT_PREV)

    # -- equality and serialization -----------------------------------------

    def __eq__(self, other) -> bool:
        return (isinstance(other, TernaryStructure)
                and self.ground.size == other.ground.size
                and self.a.masks == other.a.masks
                and self.b.masks == other.b.masks
                and self.flavor == other.flavor
                and self.table == other.table)

    def __hash__(self) -> int:
        return hash((self.ground.size, self.a.masks, self.b.masks, self.flavor))

    def __repr__(self) -> str:
        return f"TernaryStructure({self.flavor}, n={self.ground.size}, |D|={len(self.table)})"

    def to_json(self) -> dict:
        out = {
            "flavor": self.flavor.value,
            "ground_size": self.ground.size,
            "a": [list(b.elements()) for b in self.a.blocks],
            "b": [list(b.elements()) for b in self.b.blocks],
            "table": [[x, y, z, w] for (x, y, z), w in sorted(self.table.items())],
        }
        if self.ground.labels is not None:
            out["labels"] = list(self.ground.labels)
        return out

    @classmethod
    def from_json(cls, data: dict) -> "TernaryStructure":
        try:
            g = GroundSet(int(data["ground_size"]), data.get("labels"))
            a = Equiv(g, data["a"])
            b = Equiv(g, data["b"])
            table = {}
            for row in data["table"]:
                x, y, z, w = (int(v) for v in row)
                if (x, y, z) in table:
                    raise StructureError(f"duplicate table row for {(x, y, z)}", witness=(x, y, z))
                table[x, y, z] = w
            return cls(g, a, b, data["flavor"], table)
        except (KeyError, TypeError) as exc:
            raise StructureError(f"malformed structure JSON: {exc}") from exc

    @classmethod
    def tabulate(cls, ground: GroundSet, a: Equiv, b: Equiv, flavor: Flavor | str,
                 fn: Callable[[int, int, int], int]) -> "TernaryStructure":
        probe = cls.__new__(cls)
        probe.ground, probe.a, probe.b, probe.flavor = ground, a, b, Flavor(flavor)
        table = {t: fn(*t) for t in probe.domain_triples()}
        return cls(ground, a, b, flavor, table)


# --------------------------------------------------------------------------
# law checks on sparse tables


class _Index:
    """Domain triples grouped by each coordinate, for enumerating composable quintuples."""

    def __init__(self, T: TernaryStructure):
        self.T = T
        self.triples = sorted(T.table)
        self.by_first: dict[int, list[tuple[int, int]]] = {}
        self.by_middle: dict[int, list[tuple[int, int]]] = {}
        self.by_last: dict[int, list[tuple[int, int]]] = {}
        for x, y, z in self.triples:
            self.by_first.setdefault(x, []).append((y, z))
            self.by_middle.setdefault(y, []).append((x, z))
            self.by_last.setdefault(z, []).append((x, y))

    def pa_count(self) -> int:
        p = self.T.table
        total = 0
        for t in self.triples:
            w = p[t]
            total += len(self.by_last.get(w, ())) + len(self.by_middle.get(w, ())) \
                + len(self.by_first.get(w, ()))
        return total

    def pa_quintuples(self) -> Iterator[tuple[int, int, int, int, int]]:
        """Every (x, y, z, u, v) for which at least one side of (PA) is defined."""
        p = self.T.table
        for (z, u, v) in self.triples:                       # (xy(zuv))
            for x, y in self.by_last.get(p[z, u, v], ()):
                yield (x, y, z, u, v)
        for (u, z, y) in self.triples:                       # (x(uzy)v)
            for x, v in self.by_middle.get(p[u, z, y], ()):
                yield (x, y, z, u, v)
        for (x, y, z) in self.triples:                       # ((xyz)uv)
            for u, v in self.by_first.get(p[x, y, z], ()):
                yield (x, y, z, u, v)

    def sample_quintuples(self, k: int, rng: random.Random) -> Iterator[tuple[int, int, int, int, int]]:
        p = self.T.table
        produced = 0
        while produced < k:
            side = rng.randrange(3)
            t = rng.choice(self.triples)
            w = p[t]
            bucket = (self.by_last, self.by_middle, self.by_first)[side].get(w)
            if not bucket:
                continue
            s, r = rng.choice(bucket)
            produced += 1
            if side == 0:
                z, u, v = t
                yield (s, r, z, u, v)
            elif side == 1:
                u, z, y = t
                yield (s, y, z, u, r)
            else:
                x, y, z = t
                yield (x, y, z, s, r)


def _pa_sides(p, x, y, z, u, v):
    w = p(z, u, v)
    s1 = None if w is None else p(x, y, w)
    w = p(u, z, y)
    s2 = None if w is None else p(x, w, v)
    w = p(x, y, z)
    s3 = None if w is None else p(w, u, v)
    return s1, s2, s3


def structure_pa(T: TernaryStructure, budget: int = DEFAULT_BUDGET, seed: int = 0,
                 exhaustive: bool = False, index: Optional[_Index] = None) -> TernaryLawReport:
    """Conditional (PA) over all quintuples with at least one side defined."""
    idx = index or _Index(T)
    full = exhaustive or idx.pa_count() <= budget
    it = idx.pa_quintuples() if full else idx.sample_quintuples(budget, random.Random(seed))
    p = T.product
    count = 0
    for q in it:
        count += 1
        sides = _pa_sides(p, *q)
        if None in sides or sides[0] != sides[1] or sides[1] != sides[2]:
            return TernaryLawReport(Law.PA, False, witness=(q, sides), instances=count,
                                    exhaustive=full, seed=None if full else seed)
    return TernaryLawReport(Law.PA, True, instances=count, exhaustive=full,
                            seed=None if full else seed)


def structure_ip(T: TernaryStructure) -> TernaryLawReport:
    n = T.ground.size
    count = 0
    for x, y in itertools.product(range(n), repeat=2):
        for args in ((x, x, y), (y, x, x)):
            w = T.product(*args)
            if w is None:
                continue
            count += 1
            if w != y:
                return TernaryLawReport(Law.IP, False, witness=(args, w, y), instances=count)
    return TernaryLawReport(Law.IP, True, instances=count)


def structure_chasles(T: TernaryStructure) -> list[TernaryLawReport]:
    """Left ``(xy(yuv)) = (xuv)`` and right ``((xyz)zv) = (xyv)``; LHS defined forces RHS."""
    idx = _Index(T)
    p = T.product
    out = []
    bad = None
    count = 0
    for (y, u, v) in idx.triples:
        w = p(y, u, v)
        for x, y2 in idx.by_last.get(w, ()):
            if y2 != y:
                continue
            count += 1
            lhs, rhs = p(x, y, w), p(x, u, v)
            if lhs != rhs:
                bad = ((x, y, u, v), (lhs, rhs))
                break
        if bad:
            break
    out.append(TernaryLawReport(Law.CHASLES_LEFT, bad is None, witness=bad, instances=count))
    bad = None
    count = 0
    for (x, y, z) in idx.triples:
        w = p(x, y, z)
        for z2, v in idx.by_first.get(w, ()):
            if z2 != z:
                continue
            count += 1
            lhs, rhs = p(w, z, v), p(x, y, v)
            if lhs != rhs:
                bad = ((x, y, z, v), (lhs, rhs))
                break
        if bad:
            break
    out.append(TernaryLawReport(Law.CHASLES_RIGHT, bad is None, witness=bad, instances=count))
    return out


def structure_condition_c(T: TernaryStructure) -> TernaryLawReport:
    """(C) on the flavor's domain: outputs stay in the right classes."""
    count = 0
    for (x, y, z), w in sorted(T.table.items()):
        count += 1
        need_a = T.a.related(x, y)          # left translation part
        need_b = T.b.related(y, z)          # right translation part
        if T.flavor is Flavor.TORSOR:
            need_a = need_b = False
        if need_a and not T.a.related(w, z):
            return TernaryLawReport(Law.CONDITION_C, False,
                                    witness=((x, y, z), w, "not a-related to z"), instances=count)
        if need_b and not T.b.related(w, x):
            return TernaryLawReport(Law.CONDITION_C, False,
                                    witness=((x, y, z), w, "not b-related to x"), instances=count)
    return TernaryLawReport(Law.CONDITION_C, True, instances=count)


def structure_endomorphism(T: TernaryStructure, budget: int = DEFAULT_BUDGET,
                           seed: int = 0) -> TernaryLawReport:
    """``(xy(uvw)) = ((xyu)(xyv)(xyw))`` wherever both sides are defined."""
    idx = _Index(T)
    p = T.product
    pairs = [(t, xy) for t in idx.triples for xy in idx.by_last.get(p(*t), ())]
    full = len(pairs) <= budget
    if not full:
        pairs = random.Random(seed).sample(pairs, budget)
    for (u, v, w), (x, y) in pairs:
        lhs = p(x, y, p(u, v, w))
        parts = (p(x, y, u), p(x, y, v), p(x, y, w))
        rhs = None if None in parts else p(*parts)
        if rhs is not None and lhs != rhs:
            return TernaryLawReport(Law.ENDOMORPHISM, False,
                                    witness=((x, y, u, v, w), (lhs, rhs)),
                                    instances=len(pairs), exhaustive=full)
    return TernaryLawReport(Law.ENDOMORPHISM, True, instances=len(pairs), exhaustive=full,
                            seed=None if full else seed)


def commute_report(a: Equiv, b: Equiv) -> TernaryLawReport:
    w = commutation_witness(a, b)
    return TernaryLawReport(Law.COMMUTE, w is None, witness=w)


def left_translation(T: TernaryStructure, x: int, y: int) -> tuple[int, ...]:
    """``lambda_xy: z -> [xy;z]``; needs ``x ~a y`` and a left-prev domain."""
    out = [T.product(x, y, z) for z in range(T.ground.size)]
    if None in out:
        raise StructureError(f"left translation ({x},{y}) is not everywhere defined", witness=(x, y))
    return tuple(out)  # type: ignore[arg-type]


def right_translation(T: TernaryStructure, y: int, z: int) -> tuple[int, ...]:
    """``rho: x -> [x;yz]``; needs ``y ~b z`` and a right-prev domain."""
    out = [T.product(x, y, z) for x in range(T.ground.size)]
    if None in out:
        raise StructureError(f"right translation ({y},{z}) is not everywhere defined", witness=(y, z))
    return tuple(out)  # type: ignore[arg-type]


def translation_group(T: TernaryStructure) -> list[tuple[int, ...]]:
    """The left translations ``lambda^a_xy``, one per distinct map, sorted."""
    maps = {left_translation(T, x, y) for m in T.a.masks
            for x in iter_bits(m) for y in iter_bits(m)}
    return sorted(maps)


def _aut_kind(g: Sequence[int], e: Equiv) -> tuple[bool, bool]:
    """(g permutes the classes of e, g fixes each class of e)."""
    maps_class = True
    fixes = True
    for m in e.masks:
        img = sum(1 << g[t] for t in iter_bits(m))
        if img not in e.masks:
            maps_class = False
        if img != m:
            fixes = False
    return maps_class, fixes and maps_class


def prev_translation_report(T: TernaryStructure) -> TernaryLawReport:
    """Left translations fix a-classes and permute b-classes; right ones symmetrically."""
    count = 0
    for m in T.a.masks:
        for x, y in itertools.product(iter_bits(m), repeat=2):
            lam = left_translation(T, x, y)
            count += 1
            perm_b, _ = _aut_kind(lam, T.b)
            _, fix_a = _aut_kind(lam, T.a)
            if not (perm_b and fix_a):
                return TernaryLawReport(Law.COMPATIBILITY, False, witness=("lambda", x, y, lam),
                                        instances=count)
    for m in T.b.masks:
        for y, z in itertools.product(iter_bits(m), repeat=2):
            rho = right_translation(T, y, z)
            count += 1
            perm_a, _ = _aut_kind(rho, T.a)
            _, fix_b = _aut_kind(rho, T.b)
            if not (perm_a and fix_b):
                return TernaryLawReport(Law.COMPATIBILITY, False, witness=("rho", y, z, rho),
                                        instances=count)
    return TernaryLawReport(Law.COMPATIBILITY, True, instances=count,
                            note="translations preserve own classes, permute the other's")


def prev_commute_report(T: TernaryStructure) -> TernaryLawReport:
    """``lambda^a_xy o rho^b_wz == rho^b_wz o lambda^a_xy``."""
    lams = {(x, y): left_translation(T, x, y) for m in T.a.masks
            for x in iter_bits(m) for y in iter_bits(m)}
    rhos = {(w, z): right_translation(T, w, z) for m in T.b.masks
            for w in iter_bits(m) for z in iter_bits(m)}
    count = 0
    for (kx, lam), (kr, rho) in itertools.product(sorted(lams.items()), sorted(rhos.items())):
        count += 1
        for v in range(T.ground.size):
            if lam[rho[v]] != rho[lam[v]]:
                return TernaryLawReport(Law.PREV_COMMUTE, False, witness=(kx, kr, v),
                                        instances=count)
    return TernaryLawReport(Law.PREV_COMMUTE, True, instances=count)


def _tag(reports: list[TernaryLawReport], note: str) -> list[TernaryLawReport]:
    for r in reports:
        r.note = note if not r.note else f"{note}; {r.note}"
    return reports


def _core_reports(T: TernaryStructure, budget: int, seed: int) -> list[TernaryLawReport]:
    return [structure_pa(T, budget, seed), structure_ip(T), *structure_chasles(T),
            structure_condition_c(T), structure_endomorphism(T, budget, seed)]


def validate(T: TernaryStructure, budget: int = DEFAULT_BUDGET, seed: int = 0) -> list[TernaryLawReport]:
    """One report per applicable law (shape problems raise before any law is checked)."""
    T._check_shape()
    reports = [commute_report(T.a, T.b)]
    if T.flavor is Flavor.COMMUTING_PREV_PAIR:
        reports += _tag(_core_reports(T.left_part(), budget, seed), "left prev")
        reports += _tag(_core_reports(T.right_part(), budget, seed), "right prev")
        reports += _tag(_core_reports(T.pregroupoid_part(), budget, seed), "pregroupoid part")
        reports.append(prev_translation_report(T))
        reports.append(prev_commute_report(T))
    else:
        reports += _core_reports(T, budget, seed)
    return reports


def claimed_laws(T: TernaryStructure) -> set[Law]:
    laws = set(Law)
    if T.flavor is Flavor.SEMI_PREGROUPOID:
        laws -= {Law.IP, Law.CHASLES_LEFT, Law.CHASLES_RIGHT, Law.ENDOMORPHISM}
    return laws


def failures(T: TernaryStructure, reports: list[TernaryLawReport]) -> list[TernaryLawReport]:
    claimed = claimed_laws(T)
    return [r for r in reports if not r.holds and r.law in claimed]


def require_valid(T: TernaryStructure, budget: int = DEFAULT_BUDGET, seed: int = 0) -> TernaryStructure:
    reports = validate(T, budget, seed)
    bad = failures(T, reports)
    if bad:
        first = bad[0]
        raise StructureError(f"{T.flavor} fails {first.law}: witness {first.witness}",
                             witness=first.witness, reports=reports)
    return T


# --------------------------------------------------------------------------
# torsors


class Torsor:
    """A total ternary table on ``0..size-1`` satisfying (PA) and (IP)."""

    def __init__(self, table, labels: Optional[Sequence[str]] = None, check: bool = True,
                 budget: int = DEFAULT_BUDGET, seed: int = 0):
        arr = np.asarray(table, dtype=np.int64)
        if arr.size == 0:
            arr = np.zeros((0, 0, 0), dtype=np.int64)
        n = arr.shape[0]
        if arr.shape != (n, n, n):
            raise StructureError(f"torsor table must be n x n x n, got {arr.shape}")
        if n and (arr.min() < 0 or arr.max() >= n):
            raise StructureError("torsor table value out of range")
        self.table = arr
        self.size = n
        self.ground = GroundSet(n, labels)
        self.reports: list[TernaryLawReport] = []
        if check:
            self.reports = self.check(budget, seed)
            bad = [r for r in self.reports if not r.holds]
            if bad:
                raise StructureError(f"not a torsor: {bad[0].law} fails at {bad[0].witness}",
                                     witness=bad[0].witness, reports=self.reports)

    def check(self, budget: int = DEFAULT_BUDGET, seed: int = 0) -> list[TernaryLawReport]:
        if self.size == 0:
            return [TernaryLawReport(Law.PA, True), TernaryLawReport(Law.IP, True)]
        return [table_para_associativity(self.table, budget, seed), table_idempotent(self.table)]

    def __len__(self) -> int:
        return self.size

    def product(self, x: int, y: int, z: int) -> int:
        return int(self.table[x, y, z])

    def group_at(self, y: int) -> FiniteGroup:
        """``x*z = (xyz)``, neutral element ``y``."""
        cay = self.table[:, y, :].tolist()
        return FiniteGroup(cay, labels=self.ground.labels, name=f"torsor at {y}")

    @classmethod
    def from_group(cls, G: FiniteGroup) -> "Torsor":
        n = G.order
        t = [[[G.torsor(x, y, z) for z in range(n)] for y in range(n)] for x in range(n)]
        return cls(t, labels=G.ground.labels, check=False)

    def to_structure(self) -> TernaryStructure:
        g = GroundSet(self.size, self.ground.labels)
        full = Equiv.all(g)
        return TernaryStructure.tabulate(g, full, Equiv.all(g), Flavor.TORSOR, self.product)


# --------------------------------------------------------------------------
# constructors


def pair_pregroupoid(E: GroundSet | int, F: GroundSet | int) -> TernaryStructure:
    """``M = E x F`` with projection kernels; ``(e, f)`` is element ``e*|F| + f``."""
    ne = E if isinstance(E, int) else E.size
    nf = F if isinstance(F, int) else F.size
    g = GroundSet(ne * nf, [f"({e},{f})" for e in range(ne) for f in range(nf)])
    a = Equiv.from_labels(g, [w // nf for w in range(g.size)])
    b = Equiv.from_labels(g, [w % nf for w in range(g.size)])
    T = TernaryStructure.tabulate(g, a, b, Flavor.PREGROUPOID,
                                  lambda x, y, z: (z // nf) * nf + x % nf)
    return require_valid(T)


def homogeneous(G: FiniteGroup, A, B) -> TernaryStructure:
    """Right cosets of ``A``, left cosets of ``B``, product ``x y^-1 z``."""
    a = right_cosets(G, A)
    b = left_cosets(G, B)
    T = TernaryStructure.tabulate(G.ground, a, b, Flavor.COMMUTING_PREV_PAIR, G.torsor)
    return require_valid(T)


def torsor_structure(t: Torsor) -> TernaryStructure:
    return require_valid(t.to_structure())


def torsor_bundle(a: Equiv, fibers: Sequence[Torsor]) -> TernaryStructure:
    """Pregroupoid with ``a = b``; fibre ``i`` acts on the ``i``-th class in ascending order."""
    if len(fibers) != len(a.masks):
        raise StructureError("need one torsor per class")
    pos: dict[int, tuple[int, int]] = {}
    elems = []
    for i, (blk, t) in enumerate(zip(a.blocks, fibers)):
        if len(t) != len(blk):
            raise StructureError(f"fibre {i} has {len(t)} elements, class has {len(blk)}",
                                 witness=(i,))
        elems.append(blk.elements())
        for k, e in enumerate(blk.elements()):
            pos[e] = (i, k)

    def prod(x, y, z):
        i = pos[x][0]
        return elems[i][fibers[i].product(pos[x][1], pos[y][1], pos[z][1])]

    T = TernaryStructure.tabulate(a.ground, a, a, Flavor.PREGROUPOID, prod)
    return require_valid(T)


def _action_lookup(e: Equiv, perms: Sequence[Sequence[int]]) -> dict[tuple[int, int], tuple[int, ...]]:
    """``(src, dst) -> g`` with ``g(src) == dst``, for a free transitive action on each class."""
    group = close_generators(perms, degree=e.ground.size) if perms else None
    elems = list(group.perms) if group is not None else [tuple(range(e.ground.size))]
    if not e.is_total:
        raise ActionError("a principal action needs a total equivalence")
    out: dict[tuple[int, int], tuple[int, ...]] = {}
    for m in e.masks:
        for src in iter_bits(m):
            hits: dict[int, tuple[int, ...]] = {}
            for g in elems:
                dst = g[src]
                if not (m >> dst) & 1:
                    raise ActionError(f"group element moves {src} out of its class", witness=(src, g))
                if dst in hits:
                    raise ActionError(f"action not free at {src}", witness=(src, hits[dst], g))
                hits[dst] = g
            missing = [t for t in iter_bits(m) if t not in hits]
            if missing:
                raise ActionError(f"action not transitive on the class of {src}",
                                  witness=(src, missing[0]))
            for dst, g in hits.items():
                out[src, dst] = g
    return out


def left_prev(a: Equiv, generators: Sequence[Sequence[int]]) -> TernaryStructure:
    """``[xy;z] = g(z)`` for the unique group element with ``g(y) = x``."""
    look = _action_lookup(a, generators)
    g = a.ground
    T = TernaryStructure.tabulate(g, a, Equiv.all(g), Flavor.LEFT_PREV,
                                  lambda x, y, z: look[y, x][z])
    return require_valid(T)


def right_prev(b: Equiv, generators: Sequence[Sequence[int]]) -> TernaryStructure:
    """``[x;yz] = g(x)`` for the unique group element with ``g(y) = z``."""
    look = _action_lookup(b, generators)
    g = b.ground
    T = TernaryStructure.tabulate(g, Equiv.all(g), b, Flavor.RIGHT_PREV,
                                  lambda x, y, z: look[y, z][x])
    return require_valid(T)


def commuting_pair(left: TernaryStructure, right: TernaryStructure) -> TernaryStructure:
    """Glue a left prev and a right prev on the same ground; they must agree where both apply."""
    if left.flavor is not Flavor.LEFT_PREV or right.flavor is not Flavor.RIGHT_PREV:
        raise StructureError("need a left prev and a right prev")
    if left.ground is not right.ground:
        raise StructureError("prevs live on different grounds")
    table = dict(left.table)
    for key, w in right.table.items():
        if key in table and table[key] != w:
            raise StructureError(f"prevs disagree at {key}: {table[key]} vs {w}",
                                 witness=(key, table[key], w),
                                 reports=[TernaryLawReport(Law.COMPATIBILITY, False,
                                                           witness=(key, table[key], w))])
        table[key] = w
    T = TernaryStructure(left.ground, left.a, right.b, Flavor.COMMUTING_PREV_PAIR, table)
    return require_valid(T)


def relation_semi_pregroupoid(n_src: int, n_tgt: int) -> TernaryStructure:
    """All relations ``R(tgt, src)``; ``a`` = same domain, ``b`` = same image, ``[RST] = R S^-1 T``.

    Element ``k`` is the relation whose row ``t`` is bits ``t*n_src .. (t+1)*n_src - 1`` of ``k``.
    """
    from .relations import BinRel, domain, image, inverse

    src, tgt = GroundSet(n_src), GroundSet(n_tgt)
    full = (1 << n_src) - 1
    rels = [BinRel(src, tgt, [(k >> (t * n_src)) & full for t in range(n_tgt)])
            for k in range(1 << (n_src * n_tgt))]
    code = {r.rows: k for k, r in enumerate(rels)}
    g = GroundSet(len(rels))
    a = Equiv.from_labels(g, [domain(r).bits for r in rels])
    b = Equiv.from_labels(g, [image(r).bits for r in rels])

    def prod(x, y, z):
        r = compose(rels[x], compose(inverse(rels[y]), rels[z]))
        return code[r.rows]

    T = TernaryStructure.tabulate(g, a, b, Flavor.SEMI_PREGROUPOID, prod)
    return require_valid(T)


def disjoint_union(S: TernaryStructure, T: TernaryStructure) -> TernaryStructure:
    if S.flavor != T.flavor:
        raise StructureError("flavors differ")
    n = S.ground.size
    g = GroundSet(n + T.ground.size)

    def shift(e: Equiv, k: int) -> list[list[int]]:
        return [[t + k for t in blk] for blk in e.blocks]

    a = Equiv(g, shift(S.a, 0) + shift(T.a, n))
    b = Equiv(g, shift(S.b, 0) + shift(T.b, n))
    table = dict(S.table)
    table.update({(x + n, y + n, z + n): w + n for (x, y, z), w in T.table.items()})
    return require_valid(TernaryStructure(g, a, b, S.flavor, table))


# --------------------------------------------------------------------------
# components, vertex torsors, groupoids


def connected_components(T: TernaryStructure) -> Equiv:
    """Classes of ``c = ab``."""
    return from_relation(compose(T.a.as_relation(), T.b.as_relation()))


def is_transitive(T: TernaryStructure) -> bool:
    return len(connected_components(T).masks) <= 1


def vertex_torsor(T: TernaryStructure, alpha: int, beta: int) -> tuple[Torsor, tuple[int, ...]]:
    """Torsor on ``class_alpha(a) & class_beta(b)``; also returns the carrier's elements."""
    carrier = tuple(iter_bits(T.a.masks[alpha] & T.b.masks[beta]))
    k = len(carrier)
    table = [[[carrier.index(T.product(carrier[i], carrier[j], carrier[l]))
               for l in range(k)] for j in range(k)] for i in range(k)]
    return Torsor(table, labels=[T.ground.label(e) for e in carrier]), carrier


@dataclass
class Groupoid:
    """Units ``s``, source/target maps into ``s``, and a partial composition.

    ``comp[g, h]`` is ``g o h``, defined exactly when ``src[g] == tgt[h]``.
    """

    ground: GroundSet
    units: Subset
    src: tuple[int, ...]
    tgt: tuple[int, ...]
    comp: dict[tuple[int, int], int]
    inv: tuple[int, ...]

    def compose(self, g: int, h: int) -> Optional[int]:
        return self.comp.get((g, h))

    def validate(self) -> list[TernaryLawReport]:
        n = self.ground.size
        law = Law.GROUPOID

        def fail(what, wit):
            return [TernaryLawReport(law, False, witness=(what, wit))]

        for u in self.units:
            if self.src[u] != u or self.tgt[u] != u:
                return fail("unit endpoints", u)
        for g in range(n):
            if self.src[g] not in self.units or self.tgt[g] not in self.units:
                return fail("endpoint not a unit", g)
        for g, h in itertools.product(range(n), repeat=2):
            defined = (g, h) in self.comp
            if defined != (self.src[g] == self.tgt[h]):
                return fail("domain of composition", (g, h))
            if defined:
                gh = self.comp[g, h]
                if self.src[gh] != self.src[h] or self.tgt[gh] != self.tgt[g]:
                    return fail("endpoints of composite", (g, h))
        for (g, h), gh in self.comp.items():
            for k in range(n):
                if self.src[h] == self.tgt[k]:
                    if self.comp[gh, k] != self.comp[g, self.comp[h, k]]:
                        return fail("associativity", (g, h, k))
        for g in range(n):
            if self.comp.get((g, self.src[g])) != g or self.comp.get((self.tgt[g], g)) != g:
                return fail("unit law", g)
            gi = self.inv[g]
            if self.comp.get((g, gi)) != self.tgt[g] or self.comp.get((gi, g)) != self.src[g]:
                return fail("inverse law", g)
        return [TernaryLawReport(law, True, instances=n * n)]


def _bisection_or_error(T: TernaryStructure, s: Subset) -> None:
    for name, e in (("a", T.a), ("b", T.b)):
        for i, m in enumerate(e.masks):
            hit = bin(m & s.bits).count("1")
            if hit != 1:
                kind = "misses" if hit == 0 else "meets twice"
                raise NotBisectionError(f"s {kind} {name}-class {i}", witness=(name, i, hit))
    if s.bits & ~T.a.dom.bits:
        raise NotBisectionError("s leaves the domain", witness=tuple(iter_bits(s.bits & ~T.a.dom.bits)))


def to_groupoid(T: TernaryStructure, s: Subset) -> Groupoid:
    """Units ``s``; ``src(g) = [g]_a & s``, ``tgt(g) = [g]_b & s``, ``g o h = [g src(g) h]``."""
    P = T.pregroupoid_part() if T.flavor is Flavor.COMMUTING_PREV_PAIR else T
    _bisection_or_error(P, s)
    n = P.ground.size
    src = tuple((P.a.class_mask(g) & s.bits).bit_length() - 1 for g in range(n))
    tgt = tuple((P.b.class_mask(g) & s.bits).bit_length() - 1 for g in range(n))
    comp = {}
    for g, h in itertools.product(range(n), repeat=2):
        if src[g] == tgt[h]:
            w = P.product(g, src[g], h)
            if w is None:
                raise StructureError(f"composite {(g, h)} undefined", witness=(g, h))
            comp[g, h] = w
    inv = tuple(P.product(src[g], g, tgt[g]) for g in range(n))
    Gd = Groupoid(P.ground, s, src, tgt, comp, inv)  # type: ignore[arg-type]
    bad = [r for r in Gd.validate() if not r.holds]
    if bad:
        raise StructureError(f"groupoid law fails: {bad[0].witness}", witness=bad[0].witness)
    return Gd


def from_groupoid(Gd: Groupoid) -> tuple[TernaryStructure, Subset]:
    """``a`` = fibres of ``src``, ``b`` = fibres of ``tgt``, ``[xyz] = x o y^-1 o z``."""
    g = Gd.ground
    a = Equiv.from_labels(g, list(Gd.src))
    b = Equiv.from_labels(g, list(Gd.tgt))

    def prod(x, y, z):
        return Gd.comp[x, Gd.comp[Gd.inv[y], z]]

    T = TernaryStructure.tabulate(g, a, b, Flavor.PREGROUPOID, prod)
    return require_valid(T), Gd.units


def bisections(T: TernaryStructure) -> list[Subset]:
    return list(enumerate_bisections(T.a, T.b))


# --------------------------------------------------------------------------
# isomorphism


def find_structure_isomorphism(S: TernaryStructure, T: TernaryStructure) -> Optional[tuple[int, ...]]:
    """A bijection carrying ``a``, ``b`` and the table of ``S`` onto those of ``T``."""
    n = S.ground.size
    if (n != T.ground.size or S.flavor != T.flavor or len(S.table) != len(T.table)
            or sorted(map(len, S.a.blocks)) != sorted(map(len, T.a.blocks))
            or sorted(map(len, S.b.blocks)) != sorted(map(len, T.b.blocks))):
        return None

    def sig(X: TernaryStructure, e: int) -> tuple:
        return (len(X.a.cls(e)), len(X.b.cls(e)))

    phi = [-1] * n
    used = [False] * n
    order = list(range(n))

    def consistent(k: int) -> bool:
        e = order[k]
        fe = phi[e]
        for p in order[:k + 1]:
            fp = phi[p]
            if S.a.related(e, p) != T.a.related(fe, fp) or S.b.related(e, p) != T.b.related(fe, fp):
                return False
        mapped = order[:k + 1]
        for x in mapped:
            for y in mapped:
                for z in mapped:
                    if e not in (x, y, z):
                        continue
                    w = S.product(x, y, z)
                    v = T.product(phi[x], phi[y], phi[z])
                    if (w is None) != (v is None):
                        return False
                    if w is not None and phi[w] != -1 and phi[w] != v:
                        return False
        return True

    def rec(k: int) -> bool:
        if k == n:
            return all(T.product(phi[x], phi[y], phi[z]) == phi[w]
                       for (x, y, z), w in S.table.items())
        e = order[k]
        for c in range(n):
            if used[c] or sig(S, e) != sig(T, c):
                continue
            phi[e], used[c] = c, True
            if consistent(k) and rec(k + 1):
                return True
            phi[e], used[c] = -1, False
        return False

    return tuple(phi) if rec(0) else None
