"""Finite groups as Cayley tables, with subgroup and coset helpers.

Groups are written multiplicatively; ``mul(g, h)`` is ``g*h``. Permutation
groups compose right-to-left: ``(s*t)(i) == s[t[i]]``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .equivalence import Equiv
from .errors import GroupAxiomError, NotSubgroupError
from .relations import GroundSet, Subset

Perm = tuple[int, ...]


class FiniteGroup:
    """Group on ``0..order-1`` with a validated Cayley table."""

    def __init__(self, cayley: Sequence[Sequence[int]], labels: Optional[Sequence[str]] = None,
                 perms: Optional[Sequence[Perm]] = None, name: str = ""):
        n = len(cayley)
        table = tuple(tuple(int(v) for v in row) for row in cayley)
        if any(len(row) != n for row in table):
            raise GroupAxiomError("Cayley table must be square")
        if any(not 0 <= v < n for row in table for v in row):
            raise GroupAxiomError("Cayley table entry out of range")
        self.cayley = table
        self.order = n
        self.ground = GroundSet(n, labels)
        self.perms = tuple(perms) if perms is not None else None
        self.name = name
        self.identity = self._find_identity()
        self.inverses = self._find_inverses()
        self._check_associative()

    def _find_identity(self) -> int:
        for e in range(self.order):
            if all(self.cayley[e][g] == g and self.cayley[g][e] == g for g in range(self.order)):
                return e
        raise GroupAxiomError("no identity element", witness=None)

    def _find_inverses(self) -> tuple[int, ...]:
        inv = []
        for g in range(self.order):
            row = self.cayley[g]
            cands = [h for h in range(self.order) if row[h] == self.identity
                     and self.cayley[h][g] == self.identity]
            if not cands:
                raise GroupAxiomError(f"element {g} has no inverse", witness=(g,))
            inv.append(cands[0])
        return tuple(inv)

    def _check_associative(self) -> None:
        t = self.cayley
        for x, y, z in itertools.product(range(self.order), repeat=3):
            if t[t[x][y]][z] != t[x][t[y][z]]:
                raise GroupAxiomError(f"associativity fails at {(x, y, z)}", witness=(x, y, z))

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name or 'order ' + str(self.order)})"

    def __len__(self) -> int:
        return self.order

    def mul(self, g: int, h: int) -> int:
        return self.cayley[g][h]

    def inv(self, g: int) -> int:
        return self.inverses[g]

    def torsor(self, x: int, y: int, z: int) -> int:
        """``x y^-1 z``, written ``x - y + z`` additively."""
        return self.cayley[self.cayley[x][self.inverses[y]]][z]

    def element_order(self, g: int) -> int:
        k, h = 1, g
        while h != self.identity:
            h = self.cayley[h][g]
            k += 1
        return k

    def generated(self, gens: Iterable[int]) -> int:
        """Bitmask of the subgroup generated by ``gens``."""
        gens = list(gens)
        seen = 1 << self.identity
        frontier = [self.identity]
        while frontier:
            nxt = []
            for g in frontier:
                for s in gens:
                    h = self.cayley[g][s]
                    if not (seen >> h) & 1:
                        seen |= 1 << h
                        nxt.append(h)
            frontier = nxt
        return seen

    def generators(self) -> list[int]:
        """A small generating set, chosen greedily by largest element order."""
        by_order = sorted(range(self.order), key=lambda g: (-self.element_order(g), g))
        gens: list[int] = []
        span = 1 << self.identity
        for g in by_order:
            if not (span >> g) & 1:
                gens.append(g)
                span = self.generated(gens)
            if span == self.ground.full_mask:
                break
        return gens

    def is_abelian(self) -> bool:
        t = self.cayley
        return all(t[g][h] == t[h][g] for g in range(self.order) for h in range(g))

    def to_json(self) -> dict:
        return {"cayley": [list(r) for r in self.cayley]}


def from_cayley(table: Sequence[Sequence[int]], labels: Optional[Sequence[str]] = None) -> FiniteGroup:
    return FiniteGroup(table, labels=labels)


def cyclic(n: int) -> FiniteGroup:
    if n < 1:
        raise ValueError("cyclic group needs n >= 1")
    return FiniteGroup([[(g + h) % n for h in range(n)] for g in range(n)],
                       labels=[str(g) for g in range(n)], name=f"Z{n}")


def direct_product(G: FiniteGroup, H: FiniteGroup) -> FiniteGroup:
    """``G x H``; the pair ``(g, h)`` is element ``g*|H| + h``."""
    m = H.order
    table = [[G.mul(i // m, j // m) * m + H.mul(i % m, j % m) for j in range(G.order * m)]
             for i in range(G.order * m)]
    labels = [f"({G.ground.label(i // m)},{H.ground.label(i % m)})" for i in range(G.order * m)]
    return FiniteGroup(table, labels=labels, name=f"{G.name}x{H.name}")


def _perm_mul(s: Perm, t: Perm) -> Perm:
    return tuple(s[i] for i in t)


def _perm_group(elements: list[Perm], name: str) -> FiniteGroup:
    index = {p: i for i, p in enumerate(elements)}
    table = [[index[_perm_mul(s, t)] for t in elements] for s in elements]
    labels = ["".join(map(str, p)) if len(p) <= 10 else str(p) for p in elements]
    return FiniteGroup(table, labels=labels, perms=elements, name=name)


def symmetric(n: int) -> FiniteGroup:
    """Symmetric group, elements in lexicographic one-line order."""
    if n < 1:
        raise ValueError("symmetric group needs n >= 1")
    return _perm_group(list(itertools.permutations(range(n))), f"S{n}")


def close_generators(perms: Sequence[Sequence[int]], degree: Optional[int] = None) -> FiniteGroup:
    """Close permutations under composition; elements in lexicographic one-line order."""
    gens = [tuple(p) for p in perms]
    if degree is None:
        degree = len(gens[0]) if gens else 0
    for p in gens:
        if len(p) != degree or sorted(p) != list(range(degree)):
            raise GroupAxiomError(f"not a permutation of degree {degree}: {p}", witness=p)
    ident = tuple(range(degree))
    elements = [ident]
    seen = {ident}
    i = 0
    while i < len(elements):
        g = elements[i]
        for s in gens:
            h = _perm_mul(g, s)
            if h not in seen:
                seen.add(h)
                elements.append(h)
        i += 1
    return _perm_group(sorted(elements), f"<{len(gens)} gens>")


@dataclass(frozen=True)
class SubgroupWitness:
    group: FiniteGroup
    members: Subset
    identity: int
    inverse_of: tuple[tuple[int, int], ...]


def subgroup_violation(G: FiniteGroup, s: Subset) -> Optional[tuple]:
    """First failure of the subgroup test, or None."""
    if s.ground is not G.ground:
        return ("ground",)
    if G.identity not in s:
        return ("identity", G.identity)
    elems = s.elements()
    for g in elems:
        if G.inv(g) not in s:
            return ("inverse", g)
        for h in elems:
            if G.mul(g, h) not in s:
                return ("product", g, h)
    return None


def is_subgroup(G: FiniteGroup, s: Subset) -> bool:
    return subgroup_violation(G, s) is None


def subgroup(G: FiniteGroup, members: Iterable[int] | Subset) -> SubgroupWitness:
    s = members if isinstance(members, Subset) else G.ground.subset(members)
    bad = subgroup_violation(G, s)
    if bad is not None:
        raise NotSubgroupError(f"not a subgroup: {bad}", witness=bad)
    return SubgroupWitness(G, s, G.identity, tuple((g, G.inv(g)) for g in s))


def _as_subgroup(G: FiniteGroup, A) -> Subset:
    return A.members if isinstance(A, SubgroupWitness) else subgroup(G, A).members


def right_cosets(G: FiniteGroup, A) -> Equiv:
    """Classes ``A*x``."""
    a = _as_subgroup(G, A).elements()
    return Equiv.from_labels(G.ground, [min(G.mul(h, x) for h in a) for x in range(G.order)])


def left_cosets(G: FiniteGroup, B) -> Equiv:
    """Classes ``x*B``."""
    b = _as_subgroup(G, B).elements()
    return Equiv.from_labels(G.ground, [min(G.mul(x, h) for h in b) for x in range(G.order)])


def double_cosets(G: FiniteGroup, A, B) -> Equiv:
    """Classes ``A*x*B``."""
    a = _as_subgroup(G, A).elements()
    b = _as_subgroup(G, B).elements()
    return Equiv.from_labels(
        G.ground, [min(G.mul(G.mul(h, x), k) for h in a for k in b) for x in range(G.order)])


def find_isomorphism(G: FiniteGroup, H: FiniteGroup) -> Optional[tuple[int, ...]]:
    """A group isomorphism ``G -> H`` as an image tuple, by backtracking on generators."""
    if G.order != H.order:
        return None
    if G.order == 0:
        return ()
    gens = G.generators()
    h_by_order: dict[int, list[int]] = {}
    for h in range(H.order):
        h_by_order.setdefault(H.element_order(h), []).append(h)
    cands = [h_by_order.get(G.element_order(g), []) for g in gens]

    def extend(images: Sequence[int]) -> Optional[list[int]]:
        phi = [-1] * G.order
        phi[G.identity] = H.identity
        frontier = [G.identity]
        while frontier:
            nxt = []
            for g in frontier:
                for s, hs in zip(gens, images):
                    gs, target = G.mul(g, s), H.mul(phi[g], hs)
                    if phi[gs] == -1:
                        phi[gs] = target
                        nxt.append(gs)
                    elif phi[gs] != target:
                        return None
            frontier = nxt
        if len(set(phi)) != G.order:
            return None
        return phi

    for images in itertools.product(*cands):
        phi = extend(images)
        if phi is not None and all(
                phi[G.mul(x, y)] == H.mul(phi[x], phi[y])
                for x in range(G.order) for y in range(G.order)):
            return tuple(phi)
    return None
