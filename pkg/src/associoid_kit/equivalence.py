"""Partial and total equivalence relations, transversality and sections."""

from __future__ import annotations

import itertools
from typing import Iterable, Iterator, Optional, Sequence

from .errors import NotCommutingError, NotEquivalenceError, NotTransversalError
from .relations import (
    BinRel,
    GroundSet,
    Subset,
    all_relation,
    compose,
    diagonal,
    identity,
    iter_bits,
)


class Equiv:
    """An equivalence relation *in* a ground set, stored as its blocks.

    Blocks are disjoint and nonempty; their union is the domain. The relation
    is total ("on" the ground set) when the domain is everything.
    """

    __slots__ = ("ground", "blocks", "masks", "block_of", "dom")

    def __init__(self, ground: GroundSet, blocks: Iterable[Iterable[int] | Subset]):
        masks = []
        seen = 0
        for blk in blocks:
            m = blk.bits if isinstance(blk, Subset) else ground.subset(blk).bits
            if m == 0:
                raise NotEquivalenceError("blocks must be nonempty")
            if m & seen:
                raise NotEquivalenceError("blocks must be pairwise disjoint",
                                          witness=tuple(iter_bits(m & seen)))
            seen |= m
            masks.append(m)
        masks.sort(key=lambda m: (m & -m).bit_length())
        self.ground = ground
        self.masks: tuple[int, ...] = tuple(masks)
        self.blocks: tuple[Subset, ...] = tuple(Subset(ground, m) for m in masks)
        block_of = [-1] * ground.size
        for i, m in enumerate(masks):
            for e in iter_bits(m):
                block_of[e] = i
        self.block_of: tuple[int, ...] = tuple(block_of)
        self.dom = Subset(ground, seen)

    @classmethod
    def identity(cls, ground: GroundSet) -> "Equiv":
        return cls(ground, ([e] for e in range(ground.size)))

    @classmethod
    def all(cls, ground: GroundSet) -> "Equiv":
        return cls(ground, [range(ground.size)] if ground.size else [])

    @classmethod
    def from_labels(cls, ground: GroundSet, labels: Sequence) -> "Equiv":
        """Blocks are the fibres of ``labels``; ``None`` marks elements outside the domain."""
        fibres: dict = {}
        for e, lab in enumerate(labels):
            if lab is not None:
                fibres.setdefault(lab, []).append(e)
        return cls(ground, fibres.values())

    def __eq__(self, other) -> bool:
        return isinstance(other, Equiv) and other.ground is self.ground and other.masks == self.masks

    def __hash__(self) -> int:
        return hash((id(self.ground), self.masks))

    def __repr__(self) -> str:
        return "Equiv(" + ",".join(repr(b) for b in self.blocks) + ")"

    def __len__(self) -> int:
        return len(self.masks)

    @property
    def is_total(self) -> bool:
        return self.dom.bits == self.ground.full_mask

    def related(self, x: int, y: int) -> bool:
        i = self.block_of[x]
        return i >= 0 and i == self.block_of[y]

    def class_mask(self, e: int) -> int:
        i = self.block_of[e]
        return self.masks[i] if i >= 0 else 0

    def cls(self, e: int) -> Subset:
        return Subset(self.ground, self.class_mask(e))

    def saturate(self, x: Subset) -> Subset:
        """``a(x)``: the union of the classes meeting ``x``."""
        return Subset(self.ground, self.saturate_bits(x.bits))

    def saturate_bits(self, bits: int) -> int:
        return sum(m for m in self.masks if m & bits)

    def as_relation(self) -> BinRel:
        g = self.ground
        return BinRel(g, g, [self.class_mask(e) for e in range(g.size)])

    def to_json(self) -> dict:
        return {"ground_size": self.ground.size,
                "blocks": [list(b.elements()) for b in self.blocks]}

    @classmethod
    def from_json(cls, data: dict, ground: Optional[GroundSet] = None) -> "Equiv":
        ground = ground or GroundSet(int(data["ground_size"]))
        if ground.size != int(data["ground_size"]):
            raise ValueError("ground size mismatch")
        return cls(ground, data["blocks"])


def from_relation(r: BinRel) -> Equiv:
    """Read a symmetric, transitive endorelation as its block partition."""
    if not r.is_endo:
        raise NotEquivalenceError("equivalence relations are endorelations")
    for t, row in enumerate(r.rows):
        for s in iter_bits(row):
            if not (r.rows[s] >> t) & 1:
                raise NotEquivalenceError(f"not symmetric: ({t},{s}) without ({s},{t})",
                                          witness=(t, s))
    rr = compose(r, r)
    for t, (row2, row) in enumerate(zip(rr.rows, r.rows)):
        extra = row2 & ~row
        if extra:
            s = next(iter_bits(extra))
            raise NotEquivalenceError(f"not transitive: ({t},{s}) in r^2 but not in r",
                                      witness=(t, s))
    blocks = {row for row in r.rows if row}
    return Equiv(r.src, [Subset(r.src, m) for m in blocks])


def commutes(a: Equiv, b: Equiv) -> bool:
    return commutation_witness(a, b) is None


def commutation_witness(a: Equiv, b: Equiv) -> Optional[tuple[int, int]]:
    """A pair in ``ab`` but not in ``ba`` (or vice versa), None if they commute."""
    if a.ground is not b.ground:
        raise NotCommutingError("equivalences live on different grounds")
    ar, br = a.as_relation(), b.as_relation()
    ab, ba = compose(ar, br), compose(br, ar)
    for t, (p, q) in enumerate(zip(ab.rows, ba.rows)):
        if p != q:
            return (t, next(iter_bits(p ^ q)))
    return None


def require_commuting(a: Equiv, b: Equiv) -> None:
    w = commutation_witness(a, b)
    if w is not None:
        raise NotCommutingError(f"ab != ba: pair {w} lies in only one of ab, ba", witness=w)


def _require_total(a: Equiv) -> None:
    if not a.is_total:
        raise NotEquivalenceError("a total equivalence relation is required here")


def locally_transversal(x: Subset, a: Equiv) -> bool:
    return all(bin(m & x.bits).count("1") <= 1 for m in a.masks)


def transversal(x: Subset, a: Equiv) -> bool:
    _require_total(a)
    return all(bin(m & x.bits).count("1") == 1 for m in a.masks)


def transversal_pair(a: Equiv, b: Equiv) -> bool:
    _require_total(a)
    _require_total(b)
    g = a.ground
    ar, br = a.as_relation(), b.as_relation()
    return compose(ar, br) == all_relation(g.full(), g.full()) and (ar & br) == identity(g)


def canonical_map(a: Equiv, b: Equiv) -> tuple[tuple[int, int], ...]:
    """``w -> (class of w under a, class of w under b)`` as block indices."""
    _require_total(a)
    _require_total(b)
    return tuple((a.block_of[w], b.block_of[w]) for w in range(a.ground.size))


def inverse_canonical_map(a: Equiv, b: Equiv) -> dict[tuple[int, int], int]:
    """``(i, j) -> the unique element of block_i(a) & block_j(b)``."""
    _require_total(a)
    _require_total(b)
    out = {}
    for i, ma in enumerate(a.masks):
        for j, mb in enumerate(b.masks):
            meet = tuple(iter_bits(ma & mb))
            if len(meet) != 1:
                raise NotTransversalError(
                    f"a-class {i} and b-class {j} meet in {len(meet)} elements",
                    witness=(i, j, meet))
            out[i, j] = meet[0]
    return out


def gen_projection(a: Equiv, x: Subset) -> BinRel:
    """The relation ``I_x o a``: pairs ``(xi, eta)`` with ``xi in x`` and ``xi ~a eta``."""
    return compose(diagonal(x), a.as_relation())


def as_operator(a: Equiv, x: Subset) -> tuple[int, ...]:
    """The map sending each element to the unique element of ``x`` in its class."""
    reps = []
    for i, m in enumerate(a.masks):
        meet = m & x.bits
        if meet == 0 or meet & (meet - 1):
            raise NotTransversalError(
                f"class {i} {Subset(a.ground, m)!r} meets x in {Subset(a.ground, meet)!r}",
                witness=(i, tuple(iter_bits(meet))))
        reps.append(meet.bit_length() - 1)
    if not a.is_total:
        raise NotTransversalError("operator form needs a total equivalence",
                                  witness=tuple(iter_bits(a.ground.full_mask & ~a.dom.bits)))
    return tuple(reps[a.block_of[w]] for w in range(a.ground.size))


def induced_related(a: Equiv, x: Subset, y: Subset) -> bool:
    ar = a.as_relation()
    return compose(compose(ar, diagonal(x)), ar) == compose(compose(ar, diagonal(y)), ar)


class InducedEquivalence:
    """The equivalence on subsets induced by ``a``: same saturation."""

    def __init__(self, base: Equiv):
        self.base = base

    def key(self, x: Subset) -> int:
        return self.base.saturate_bits(x.bits)

    def related(self, x: Subset, y: Subset) -> bool:
        return self.key(x) == self.key(y)

    def on(self, ground: GroundSet, carrier: Sequence[Subset]) -> Equiv:
        """Restrict to ``carrier``, indexed by ``ground``."""
        return Equiv.from_labels(ground, [self.key(x) for x in carrier])


def enumerate_sections(a: Equiv) -> Iterator[Subset]:
    """``U_a``: one pick per class, lexicographic in the picks."""
    g = a.ground
    for picks in itertools.product(*(b.elements() for b in a.blocks)):
        yield g.subset(picks)


def enumerate_local_sections(a: Equiv) -> Iterator[Subset]:
    """``U_a^loc``: at most one pick per class (no pick sorts first)."""
    g = a.ground
    options = [(None,) + b.elements() for b in a.blocks]
    for picks in itertools.product(*options):
        yield g.subset(p for p in picks if p is not None)


def _bisection_search(a: Equiv, b: Equiv) -> Iterator[Subset]:
    g = a.ground
    blocks = [blk.elements() for blk in a.blocks]
    nb = len(b.masks)
    bof = b.block_of
    chosen: list[int] = []

    def rec(i: int, used: int) -> Iterator[Subset]:
        if i == len(blocks):
            if used == (1 << nb) - 1:
                yield g.subset(chosen)
            return
        for e in blocks[i]:
            j = bof[e]
            if j < 0 or (used >> j) & 1:
                continue
            chosen.append(e)
            yield from rec(i + 1, used | (1 << j))
            chosen.pop()

    if len(a.masks) != nb or a.dom != b.dom:
        return iter(())
    return rec(0, 0)


def enumerate_bisections(a: Equiv, b: Equiv) -> Iterator[Subset]:
    """``U_ab``: sets meeting every class of ``a`` and of ``b`` exactly once."""
    _require_total(a)
    _require_total(b)
    return _bisection_search(a, b)


def enumerate_local_bisections(a: Equiv, b: Equiv) -> Iterator[Subset]:
    """``U_ab^loc``: sets meeting every class of ``a`` and of ``b`` at most once.

    Elements outside both domains are unconstrained. Output is sorted by
    element tuple, so the empty set comes first.
    """
    g = a.ground
    aof, bof = a.block_of, b.block_of
    found: list[tuple[int, ...]] = []

    def rec(e: int, used_a: int, used_b: int, chosen: tuple[int, ...]) -> None:
        if e == g.size:
            found.append(chosen)
            return
        rec(e + 1, used_a, used_b, chosen)
        i, j = aof[e], bof[e]
        if i >= 0 and (used_a >> i) & 1 or j >= 0 and (used_b >> j) & 1:
            return
        rec(e + 1, used_a | (1 << i if i >= 0 else 0), used_b | (1 << j if j >= 0 else 0),
            chosen + (e,))

    rec(0, 0, 0, ())
    return iter([g.subset(c) for c in sorted(found)])


def set_partitions(elements: Sequence[int]) -> Iterator[list[list[int]]]:
    if not elements:
        yield []
        return
    first, rest = elements[0], elements[1:]
    for part in set_partitions(rest):
        yield [[first]] + part
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]


def enumerate_equivalences(ground: GroundSet) -> list[Equiv]:
    return [Equiv(ground, p) for p in set_partitions(list(range(ground.size)))]


def enumerate_partial_equivalences(ground: GroundSet) -> list[Equiv]:
    out = []
    for mask in range(1 << ground.size):
        for p in set_partitions(list(iter_bits(mask))):
            out.append(Equiv(ground, p))
    return out
