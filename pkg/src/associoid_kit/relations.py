"""Finite binary relations stored as target-major rows of source bitsets.

A relation ``a`` in R(tgt, src) holds pairs ``(t, s)`` with ``t`` in the
target and ``s`` in the source, so the graph of ``f: src -> tgt`` is the set
of pairs ``(f(s), s)`` and ``compose(b, a)`` means "first ``a``, then ``b``".
"""

from __future__ import annotations

from typing import Callable, Iterable, Iterator, Optional, Sequence

from .errors import IncompatibleGroundsError, NotEndorelationError


def iter_bits(mask: int) -> Iterator[int]:
    """Yield the positions of set bits in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class GroundSet:
    """A finite set ``{0, ..., size-1}``; compared by identity."""

    __slots__ = ("size", "labels")

    def __init__(self, size: int, labels: Optional[Sequence[str]] = None):
        if size < 0:
            raise ValueError(f"ground size must be non-negative, got {size}")
        if labels is not None:
            labels = tuple(str(s) for s in labels)
            if len(labels) != size:
                raise ValueError("label list must have one entry per element")
            if len(set(labels)) != size:
                raise ValueError("labels must be pairwise distinct")
        self.size = size
        self.labels = labels

    def __repr__(self) -> str:
        return f"GroundSet({self.size})"

    def __len__(self) -> int:
        return self.size

    def __iter__(self) -> Iterator[int]:
        return iter(range(self.size))

    @property
    def full_mask(self) -> int:
        return (1 << self.size) - 1

    def subset(self, elements: Iterable[int] = ()) -> "Subset":
        bits = 0
        for e in elements:
            if not 0 <= e < self.size:
                raise ValueError(f"element {e} outside ground of size {self.size}")
            bits |= 1 << e
        return Subset(self, bits)

    def full(self) -> "Subset":
        return Subset(self, self.full_mask)

    def empty(self) -> "Subset":
        return Subset(self, 0)

    def all_subsets(self) -> list["Subset"]:
        return [Subset(self, m) for m in range(1 << self.size)]

    def label(self, e: int) -> str:
        return self.labels[e] if self.labels is not None else str(e)


def _same_ground(g: GroundSet, h: GroundSet, what: str = "operation") -> None:
    if g is not h:
        raise IncompatibleGroundsError(f"{what}: ground sets differ ({g!r} vs {h!r})")


class Subset:
    """Immutable bitset over a ground set."""

    __slots__ = ("ground", "bits")

    def __init__(self, ground: GroundSet, bits: int):
        if bits < 0 or bits >> ground.size:
            raise ValueError(f"bits {bits:#x} do not fit a ground of size {ground.size}")
        self.ground = ground
        self.bits = bits

    def __iter__(self) -> Iterator[int]:
        return iter_bits(self.bits)

    def elements(self) -> tuple[int, ...]:
        return tuple(iter_bits(self.bits))

    def __len__(self) -> int:
        return bin(self.bits).count("1")

    def __bool__(self) -> bool:
        return self.bits != 0

    def __contains__(self, e: int) -> bool:
        return 0 <= e < self.ground.size and (self.bits >> e) & 1 == 1

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Subset)
            and other.ground is self.ground
            and other.bits == self.bits
        )

    def __hash__(self) -> int:
        return hash((id(self.ground), self.bits))

    def __repr__(self) -> str:
        return "{" + ",".join(map(str, self)) + "}"

    def _check(self, other: "Subset") -> None:
        _same_ground(self.ground, other.ground, "subset operation")

    def __or__(self, other: "Subset") -> "Subset":
        self._check(other)
        return Subset(self.ground, self.bits | other.bits)

    def __and__(self, other: "Subset") -> "Subset":
        self._check(other)
        return Subset(self.ground, self.bits & other.bits)

    def __sub__(self, other: "Subset") -> "Subset":
        self._check(other)
        return Subset(self.ground, self.bits & ~other.bits)

    def __le__(self, other: "Subset") -> bool:
        self._check(other)
        return self.bits & ~other.bits == 0

    def complement(self) -> "Subset":
        return Subset(self.ground, self.ground.full_mask & ~self.bits)

    def sort_key(self) -> tuple[int, ...]:
        return self.elements()


class BinRel:
    """Relation between ``src`` and ``tgt``; ``rows[t]`` is the bitset of sources."""

    __slots__ = ("src", "tgt", "rows")

    def __init__(self, src: GroundSet, tgt: GroundSet, rows: Sequence[int]):
        if len(rows) != tgt.size:
            raise ValueError("one row per target element required")
        full = src.full_mask
        for r in rows:
            if r < 0 or r & ~full:
                raise ValueError("row refers to a source element out of range")
        self.src = src
        self.tgt = tgt
        self.rows = tuple(rows)

    @classmethod
    def from_pairs(cls, src: GroundSet, tgt: GroundSet,
                   pairs: Iterable[tuple[int, int]]) -> "BinRel":
        rows = [0] * tgt.size
        for t, s in pairs:
            if not (0 <= t < tgt.size and 0 <= s < src.size):
                raise ValueError(f"pair {(t, s)} out of range")
            rows[t] |= 1 << s
        return cls(src, tgt, rows)

    @classmethod
    def endo(cls, ground: GroundSet, pairs: Iterable[tuple[int, int]]) -> "BinRel":
        return cls.from_pairs(ground, ground, pairs)

    def pairs(self) -> list[tuple[int, int]]:
        return [(t, s) for t, row in enumerate(self.rows) for s in iter_bits(row)]

    def __contains__(self, pair: tuple[int, int]) -> bool:
        t, s = pair
        return 0 <= t < self.tgt.size and (self.rows[t] >> s) & 1 == 1

    def __len__(self) -> int:
        return sum(bin(r).count("1") for r in self.rows)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, BinRel)
            and other.src is self.src
            and other.tgt is self.tgt
            and other.rows == self.rows
        )

    def __hash__(self) -> int:
        return hash((id(self.src), id(self.tgt), self.rows))

    def __repr__(self) -> str:
        return "BinRel(" + repr(self.pairs()) + ")"

    def __le__(self, other: "BinRel") -> bool:
        _same_ground(self.src, other.src, "inclusion")
        _same_ground(self.tgt, other.tgt, "inclusion")
        return all(r & ~q == 0 for r, q in zip(self.rows, other.rows))

    def __and__(self, other: "BinRel") -> "BinRel":
        _same_ground(self.src, other.src, "intersection")
        _same_ground(self.tgt, other.tgt, "intersection")
        return BinRel(self.src, self.tgt, [r & q for r, q in zip(self.rows, other.rows)])

    def __or__(self, other: "BinRel") -> "BinRel":
        _same_ground(self.src, other.src, "union")
        _same_ground(self.tgt, other.tgt, "union")
        return BinRel(self.src, self.tgt, [r | q for r, q in zip(self.rows, other.rows)])

    def __matmul__(self, other: "BinRel") -> "BinRel":
        return compose(self, other)

    def __call__(self, x: Subset) -> Subset:
        return image_of_set(self, x)

    @property
    def is_endo(self) -> bool:
        return self.src is self.tgt


def compose(b: BinRel, a: BinRel) -> BinRel:
    """``b o a``: pairs ``(w, s)`` with some ``k`` such that ``(w, k) in b`` and ``(k, s) in a``."""
    _same_ground(a.tgt, b.src, "compose")
    arows = a.rows
    out = []
    for row in b.rows:
        acc = 0
        for k in iter_bits(row):
            acc |= arows[k]
        out.append(acc)
    return BinRel(a.src, b.tgt, out)


def compose_all(*rels: BinRel) -> BinRel:
    """Right-to-left composite: ``compose_all(c, b, a) == c o b o a``."""
    if not rels:
        raise ValueError("need at least one relation")
    out = rels[-1]
    for r in reversed(rels[:-1]):
        out = compose(r, out)
    return out


def inverse(a: BinRel) -> BinRel:
    rows = [0] * a.src.size
    for t, row in enumerate(a.rows):
        for s in iter_bits(row):
            rows[s] |= 1 << t
    return BinRel(a.tgt, a.src, rows)


def domain(a: BinRel) -> Subset:
    acc = 0
    for row in a.rows:
        acc |= row
    return Subset(a.src, acc)


def image(a: BinRel) -> Subset:
    return Subset(a.tgt, sum(1 << t for t, row in enumerate(a.rows) if row))


def diagonal(x: Subset) -> BinRel:
    g = x.ground
    return BinRel(g, g, [(1 << i) if (x.bits >> i) & 1 else 0 for i in range(g.size)])


def identity(ground: GroundSet) -> BinRel:
    return diagonal(ground.full())


def all_relation(x: Subset, y: Subset) -> BinRel:
    """``x times y``: targets from ``x``, sources from ``y``."""
    return BinRel(y.ground, x.ground,
                  [y.bits if (x.bits >> t) & 1 else 0 for t in range(x.ground.size)])


def empty_relation(src: GroundSet, tgt: GroundSet) -> BinRel:
    return BinRel(src, tgt, [0] * tgt.size)


def graph(f: Callable[[int], int] | Sequence[int], src: GroundSet,
          tgt: Optional[GroundSet] = None) -> BinRel:
    tgt = src if tgt is None else tgt
    fn = f if callable(f) else f.__getitem__
    return BinRel.from_pairs(src, tgt, ((fn(w), w) for w in range(src.size)))


def image_of_set(a: BinRel, x: Subset) -> Subset:
    _same_ground(a.src, x.ground, "image_of_set")
    return Subset(a.tgt, sum(1 << t for t, row in enumerate(a.rows) if row & x.bits))


def preimage_of_set(a: BinRel, x: Subset) -> Subset:
    _same_ground(a.tgt, x.ground, "preimage_of_set")
    acc = 0
    for t in iter_bits(x.bits):
        acc |= a.rows[t]
    return Subset(a.src, acc)


def as_map(a: BinRel) -> Optional[tuple[int, ...]]:
    """The function whose graph is ``a``, or None if ``a`` is not one."""
    cols: list[Optional[int]] = [None] * a.src.size
    for t, row in enumerate(a.rows):
        for s in iter_bits(row):
            if cols[s] is not None:
                return None
            cols[s] = t
    if any(c is None for c in cols):
        return None
    return tuple(cols)  # type: ignore[arg-type]


def is_single_valued(a: BinRel) -> bool:
    seen = 0
    for row in a.rows:
        if row & seen:
            return False
        seen |= row
    return True


def is_everywhere_defined(a: BinRel) -> bool:
    return domain(a).bits == a.src.full_mask


def _endo(a: BinRel) -> None:
    if not a.is_endo:
        raise NotEndorelationError("predicate requires an endorelation")


def is_transitive(a: BinRel) -> bool:
    _endo(a)
    return compose(a, a) <= a


def is_idempotent(a: BinRel) -> bool:
    _endo(a)
    return compose(a, a) == a


def is_symmetric(a: BinRel) -> bool:
    _endo(a)
    return inverse(a) == a


def is_image_reflexive(a: BinRel) -> bool:
    _endo(a)
    return diagonal(image(a)) <= a


def is_domain_reflexive(a: BinRel) -> bool:
    _endo(a)
    return diagonal(domain(a)) <= a


def is_reflexive(a: BinRel) -> bool:
    _endo(a)
    return identity(a.src) <= a


def is_regular(a: BinRel) -> bool:
    _endo(a)
    return compose_all(a, inverse(a), a) == a


def restrict(a: BinRel, x: Subset) -> BinRel:
    """``a`` cut down to pairs with both ends in ``x`` (endorelations only)."""
    _endo(a)
    _same_ground(a.src, x.ground, "restrict")
    return BinRel(a.src, a.tgt,
                  [row & x.bits if (x.bits >> t) & 1 else 0 for t, row in enumerate(a.rows)])
