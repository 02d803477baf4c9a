"""Ternary products on the power set and the generic law checkers.

Three products are provided: the book-keeping product of a commuting pair
of (partial) equivalences, the product ``Gamma`` induced by a
(semi-)pregroupoid, and the product of sections of a prev.  Each has a
scalar form working on ``Subset`` values and a vectorised form working on
numpy arrays of bitmasks, used to tabulate whole power sets.
"""

from __future__ import annotations

import enum
import itertools
import random
from dataclasses import dataclass
from typing import Any, Callable, Hashable, Iterable, Optional, Sequence

import numpy as np

from .equivalence import Equiv, require_commuting
from .relations import Subset, compose_all, diagonal, iter_bits

DEFAULT_BUDGET = 2_000_000


class Law(str, enum.Enum):
    PA = "PA"
    IP = "IP"
    CHASLES_LEFT = "Chasles-left"
    CHASLES_RIGHT = "Chasles-right"
    SYMMETRY = "Symmetry"
    CONDITION_C = "ConditionC"
    COMMUTE = "ab=ba"
    ENDOMORPHISM = "Endomorphism"
    CLOSURE = "Closure"
    AGREEMENT = "Agreement"
    COMPATIBILITY = "Compatibility"
    PREV_COMMUTE = "PrevCommute"
    HOMOMORPHISM = "Homomorphism"
    INVERSE = "Inverse"
    IDENTITY = "Identity"
    ROUND_TRIP = "RoundTrip"
    DISTRIBUTIVITY = "Distributivity"
    AUTOMORPHISM = "Automorphism"
    GROUPOID = "Groupoid"

    def __str__(self) -> str:
        return self.value


@dataclass
class TernaryLawReport:
    """Outcome of one law check; a failing report always carries a witness."""

    law: Law
    holds: bool
    witness: Optional[tuple] = None
    instances: int = 0
    exhaustive: bool = True
    seed: Optional[int] = None
    note: str = ""

    def __post_init__(self):
        if not self.holds and self.witness is None:
            raise ValueError("a failing report needs a witness")

    def __bool__(self) -> bool:
        return self.holds

    def to_json(self) -> dict:
        return {
            "law": str(self.law),
            "holds": self.holds,
            "instances": self.instances,
            "exhaustive": self.exhaustive,
            "seed": self.seed,
            "note": self.note,
            "witness": _jsonable(self.witness),
        }


def _jsonable(obj: Any) -> Any:
    if isinstance(obj, Subset):
        return list(obj.elements())
    if isinstance(obj, (tuple, list)):
        return [_jsonable(o) for o in obj]
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (np.integer,)):
        return int(obj)
    return obj


# --------------------------------------------------------------------------
# book-keeping product


def bookkeeping_product(a: Equiv, b: Equiv, x: Subset, y: Subset, z: Subset) -> Subset:
    """``(xyz)`` for a commuting pair ``(a, b)``, via ``(b I_x a  &  a I_z b)(y)``."""
    require_commuting(a, b)
    ar, br = a.as_relation(), b.as_relation()
    rel = compose_all(br, diagonal(x), ar) & compose_all(ar, diagonal(z), br)
    return rel(y)


def bookkeeping_formulas(a: Equiv, b: Equiv, x: Subset, y: Subset,
                         z: Subset) -> tuple[Subset, Subset, Subset]:
    """The three direct-image descriptions, evaluated independently."""
    require_commuting(a, b)
    ar, br = a.as_relation(), b.as_relation()
    ix, iy, iz = diagonal(x), diagonal(y), diagonal(z)
    via_y = (compose_all(br, ix, ar) & compose_all(ar, iz, br))(y)
    via_x = (br & compose_all(ar, iz, br, iy, ar))(x)
    via_z = (ar & compose_all(br, ix, ar, iy, br))(z)
    return via_y, via_x, via_z


def bookkeeping_oracle(a: Equiv, b: Equiv, x: Subset, y: Subset, z: Subset) -> Subset:
    """Brute force over all quadruples ``(w, xi, eta, zeta)``."""
    g = x.ground
    out = 0
    for w in range(g.size):
        for xi in x:
            if not b.related(w, xi):
                continue
            for zeta in z:
                if not a.related(w, zeta):
                    continue
                if any(a.related(eta, xi) and b.related(eta, zeta) for eta in y):
                    out |= 1 << w
    return Subset(g, out)


def bookkeeping_witnesses(a: Equiv, b: Equiv, x: Subset, y: Subset,
                          z: Subset) -> dict[int, list[tuple[int, int, int]]]:
    """For each output element, the triples ``(xi, eta, zeta)`` producing it."""
    out: dict[int, list[tuple[int, int, int]]] = {}
    for xi, eta, zeta in itertools.product(x, y, z):
        if not (a.related(eta, xi) and b.related(eta, zeta)):
            continue
        for w in iter_bits(b.class_mask(xi) & a.class_mask(zeta)):
            out.setdefault(w, []).append((xi, eta, zeta))
    return dict(sorted(out.items()))


# --------------------------------------------------------------------------
# products induced by an element-level structure


def gamma_product(T, x: Subset, y: Subset, z: Subset) -> Subset:
    """``{[xi eta zeta] : xi in x, eta in y, zeta in z, eta ~a xi, eta ~b zeta}``."""
    out = 0
    a, b = T.a, T.b
    for eta in y:
        xs = x.bits & a.class_mask(eta)
        if not xs:
            continue
        zs = z.bits & b.class_mask(eta)
        for xi in iter_bits(xs):
            for zeta in iter_bits(zs):
                out |= 1 << T.product(xi, eta, zeta)
    return Subset(T.ground, out)


def gamma_oracle(T, x: Subset, y: Subset, z: Subset) -> Subset:
    out = 0
    for xi, eta, zeta in itertools.product(x, y, z):
        if T.a.related(eta, xi) and T.b.related(eta, zeta):
            out |= 1 << T.product(xi, eta, zeta)
    return Subset(T.ground, out)


def gamma_witnesses(T, x: Subset, y: Subset, z: Subset) -> dict[int, list[tuple[int, int, int]]]:
    out: dict[int, list[tuple[int, int, int]]] = {}
    for xi, eta, zeta in itertools.product(x, y, z):
        if T.a.related(eta, xi) and T.b.related(eta, zeta):
            out.setdefault(T.product(xi, eta, zeta), []).append((xi, eta, zeta))
    return dict(sorted(out.items()))


def prev_product(T, x: Subset, y: Subset, z: Subset) -> Subset:
    """``(xyz)_a``: both outer factors ``a``-related to the middle one."""
    out = 0
    a = T.a
    for eta in y:
        m = a.class_mask(eta)
        for xi in iter_bits(x.bits & m):
            for zeta in iter_bits(z.bits & m):
                out |= 1 << T.product(xi, eta, zeta)
    return Subset(T.ground, out)


def prev_witnesses(T, x: Subset, y: Subset, z: Subset) -> dict[int, list[tuple[int, int, int]]]:
    out: dict[int, list[tuple[int, int, int]]] = {}
    for xi, eta, zeta in itertools.product(x, y, z):
        if T.a.related(eta, xi) and T.a.related(eta, zeta):
            out.setdefault(T.product(xi, eta, zeta), []).append((xi, eta, zeta))
    return dict(sorted(out.items()))


# --------------------------------------------------------------------------
# vectorised evaluation over arrays of bitmasks


def _dtype_for(n: int):
    for dt in (np.uint8, np.uint16, np.uint32, np.uint64):
        if n <= np.iinfo(dt).bits:
            return dt
    raise ValueError("ground too large for bitmask arrays")


def _bit(arr: np.ndarray, i: int) -> np.ndarray:
    return ((arr >> np.int64(i)) & 1).astype(bool)


def bookkeeping_batch(a: Equiv, b: Equiv, X, Y, Z, route: str = "pairs") -> np.ndarray:
    """Book-keeping product on arrays of bitmasks (broadcast together).

    ``route`` selects the evaluation path: ``"quadruple"`` enumerates the
    witness quadruples; ``"via_y"``, ``"via_x"``, ``"via_z"`` evaluate the
    three relational formulas entrywise; ``"pairs"`` groups by ``(xi, zeta)``.
    """
    n = a.ground.size
    X, Y, Z = (np.asarray(v, dtype=np.int64) for v in (X, Y, Z))
    shape = np.broadcast_shapes(X.shape, Y.shape, Z.shape)
    out = np.zeros(shape, dtype=np.int64)
    am = [a.class_mask(i) for i in range(n)]
    bm = [b.class_mask(i) for i in range(n)]
    if route == "quadruple":
        for w, xi, eta, zeta in itertools.product(range(n), repeat=4):
            if (bm[w] >> xi) & 1 and (am[w] >> zeta) & 1 and (am[eta] >> xi) & 1 \
                    and (bm[eta] >> zeta) & 1:
                out |= (_bit(X, xi) & _bit(Y, eta) & _bit(Z, zeta)).astype(np.int64) << w
    elif route == "via_y":
        # (b I_x a)[w, eta] and (a I_z b)[w, eta], then image of y
        for w in range(n):
            for eta in range(n):
                left = (X & (bm[w] & am[eta])) != 0
                right = (Z & (am[w] & bm[eta])) != 0
                out |= (left & right & _bit(Y, eta)).astype(np.int64) << w
    elif route == "via_x":
        # (b & a I_z b I_y a)[w, xi], then image of x
        for w in range(n):
            for xi in iter_bits(bm[w]):
                hit = np.zeros(shape, dtype=bool)
                for zeta in iter_bits(am[w]):
                    hit |= _bit(Z, zeta) & ((Y & (bm[zeta] & am[xi])) != 0)
                out |= (hit & _bit(X, xi)).astype(np.int64) << w
    elif route == "via_z":
        # (a & b I_x a I_y b)[w, zeta], then image of z
        for w in range(n):
            for zeta in iter_bits(am[w]):
                hit = np.zeros(shape, dtype=bool)
                for xi in iter_bits(bm[w]):
                    hit |= _bit(X, xi) & ((Y & (am[xi] & bm[zeta])) != 0)
                out |= (hit & _bit(Z, zeta)).astype(np.int64) << w
    elif route == "pairs":
        for xi in range(n):
            for zeta in range(n):
                meet = am[xi] & bm[zeta]
                target = bm[xi] & am[zeta]
                if not meet or not target:
                    continue
                hit = _bit(X, xi) & _bit(Z, zeta) & ((Y & meet) != 0)
                out |= np.where(hit, np.int64(target), np.int64(0))
    else:
        raise ValueError(f"unknown route {route!r}")
    return out.astype(_dtype_for(n))


BOOKKEEPING_ROUTES = ("quadruple", "via_y", "via_x", "via_z", "pairs")


def structure_batch(T, X, Y, Z, kind: str = "gamma") -> np.ndarray:
    """``Gamma`` (``kind="gamma"``) or the prev product (``kind="prev"``) on bitmask arrays."""
    n = T.ground.size
    X, Y, Z = (np.asarray(v, dtype=np.int64) for v in (X, Y, Z))
    shape = np.broadcast_shapes(X.shape, Y.shape, Z.shape)
    out = np.zeros(shape, dtype=np.int64)
    right = T.b if kind == "gamma" else T.a
    if kind not in ("gamma", "prev"):
        raise ValueError(f"unknown product kind {kind!r}")
    for eta in range(n):
        for xi in iter_bits(T.a.class_mask(eta)):
            for zeta in iter_bits(right.class_mask(eta)):
                w = T.product(xi, eta, zeta)
                out |= (_bit(X, xi) & _bit(Y, eta) & _bit(Z, zeta)).astype(np.int64) << w
    return out.astype(_dtype_for(n))


MAX_TABLE_GROUND = 7


def full_table(batch: Callable[..., np.ndarray], n: int) -> np.ndarray:
    """Tabulate a ternary operation on all subsets: ``table[x, y, z]``."""
    if n > MAX_TABLE_GROUND:
        raise ValueError(f"power-set tables are limited to grounds of size <= {MAX_TABLE_GROUND}")
    N = 1 << n
    idx = np.arange(N, dtype=np.int64)
    return batch(idx[:, None, None], idx[None, :, None], idx[None, None, :])


def bookkeeping_table(a: Equiv, b: Equiv, route: str = "pairs") -> np.ndarray:
    require_commuting(a, b)
    return full_table(lambda X, Y, Z: bookkeeping_batch(a, b, X, Y, Z, route), a.ground.size)


def gamma_table(T) -> np.ndarray:
    return full_table(lambda X, Y, Z: structure_batch(T, X, Y, Z, "gamma"), T.ground.size)


def prev_table(T) -> np.ndarray:
    return full_table(lambda X, Y, Z: structure_batch(T, X, Y, Z, "prev"), T.ground.size)


# --------------------------------------------------------------------------
# law checks on tabulated products


def _sample_or_exhaust(total: int, budget: int, exhaustive: bool) -> bool:
    return exhaustive or total <= budget


def table_para_associativity(table: np.ndarray, budget: int = DEFAULT_BUDGET, seed: int = 0,
                             exhaustive: bool = False) -> TernaryLawReport:
    """``(xy(zuv)) == (x(uzy)v) == ((xyz)uv)`` for a tabulated total product."""
    N = table.shape[0]
    flat = table.reshape(-1).astype(np.int64)
    total = N ** 5
    if _sample_or_exhaust(total, budget, exhaustive):
        count = 0
        zuv = table.astype(np.int64)                              # [z, u, v]
        uzy = np.transpose(table, (1, 0, 2)).astype(np.int64)     # [z, u, y] = (u z y)
        idx = np.arange(N, dtype=np.int64)
        for x in range(N):
            xyz = table[x].astype(np.int64)                       # [y, z]
            # axes (y, z, u, v)
            s1 = flat[(x * N + idx[:, None, None, None]) * N + zuv[None, :, :, :]]
            mid = uzy[None].transpose(0, 3, 1, 2)[0]              # [y, z, u]
            s2 = flat[(x * N + mid[:, :, :, None]) * N + idx[None, None, None, :]]
            s3 = flat[(xyz[:, :, None, None] * N + idx[None, None, :, None]) * N
                      + idx[None, None, None, :]]
            bad = (s1 != s2) | (s2 != s3)
            count += bad.size
            if bad.any():
                y, z, u, v = (int(i) for i in np.argwhere(bad)[0])
                return TernaryLawReport(
                    Law.PA, False,
                    witness=((x, y, z, u, v), (int(s1[y, z, u, v]), int(s2[y, z, u, v]),
                                                int(s3[y, z, u, v]))),
                    instances=count)
        return TernaryLawReport(Law.PA, True, instances=count)
    rng = np.random.default_rng(seed)
    x, y, z, u, v = (rng.integers(0, N, size=budget) for _ in range(5))
    return _pa_on_instances(flat, N, x, y, z, u, v, seed)


def _pa_on_instances(flat: np.ndarray, N: int, x, y, z, u, v, seed=None) -> TernaryLawReport:
    def p(i, j, k):
        return flat[(i * N + j) * N + k].astype(np.int64)

    s1 = p(x, y, p(z, u, v))
    s2 = p(x, p(u, z, y), v)
    s3 = p(p(x, y, z), u, v)
    bad = (s1 != s2) | (s2 != s3)
    if bad.any():
        i = int(np.argmax(bad))
        return TernaryLawReport(
            Law.PA, False,
            witness=(tuple(int(t[i]) for t in (x, y, z, u, v)),
                     (int(s1[i]), int(s2[i]), int(s3[i]))),
            instances=len(x), exhaustive=False, seed=seed)
    return TernaryLawReport(Law.PA, True, instances=len(x), exhaustive=False, seed=seed)


def pa_on_instances(table: np.ndarray, quintuples: np.ndarray, seed=None) -> TernaryLawReport:
    """Para-associativity on an explicit ``(k, 5)`` array of subset bitmasks."""
    N = table.shape[0]
    q = np.asarray(quintuples, dtype=np.int64)
    return _pa_on_instances(table.reshape(-1), N, *q.T, seed=seed)


def table_symmetry(table_ab: np.ndarray, table_ba: np.ndarray) -> TernaryLawReport:
    """``(xyz)_ba == (zyx)_ab``."""
    swapped = np.transpose(table_ab, (2, 1, 0))
    bad = table_ba != swapped
    if bad.any():
        x, y, z = (int(i) for i in np.argwhere(bad)[0])
        return TernaryLawReport(Law.SYMMETRY, False,
                                witness=((x, y, z), (int(table_ba[x, y, z]), int(swapped[x, y, z]))),
                                instances=bad.size)
    return TernaryLawReport(Law.SYMMETRY, True, instances=bad.size)


def table_idempotent(table: np.ndarray) -> TernaryLawReport:
    """``(xxy) == y == (yxx)`` for every pair of subsets."""
    N = table.shape[0]
    idx = np.arange(N)
    left = table[idx[:, None], idx[:, None], idx[None, :]]    # (x x y)
    right = table[idx[None, :], idx[:, None], idx[:, None]]   # (y x x)
    target = np.broadcast_to(idx[None, :], (N, N))
    bad = (left != target) | (right != target)
    if bad.any():
        x, y = (int(i) for i in np.argwhere(bad)[0])
        return TernaryLawReport(Law.IP, False,
                                witness=((x, y), (int(left[x, y]), int(right[x, y]), y)),
                                instances=N * N)
    return TernaryLawReport(Law.IP, True, instances=N * N)


def saturation_keys(a: Equiv) -> np.ndarray:
    """``a(x)`` for every subset ``x``, as bitmasks (the induced relation's key)."""
    N = 1 << a.ground.size
    idx = np.arange(N, dtype=np.int64)
    out = np.zeros(N, dtype=np.int64)
    for m in a.masks:
        out |= np.where((idx & m) != 0, np.int64(m), np.int64(0))
    return out


def table_condition_c(table: np.ndarray, a: Equiv, b: Equiv) -> TernaryLawReport:
    """Induced compatibility: ``x ~a y, y ~b z  =>  (xyz) ~a z  and  (xyz) ~b x``."""
    ka, kb = saturation_keys(a), saturation_keys(b)
    N = table.shape[0]
    idx = np.arange(N)
    dom = (ka[idx][:, None, None] == ka[idx][None, :, None]) & \
          (kb[idx][None, :, None] == kb[idx][None, None, :])
    t = table.astype(np.int64)
    ok_a = ka[t] == ka[idx][None, None, :]
    ok_b = kb[t] == kb[idx][:, None, None]
    bad = dom & ~(ok_a & ok_b)
    if bad.any():
        x, y, z = (int(i) for i in np.argwhere(bad)[0])
        return TernaryLawReport(Law.CONDITION_C, False,
                                witness=((x, y, z), int(t[x, y, z])),
                                instances=int(dom.sum()))
    return TernaryLawReport(Law.CONDITION_C, True, instances=int(dom.sum()))


def table_monotone(table: np.ndarray, n: int) -> TernaryLawReport:
    """``x <= x'`` (and likewise in the other slots) implies ``(xyz) <= (x'yz)``."""
    N = table.shape[0]
    t = table.astype(np.int64)
    count = 0
    for axis in range(3):
        for i in range(n):
            lo = np.arange(N)[(np.arange(N) >> i) & 1 == 0]
            hi = lo | (1 << i)
            small = np.take(t, lo, axis=axis)
            big = np.take(t, hi, axis=axis)
            bad = (small & ~big) != 0
            count += bad.size
            if bad.any():
                pos = tuple(int(v) for v in np.argwhere(bad)[0])
                return TernaryLawReport(Law.ENDOMORPHISM, False,
                                        witness=(axis, i, pos), instances=count,
                                        note="monotonicity")
    return TernaryLawReport(Law.ENDOMORPHISM, True, instances=count, note="monotonicity")


# --------------------------------------------------------------------------
# generic checks for element-level (possibly partial) products
#
# A product is a callable returning an element, or None off its domain.


Product = Callable[[Hashable, Hashable, Hashable], Optional[Hashable]]


def _instances(carrier: Sequence, arity: int, budget: int, seed: int,
               exhaustive: bool) -> tuple[Iterable[tuple], bool]:
    total = len(carrier) ** arity
    if _sample_or_exhaust(total, budget, exhaustive):
        return itertools.product(carrier, repeat=arity), True
    rng = random.Random(seed)
    return (tuple(rng.choice(carrier) for _ in range(arity)) for _ in range(budget)), False


def _pa_sides(p: Product, x, y, z, u, v) -> tuple:
    w = p(z, u, v)
    s1 = None if w is None else p(x, y, w)
    w = p(u, z, y)
    s2 = None if w is None else p(x, w, v)
    w = p(x, y, z)
    s3 = None if w is None else p(w, u, v)
    return s1, s2, s3


def check_para_associativity(product: Product, carrier: Sequence, *,
                             instances: Optional[Iterable[tuple]] = None,
                             budget: int = DEFAULT_BUDGET, seed: int = 0,
                             exhaustive: bool = False) -> TernaryLawReport:
    """(PA) in its conditional reading: if one side is defined, all are, and they agree."""
    if instances is None:
        it, full = _instances(carrier, 5, budget, seed, exhaustive)
    else:
        it, full = instances, True
    count = 0
    for q in it:
        count += 1
        sides = _pa_sides(product, *q)
        defined = [s is not None for s in sides]
        if any(defined) and (not all(defined) or len(set(sides)) != 1):
            return TernaryLawReport(Law.PA, False, witness=(q, sides), instances=count,
                                    exhaustive=full, seed=None if full else seed)
    return TernaryLawReport(Law.PA, True, instances=count, exhaustive=full,
                            seed=None if full else seed)


def check_idempotent(product: Product, carrier: Sequence, *, budget: int = DEFAULT_BUDGET,
                     seed: int = 0, exhaustive: bool = False) -> TernaryLawReport:
    """``(xxy) == y`` and ``(yxx) == y`` wherever defined."""
    it, full = _instances(carrier, 2, budget, seed, exhaustive)
    count = 0
    for x, y in it:
        count += 1
        left, right = product(x, x, y), product(y, x, x)
        if (left is not None and left != y) or (right is not None and right != y):
            return TernaryLawReport(Law.IP, False, witness=((x, y), (left, right)),
                                    instances=count, exhaustive=full,
                                    seed=None if full else seed)
    return TernaryLawReport(Law.IP, True, instances=count, exhaustive=full,
                            seed=None if full else seed)


def check_chasles(product: Product, carrier: Sequence, *, budget: int = DEFAULT_BUDGET,
                  seed: int = 0, exhaustive: bool = False) -> list[TernaryLawReport]:
    """Left ``(xy(yuv)) == (xuv)`` and right ``((xyz)zv) == (xyv)``; LHS defined implies RHS."""
    reports = []
    for law in (Law.CHASLES_LEFT, Law.CHASLES_RIGHT):
        it, full = _instances(carrier, 4, budget, seed, exhaustive)
        count = 0
        report = None
        for x, y, u, v in it:
            count += 1
            if law is Law.CHASLES_LEFT:
                w = product(y, u, v)
                lhs = None if w is None else product(x, y, w)
                rhs = product(x, u, v)
            else:
                w = product(x, y, u)
                lhs = None if w is None else product(w, u, v)
                rhs = product(x, y, v)
            if lhs is not None and lhs != rhs:
                report = TernaryLawReport(law, False, witness=((x, y, u, v), (lhs, rhs)),
                                          instances=count, exhaustive=full,
                                    seed=None if full else seed)
                break
        if report is None:
            report = TernaryLawReport(law, True, instances=count, exhaustive=full,
                                      seed=None if full else seed)
        reports.append(report)
    return reports


def check_symmetry_law(product_ab: Product, product_ba: Product, carrier: Sequence, *,
                       budget: int = DEFAULT_BUDGET, seed: int = 0,
                       exhaustive: bool = False) -> TernaryLawReport:
    """``(xyz)_ba == (zyx)_ab``."""
    it, full = _instances(carrier, 3, budget, seed, exhaustive)
    count = 0
    for x, y, z in it:
        count += 1
        lhs, rhs = product_ba(x, y, z), product_ab(z, y, x)
        if lhs != rhs:
            return TernaryLawReport(Law.SYMMETRY, False, witness=((x, y, z), (lhs, rhs)),
                                    instances=count, exhaustive=full,
                                    seed=None if full else seed)
    return TernaryLawReport(Law.SYMMETRY, True, instances=count, exhaustive=full,
                            seed=None if full else seed)


def check_endomorphism(product: Product, carrier: Sequence, *, budget: int = DEFAULT_BUDGET,
                       seed: int = 0, exhaustive: bool = False) -> TernaryLawReport:
    """``(xy(uvw)) == ((xyu)(xyv)(xyw))`` whenever both sides are defined."""
    it, full = _instances(carrier, 5, budget, seed, exhaustive)
    count = 0
    for x, y, u, v, w in it:
        count += 1
        inner = product(u, v, w)
        lhs = None if inner is None else product(x, y, inner)
        parts = (product(x, y, u), product(x, y, v), product(x, y, w))
        rhs = None if None in parts else product(*parts)
        if lhs is not None and rhs is not None and lhs != rhs:
            return TernaryLawReport(Law.ENDOMORPHISM, False,
                                    witness=((x, y, u, v, w), (lhs, rhs)),
                                    instances=count, exhaustive=full,
                                    seed=None if full else seed)
    return TernaryLawReport(Law.ENDOMORPHISM, True, instances=count, exhaustive=full,
                            seed=None if full else seed)
