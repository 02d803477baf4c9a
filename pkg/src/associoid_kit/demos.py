"""Built-in instances, addressable by name from the command line."""

from __future__ import annotations

from typing import Callable

from .algebra import cyclic, direct_product, symmetric
from .structures import TernaryStructure, homogeneous, pair_pregroupoid

# In symmetric(3) (lexicographic one-line order) the transposition of the
# first two letters is element 2 and the 3-cycle 0->1->2->0 is element 3.
S3_TRANSPOSITION = [0, 2]
S3_ROTATIONS = [0, 3, 4]


def _s3_a12_b123() -> TernaryStructure:
    return homogeneous(symmetric(3), S3_TRANSPOSITION, S3_ROTATIONS)


def _s3_a12_b12() -> TernaryStructure:
    return homogeneous(symmetric(3), S3_TRANSPOSITION, S3_TRANSPOSITION)


DEMOS: dict[str, tuple[Callable[[], TernaryStructure], str]] = {
    "pair-2x3": (lambda: pair_pregroupoid(2, 3), "pair pregroupoid on a 2x3 grid"),
    "pair-3x3": (lambda: pair_pregroupoid(3, 3), "pair pregroupoid on a 3x3 grid (a, b transversal)"),
    "grid-2x2": (lambda: pair_pregroupoid(2, 2), "pair pregroupoid on a 2x2 grid"),
    "z6-A03-B024": (lambda: homogeneous(cyclic(6), [0, 3], [0, 2, 4]),
                    "Z6 with A={0,3}, B={0,2,4}; no bisections"),
    "s3-A12-B123": (_s3_a12_b123, "S3 with A=<(12)>, B=<(123)>; no bisections"),
    "s3-A12-B12": (_s3_a12_b12, "S3 with A=B=<(12)>; has bisections"),
    "z3xz3-A10-B01": (lambda: homogeneous(direct_product(cyclic(3), cyclic(3)), [0, 3, 6], [0, 1, 2]),
                      "Z3xZ3 with A=Z3x0, B=0xZ3 (a, b transversal); left distributivity fails"),
    "z6-torsorbundle-A03": (lambda: homogeneous(cyclic(6), [0, 3], [0, 3]),
                            "Z6 with A=B={0,3}: a torsor bundle from two commuting prevs"),
}


def demo(name: str) -> TernaryStructure:
    try:
        build = DEMOS[name][0]
    except KeyError:
        raise KeyError(f"unknown demo {name!r}; choose from {', '.join(sorted(DEMOS))}") from None
    return build()
