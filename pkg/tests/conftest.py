from __future__ import annotations

import pytest
from hypothesis import settings, strategies as st

from associoid_kit import BinRel, Equiv, GroundSet

settings.register_profile("desk", max_examples=60, deadline=None, derandomize=True)
settings.load_profile("desk")


@st.composite
def grounds(draw, lo: int = 0, hi: int = 4) -> GroundSet:
    return GroundSet(draw(st.integers(lo, hi)))


@st.composite
def subsets_of(draw, g: GroundSet):
    return g.subset(e for e in range(g.size) if draw(st.booleans()))


@st.composite
def relations_on(draw, src: GroundSet, tgt: GroundSet | None = None) -> BinRel:
    tgt = src if tgt is None else tgt
    rows = [draw(st.integers(0, src.full_mask)) for _ in range(tgt.size)]
    return BinRel(src, tgt, rows)


@st.composite
def equivs_on(draw, g: GroundSet, total: bool = False) -> Equiv:
    """Random (partial) equivalence: each element gets a label or drops out."""
    top = max(g.size, 1)
    choices = st.integers(0, top - 1) if total else st.one_of(st.none(), st.integers(0, top - 1))
    return Equiv.from_labels(g, [draw(choices) for _ in range(g.size)])


@pytest.fixture(scope="session")
def g4() -> GroundSet:
    return GroundSet(4)
