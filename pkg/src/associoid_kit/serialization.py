"""Canonical JSON forms, digests, and loaders for structures and groups."""

from __future__ import annotations

import hashlib
import json
from typing import Any

from .algebra import FiniteGroup, close_generators, from_cayley
from .errors import StructureError
from .relations import BinRel, GroundSet, Subset
from .structures import TernaryStructure, homogeneous


def canonical_dumps(obj: Any, indent: int | None = None) -> str:
    return json.dumps(obj, sort_keys=True, indent=indent, separators=(",", ": ") if indent else (",", ":"))


def digest(obj: Any) -> str:
    return hashlib.sha256(canonical_dumps(obj).encode()).hexdigest()


def subset_to_json(s: Subset) -> list[int]:
    return list(s.elements())


def relation_to_json(r: BinRel) -> dict:
    return {"src_size": r.src.size, "tgt_size": r.tgt.size, "pairs": [list(p) for p in sorted(r.pairs())]}


def relation_from_json(data: dict, src: GroundSet | None = None, tgt: GroundSet | None = None) -> BinRel:
    src = src or GroundSet(int(data["src_size"]))
    tgt = tgt or GroundSet(int(data["tgt_size"]))
    return BinRel.from_pairs(src, tgt, (tuple(p) for p in data["pairs"]))


def group_from_json(data: dict) -> FiniteGroup:
    if "cayley" in data:
        return from_cayley(data["cayley"], data.get("labels"))
    if "perm_gens" in data:
        return close_generators(data["perm_gens"], data.get("degree"))
    raise StructureError("group JSON needs 'cayley' or 'perm_gens'")


def structure_from_json(data: dict) -> TernaryStructure:
    """A structure table, or ``{"group": ..., "A": [...], "B": [...]}`` for a homogeneous one."""
    if not isinstance(data, dict):
        raise StructureError("structure JSON must be an object")
    if "group" in data:
        G = group_from_json(data["group"])
        return homogeneous(G, data.get("A", [G.identity]), data.get("B", [G.identity]))
    return TernaryStructure.from_json(data)


def parse_json_text(text: str, source: str = "<input>") -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise StructureError(f"{source}: line {exc.lineno}, column {exc.colno}: {exc.msg}",
                             witness=(exc.lineno, exc.colno)) from exc
