from __future__ import annotations

import json
from collections.abc import Mapping
from dataclasses import dataclass, field

from ..behavior import flatten_names


@dataclass
class HierarchyStats:
    depth: int
    fanout: dict[str, int] = field(default_factory=dict)
    reuse: dict[str, int] = field(default_factory=dict)
    leaves: list[str] = field(default_factory=list)


def _has_parent(b, store: Mapping) -> bool:
    # "behavior A extends A" redefines A from its old self; not an edge
    return b.parent is not None and b.parent != b.name and b.parent in store


def children_of(store: Mapping) -> dict[str, list[str]]:
    """Derived children per behavior, in store order."""
    kids: dict[str, list[str]] = {name: [] for name in store}
    for name, b in store.items():
        if _has_parent(b, store):
            kids[b.parent].append(name)
    return kids


def hierarchy_stats(store: Mapping) -> HierarchyStats:
    """Depth, per-behavior fanout, and reuse of each step across leaves.

    Leaves are behaviors nothing derives from; a step's reuse count is the
    number of leaves whose flattened trace mentions it.
    """
    if not store:
        raise ValueError("hierarchy_stats needs a nonempty store")
    kids = children_of(store)
    leaves = [name for name, cs in kids.items() if not cs]
    reuse: dict[str, int] = {}
    for name in leaves:
        for step in dict.fromkeys(flatten_names(store[name], store)):
            reuse[step] = reuse.get(step, 0) + 1
    return HierarchyStats(
        depth=max(b.depth for b in store.values()),
        fanout={name: len(cs) for name, cs in kids.items()},
        reuse=reuse,
        leaves=leaves,
    )


def to_dot(store: Mapping) -> str:
    lines = ["digraph behaviors {"]
    lines.extend(f"  {json.dumps(name)};" for name in store)
    for name, b in store.items():
        if _has_parent(b, store):
            lines.append(f"  {json.dumps(b.parent)} -> {json.dumps(name)};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def to_text_tree(store: Mapping) -> str:
    kids = children_of(store)
    roots = [n for n, b in store.items() if not _has_parent(b, store)]
    out: list[str] = []

    def walk(name: str, indent: int) -> None:
        out.append("  " * indent + name)
        for child in kids[name]:
            walk(child, indent + 1)

    for root in roots:
        walk(root, 0)
    return "\n".join(out) + "\n"
