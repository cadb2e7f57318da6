"""Static R-tree over member bounding boxes, bulk-loaded with Sort-Tile-Recursive.

Only the discover algorithms use it. Parents are indexed and each child probes
with its own envelope; a parent whose box misses the probe cannot relate to the
child under any supported predicate, so pruning it never changes the output.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .geometry import EPS, GeometrySet
from .rdf import Iri

Box = tuple[float, float, float, float]


@dataclass(frozen=True)
class _Node:
    box: Box
    children: tuple  # of _Node, or of (key, box) at the leaves
    leaf: bool


def _union(boxes: Iterable[Box]) -> Box:
    boxes = list(boxes)
    return (
        min(b[0] for b in boxes),
        min(b[1] for b in boxes),
        max(b[2] for b in boxes),
        max(b[3] for b in boxes),
    )


def _overlaps(a: Box, b: Box, pad: float) -> bool:
    return a[0] <= b[2] + pad and b[0] <= a[2] + pad and a[1] <= b[3] + pad and b[1] <= a[3] + pad


def _str_pack(items: list, box_of, capacity: int) -> list[list]:
    """Group items into runs of at most `capacity` using STR tiling."""
    n = len(items)
    leaves = math.ceil(n / capacity)
    slices = math.ceil(math.sqrt(leaves))
    per_slice = slices * capacity

    def cx(item):
        b = box_of(item)
        return (b[0] + b[2], b[1] + b[3])

    by_x = sorted(items, key=lambda it: (cx(it)[0], cx(it)[1]))
    groups = []
    for i in range(0, n, per_slice):
        run = sorted(by_x[i:i + per_slice], key=lambda it: (cx(it)[1], cx(it)[0]))
        for j in range(0, len(run), capacity):
            groups.append(run[j:j + capacity])
    return groups


class BBoxIndex:
    """Immutable R-tree; entries are (key, (minx, miny, maxx, maxy))."""

    def __init__(self, entries: Sequence[tuple[Iri, Box]], capacity: int = 16) -> None:
        if capacity < 2:
            raise ValueError("node capacity must be at least 2")
        self.capacity = capacity
        # stable order so the tree shape depends only on the input set
        self.entries = tuple(sorted(entries, key=lambda e: (e[1], e[0].value)))
        self.root: Optional[_Node] = None
        self.height = 0
        if not self.entries:
            return
        level = [
            _Node(_union(b for _, b in grp), tuple(grp), True)
            for grp in _str_pack(list(self.entries), lambda e: e[1], capacity)
        ]
        self.height = 1
        while len(level) > 1:
            level = [
                _Node(_union(n.box for n in grp), tuple(grp), False)
                for grp in _str_pack(level, lambda n: n.box, capacity)
            ]
            self.height += 1
        self.root = level[0]

    def __len__(self) -> int:
        return len(self.entries)

    def query(self, box: Box, pad: float = EPS) -> set[Iri]:
        """Keys whose box overlaps the query box, edges inclusive."""
        out: set[Iri] = set()
        if self.root is None:
            return out
        stack = [self.root]
        while stack:
            node = stack.pop()
            if not _overlaps(node.box, box, pad):
                continue
            if node.leaf:
                for key, b in node.children:
                    if _overlaps(b, box, pad):
                        out.add(key)
            else:
                stack.extend(node.children)
        return out


def build_index(members: Sequence[tuple[Iri, GeometrySet]], capacity: int = 16) -> BBoxIndex:
    """Index members by the envelope of all their geometry sets."""
    boxes: dict[Iri, Box] = {}
    for iri, gs in members:
        b = gs.bbox
        if iri in boxes:
            b = _union((boxes[iri], b))
        boxes[iri] = b
    return BBoxIndex(list(boxes.items()), capacity)


def candidates(index: BBoxIndex, probe: GeometrySet) -> set[Iri]:
    return index.query(probe.bbox)


def linear_scan(entries: Sequence[tuple[Iri, Box]], box: Box, pad: float = EPS) -> set[Iri]:
    return {k for k, b in entries if _overlaps(b, box, pad)}
