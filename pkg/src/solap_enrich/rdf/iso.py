"""Graph isomorphism up to blank-node relabeling.

Colour refinement narrows the candidate mapping, then a backtracking search
settles ties. Cube schemas have a handful of blank nodes, so the search space
stays tiny in practice.
"""

from __future__ import annotations

import hashlib
from collections import defaultdict

from .graph import Graph
from .terms import BlankNode, Triple


def _h(*parts: str) -> str:
    return hashlib.sha1("\x1f".join(parts).encode("utf-8")).hexdigest()


def _colours(g: Graph, rounds: int = 8) -> dict[BlankNode, str]:
    nodes = {t.subject for t in g.triples if isinstance(t.subject, BlankNode)}
    nodes |= {t.object for t in g.triples if isinstance(t.object, BlankNode)}
    colour = {b: "b" for b in nodes}

    def name(term, col):
        return col[term] if isinstance(term, BlankNode) else term.n3()

    for _ in range(rounds):
        sig: dict[BlankNode, list[str]] = defaultdict(list)
        for s, p, o in g.triples:
            if isinstance(s, BlankNode):
                sig[s].append("out" + p.n3() + name(o, colour))
            if isinstance(o, BlankNode):
                sig[o].append("in" + p.n3() + name(s, colour))
        new = {b: _h(colour[b], *sorted(sig[b])) for b in nodes}
        if len(set(new.values())) == len(set(colour.values())):
            colour = new
            break
        colour = new
    return colour


def isomorphic(g1: Graph, g2: Graph) -> bool:
    if len(g1) != len(g2):
        return False
    ground1 = {t for t in g1.triples if not _has_bnode(t)}
    ground2 = {t for t in g2.triples if not _has_bnode(t)}
    if ground1 != ground2:
        return False
    c1, c2 = _colours(g1), _colours(g2)
    if sorted(c1.values()) != sorted(c2.values()):
        return False
    by_colour: dict[str, list[BlankNode]] = defaultdict(list)
    for b, c in c2.items():
        by_colour[c].append(b)
    order = sorted(c1, key=lambda b: (len(by_colour[c1[b]]), c1[b], b.label))
    rest1 = [t for t in g1.triples if _has_bnode(t)]
    target = {t for t in g2.triples if _has_bnode(t)}

    def consistent(mapping: dict) -> bool:
        for s, p, o in rest1:
            ms = mapping.get(s, s) if isinstance(s, BlankNode) else s
            mo = mapping.get(o, o) if isinstance(o, BlankNode) else o
            if (isinstance(s, BlankNode) and s not in mapping) or (
                isinstance(o, BlankNode) and o not in mapping
            ):
                continue
            if Triple(ms, p, mo) not in target:
                return False
        return True

    def search(i: int, mapping: dict, used: set) -> bool:
        if i == len(order):
            return True
        b = order[i]
        for cand in by_colour[c1[b]]:
            if cand in used:
                continue
            mapping[b] = cand
            used.add(cand)
            if consistent(mapping) and search(i + 1, mapping, used):
                return True
            del mapping[b]
            used.discard(cand)
        return False

    return search(0, {}, set())


def _has_bnode(t: Triple) -> bool:
    return isinstance(t.subject, BlankNode) or isinstance(t.object, BlankNode)
