"""Immutable in-memory triple collection with pattern matching."""

from __future__ import annotations

from collections import defaultdict
from typing import Iterable, Iterator, Mapping, Optional

from .terms import Iri, Term, Triple, make_triple, triple_key

DEFAULT_PREFIXES = {
    "rdf": "http://www.w3.org/1999/02/22-rdf-syntax-ns#",
    "rdfs": "http://www.w3.org/2000/01/rdf-schema#",
    "xsd": "http://www.w3.org/2001/XMLSchema#",
}


class Graph:
    """A set of triples plus a prefix map.

    Construction is the only mutation point. All query methods return lists
    sorted by the N-Triples form of (subject, predicate, object), so callers
    get a stable order regardless of insertion order.
    """

    __slots__ = ("_triples", "_prefixes", "_spo", "_pos", "_osp", "_sorted")

    def __init__(
        self,
        triples: Iterable[Triple] = (),
        prefixes: Optional[Mapping[str, str]] = None,
    ) -> None:
        checked = set()
        for t in triples:
            if not isinstance(t, Triple):
                t = make_triple(*t)
            checked.add(t)
        self._triples: frozenset[Triple] = frozenset(checked)
        self._prefixes: dict[str, str] = dict(prefixes or {})
        self._spo = None
        self._pos = None
        self._osp = None
        self._sorted: Optional[list[Triple]] = None

    @property
    def triples(self) -> frozenset[Triple]:
        return self._triples

    @property
    def prefixes(self) -> dict[str, str]:
        return dict(self._prefixes)

    def __len__(self) -> int:
        return len(self._triples)

    def __iter__(self) -> Iterator[Triple]:
        return iter(self.sorted_triples())

    def __contains__(self, t: object) -> bool:
        return t in self._triples

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self._triples == other._triples

    def __hash__(self) -> int:
        return hash(self._triples)

    def __repr__(self) -> str:
        return f"Graph({len(self)} triples)"

    def sorted_triples(self) -> list[Triple]:
        if self._sorted is None:
            self._sorted = sorted(self._triples, key=triple_key)
        return list(self._sorted)

    def _build(self) -> None:
        spo: dict = defaultdict(lambda: defaultdict(set))
        pos: dict = defaultdict(lambda: defaultdict(set))
        osp: dict = defaultdict(lambda: defaultdict(set))
        for s, p, o in self._triples:
            spo[s][p].add(o)
            pos[p][o].add(s)
            osp[o][s].add(p)
        self._spo, self._pos, self._osp = spo, pos, osp

    def _raw(self, s, p, o) -> Iterable[Triple]:
        if self._spo is None:
            self._build()
        spo, pos, osp = self._spo, self._pos, self._osp
        if s is not None:
            by_p = spo.get(s)
            if not by_p:
                return ()
            if p is not None:
                objs = by_p.get(p, ())
                if o is not None:
                    return (Triple(s, p, o),) if o in objs else ()
                return (Triple(s, p, x) for x in objs)
            if o is not None:
                return (Triple(s, x, o) for x in osp.get(o, {}).get(s, ()))
            return (Triple(s, q, x) for q, objs in by_p.items() for x in objs)
        if p is not None:
            by_o = pos.get(p)
            if not by_o:
                return ()
            if o is not None:
                return (Triple(x, p, o) for x in by_o.get(o, ()))
            return (Triple(x, p, y) for y, subs in by_o.items() for x in subs)
        if o is not None:
            by_s = osp.get(o)
            if not by_s:
                return ()
            return (Triple(x, q, o) for x, preds in by_s.items() for q in preds)
        return self._triples

    def match(
        self,
        s: Optional[Term] = None,
        p: Optional[Term] = None,
        o: Optional[Term] = None,
    ) -> list[Triple]:
        """Triples matching a pattern; None is a wildcard."""
        if s is None and p is None and o is None:
            return self.sorted_triples()
        return sorted(self._raw(s, p, o), key=triple_key)

    def objects(self, s: Term, p: Iri) -> list[Term]:
        return sorted((t.object for t in self._raw(s, p, None)), key=lambda x: x.n3())

    def subjects(self, p: Iri, o: Term) -> list[Term]:
        return sorted((t.subject for t in self._raw(None, p, o)), key=lambda x: x.n3())

    def value(self, s: Term, p: Iri) -> Optional[Term]:
        objs = self.objects(s, p)
        return objs[0] if objs else None

    def has(self, s=None, p=None, o=None) -> bool:
        for _ in self._raw(s, p, o):
            return True
        return False

    def predicate_objects(self, s: Term) -> dict[Iri, set[Term]]:
        """Unsorted view of the outgoing edges of one subject."""
        if self._spo is None:
            self._build()
        by_p = self._spo.get(s)
        return {p: set(objs) for p, objs in by_p.items()} if by_p else {}

    def union(self, other: "Graph | Iterable[Triple]") -> "Graph":
        prefixes = dict(self._prefixes)
        if isinstance(other, Graph):
            for k, v in other._prefixes.items():
                prefixes.setdefault(k, v)
            extra = other._triples
        else:
            extra = other
        return Graph(self._triples.union(extra), prefixes)

    __or__ = union

    def difference(self, other: "Graph") -> "Graph":
        return Graph(self._triples - other._triples, self._prefixes)

    def filter(self, keep) -> "Graph":
        return Graph((t for t in self._triples if keep(t)), self._prefixes)

    def with_prefixes(self, prefixes: Mapping[str, str]) -> "Graph":
        merged = dict(self._prefixes)
        merged.update(prefixes)
        return Graph(self._triples, merged)


def match(g: Graph, s=None, p=None, o=None) -> list[Triple]:
    return g.match(s, p, o)
