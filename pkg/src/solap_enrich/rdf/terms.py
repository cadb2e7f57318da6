"""RDF terms and triples.

Terms are small frozen value objects. Every term knows its N-Triples form,
which doubles as the sort key for deterministic output.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional, Union

XSD = "http://www.w3.org/2001/XMLSchema#"
RDF = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"

_NT_ESCAPES = {
    "\\": "\\\\",
    '"': '\\"',
    "\n": "\\n",
    "\r": "\\r",
    "\t": "\\t",
    "\b": "\\b",
    "\f": "\\f",
}


def escape_string(text: str) -> str:
    """Escape a lexical form for use inside a double-quoted literal."""
    if not any(ch in _NT_ESCAPES for ch in text):
        return text
    return "".join(_NT_ESCAPES.get(ch, ch) for ch in text)


@dataclass(frozen=True, slots=True, order=True)
class Iri:
    value: str

    def __post_init__(self) -> None:
        if not self.value or any(ch.isspace() for ch in self.value):
            raise ValueError(f"invalid IRI: {self.value!r}")

    def n3(self) -> str:
        return f"<{self.value}>"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True, slots=True, order=True)
class BlankNode:
    label: str

    def __post_init__(self) -> None:
        if not self.label:
            raise ValueError("blank node label must be non-empty")

    def n3(self) -> str:
        return f"_:{self.label}"

    def __str__(self) -> str:
        return self.n3()


XSD_STRING = Iri(XSD + "string")
RDF_LANGSTRING = Iri(RDF + "langString")


@dataclass(frozen=True, slots=True)
class Literal:
    lexical: str
    datatype: Iri = XSD_STRING
    lang: Optional[str] = None

    def __post_init__(self) -> None:
        if self.lang is not None:
            object.__setattr__(self, "lang", self.lang.lower())
            object.__setattr__(self, "datatype", RDF_LANGSTRING)

    def n3(self) -> str:
        body = f'"{escape_string(self.lexical)}"'
        if self.lang is not None:
            return f"{body}@{self.lang}"
        if self.datatype == XSD_STRING:
            return body
        return f"{body}^^{self.datatype.n3()}"

    def __str__(self) -> str:
        return self.lexical


Term = Union[Iri, BlankNode, Literal]
Subject = Union[Iri, BlankNode]


class Triple(NamedTuple):
    subject: Subject
    predicate: Iri
    object: Term

    def n3(self) -> str:
        return f"{self.subject.n3()} {self.predicate.n3()} {self.object.n3()} ."


def term_key(term: Term) -> str:
    return term.n3()


def triple_key(t: Triple) -> tuple[str, str, str]:
    return (t.subject.n3(), t.predicate.n3(), t.object.n3())


def make_triple(s: Term, p: Term, o: Term) -> Triple:
    if not isinstance(p, Iri):
        raise TypeError(f"predicate must be an IRI, got {p!r}")
    if isinstance(s, Literal):
        raise TypeError(f"subject cannot be a literal: {s!r}")
    return Triple(s, p, o)
