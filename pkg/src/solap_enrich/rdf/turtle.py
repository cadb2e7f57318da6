"""Turtle and N-Triples reader and writer.

The reader is a hand-rolled recursive-descent parser covering the Turtle 1.1
grammar used by data-cube dumps: prefixes and base, predicate and object
lists, blank-node property lists, collections, typed and language-tagged
literals, and the numeric/boolean shorthands. The writer emits sorted,
prefix-compacted output so equal graphs serialize to identical bytes.
"""

from __future__ import annotations

import re
from typing import Optional
from urllib.parse import urljoin

from .graph import Graph
from .terms import (
    RDF,
    XSD,
    XSD_STRING,
    BlankNode,
    Iri,
    Literal,
    Term,
    Triple,
    escape_string,
    triple_key,
)

RDF_TYPE = Iri(RDF + "type")
RDF_FIRST = Iri(RDF + "first")
RDF_REST = Iri(RDF + "rest")
RDF_NIL = Iri(RDF + "nil")
XSD_INTEGER = Iri(XSD + "integer")
XSD_DECIMAL = Iri(XSD + "decimal")
XSD_DOUBLE = Iri(XSD + "double")
XSD_BOOLEAN = Iri(XSD + "boolean")


class RdfSyntaxError(ValueError):
    def __init__(self, message: str, line: int, column: int) -> None:
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class UnknownPrefixError(RdfSyntaxError):
    pass


_PN_CHARS_BASE = (
    "A-Za-z\u00C0-\u00D6\u00D8-\u00F6\u00F8-\u02FF\u0370-\u037D\u037F-\u1FFF"
    "\u200C-\u200D\u2070-\u218F\u2C00-\u2FEF\u3001-\uD7FF\uF900-\uFDCF\uFDF0-\uFFFD"
)
_PN_CHARS_U = _PN_CHARS_BASE + "_"
_PN_CHARS = _PN_CHARS_U + r"\-0-9\u00B7\u0300-\u036F\u203F-\u2040"
_PLX = r"%[0-9A-Fa-f]{2}|\\[_~.\-!$&'()*+,;=/?#@%]"
_PN_PREFIX = rf"[{_PN_CHARS_BASE}](?:[{_PN_CHARS}.]*[{_PN_CHARS}])?"
_PN_LOCAL = (
    rf"(?:[{_PN_CHARS_U}:0-9]|{_PLX})"
    rf"(?:(?:[{_PN_CHARS}.:]|{_PLX})*(?:[{_PN_CHARS}:]|{_PLX}))?"
)
_PNAME_RE = re.compile(rf"((?:{_PN_PREFIX})?):({_PN_LOCAL})?")
_BNODE_RE = re.compile(
    rf"_:([{_PN_CHARS_U}0-9](?:[{_PN_CHARS}.]*[{_PN_CHARS}])?)"
)
_IRI_RE = re.compile(r'<([^<>"{}|^`\\\x00-\x20]|\\u[0-9A-Fa-f]{4}|\\U[0-9A-Fa-f]{8})*>')
_LANG_RE = re.compile(r"@([a-zA-Z]+(?:-[a-zA-Z0-9]+)*)")
_NUMBER_RE = re.compile(
    r"[+-]?(?:(?:[0-9]+\.[0-9]*|\.[0-9]+|[0-9]+)[eE][+-]?[0-9]+"
    r"|(?P<dec>[0-9]*\.[0-9]+)|(?P<int>[0-9]+))"
)
_UCHAR_RE = re.compile(r"\\u([0-9A-Fa-f]{4})|\\U([0-9A-Fa-f]{8})")
_ECHAR = {"t": "\t", "b": "\b", "n": "\n", "r": "\r", "f": "\f", '"': '"', "'": "'", "\\": "\\"}
_LOCAL_ESC_RE = re.compile(r"\\([_~.\-!$&'()*+,;=/?#@%])")


def _unescape_uchar(text: str) -> str:
    return _UCHAR_RE.sub(lambda m: chr(int(m.group(1) or m.group(2), 16)), text)


class _Parser:
    def __init__(self, text: str, ntriples: bool, anon_prefix: str, base: str) -> None:
        self.text = text
        self.pos = 0
        self.ntriples = ntriples
        self.prefixes: dict[str, str] = {}
        self.base = base
        self.triples: list[Triple] = []
        self.anon_prefix = anon_prefix
        self.anon_count = 0
        self.explicit_labels: set[str] = set()

    # -- positions and errors -------------------------------------------------

    def _where(self, pos: Optional[int] = None) -> tuple[int, int]:
        pos = self.pos if pos is None else pos
        line = self.text.count("\n", 0, pos) + 1
        col = pos - (self.text.rfind("\n", 0, pos) + 1) + 1
        return line, col

    def error(self, message: str, pos: Optional[int] = None, cls=RdfSyntaxError):
        line, col = self._where(pos)
        return cls(message, line, col)

    # -- lexical helpers ------------------------------------------------------

    def skip_ws(self) -> None:
        text, n = self.text, len(self.text)
        pos = self.pos
        while pos < n:
            ch = text[pos]
            if ch in " \t\r\n":
                pos += 1
            elif ch == "#":
                nl = text.find("\n", pos)
                pos = n if nl < 0 else nl + 1
            else:
                break
        self.pos = pos

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str) -> None:
        if self.peek() != ch:
            found = self.text[self.pos] if self.pos < len(self.text) else "end of input"
            raise self.error(f"expected {ch!r}, found {found!r}")
        self.pos += 1

    def keyword(self, word: str, case_insensitive: bool = False) -> bool:
        self.skip_ws()
        end = self.pos + len(word)
        chunk = self.text[self.pos:end]
        if (chunk.lower() == word.lower()) if case_insensitive else chunk == word:
            nxt = self.text[end:end + 1]
            if not nxt or not (nxt.isalnum() or nxt in "_:-"):
                self.pos = end
                return True
        return False

    def new_anon(self) -> BlankNode:
        self.anon_count += 1
        return BlankNode(f"{self.anon_prefix}{self.anon_count}")

    # -- document -------------------------------------------------------------

    def parse(self) -> None:
        while self.peek():
            if self.ntriples:
                self.ntriples_statement()
            else:
                self.statement()

    def statement(self) -> None:
        start = self.pos
        if self.keyword("@prefix"):
            self.prefix_decl()
            self.expect(".")
        elif self.keyword("@base"):
            self.base_decl()
            self.expect(".")
        elif self.keyword("PREFIX", True):
            self.prefix_decl()
        elif self.keyword("BASE", True):
            self.base_decl()
        else:
            self.pos = start
            self.triples_block()
            self.expect(".")

    def prefix_decl(self) -> None:
        self.skip_ws()
        m = re.compile(rf"((?:{_PN_PREFIX})?):").match(self.text, self.pos)
        if not m:
            raise self.error("expected prefix name")
        self.pos = m.end()
        self.prefixes[m.group(1)] = self.iriref().value

    def base_decl(self) -> None:
        self.base = self.iriref().value

    def triples_block(self) -> None:
        ch = self.peek()
        if ch == "[":
            subject = self.blank_node_property_list()
            if self.peek() not in (".", ""):
                self.predicate_object_list(subject)
            return
        subject = self.subject()
        self.predicate_object_list(subject)

    def subject(self) -> Term:
        ch = self.peek()
        if ch == "<":
            return self.iriref()
        if ch == "(":
            return self.collection()
        if self.text.startswith("_:", self.pos):
            return self.blank_label()
        if ch == "[":
            return self.blank_node_property_list()
        start = self.pos
        term = self.pname()
        if term is None:
            raise self.error("expected subject", start)
        return term

    def predicate_object_list(self, subject: Term) -> None:
        while True:
            pred = self.verb()
            self.object_list(subject, pred)
            if self.peek() != ";":
                return
            while self.peek() == ";":
                self.pos += 1
            if self.peek() in (".", "]", ""):
                return

    def verb(self) -> Iri:
        self.skip_ws()
        if self.keyword("a"):
            return RDF_TYPE
        if self.peek() == "<":
            return self.iriref()
        start = self.pos
        term = self.pname()
        if term is None:
            raise self.error("expected predicate", start)
        return term

    def object_list(self, subject: Term, pred: Iri) -> None:
        while True:
            obj = self.object()
            self.triples.append(Triple(subject, pred, obj))
            if self.peek() != ",":
                return
            self.pos += 1

    def object(self) -> Term:
        ch = self.peek()
        if ch == "<":
            return self.iriref()
        if ch in "\"'":
            return self.literal()
        if ch == "[":
            return self.blank_node_property_list()
        if ch == "(":
            return self.collection()
        if self.text.startswith("_:", self.pos):
            return self.blank_label()
        if ch and (ch.isdigit() or ch in "+-."):
            m = _NUMBER_RE.match(self.text, self.pos)
            if m:
                self.pos = m.end()
                lex = m.group(0)
                if m.group("int") is not None:
                    return Literal(lex, XSD_INTEGER)
                if m.group("dec") is not None:
                    return Literal(lex, XSD_DECIMAL)
                return Literal(lex, XSD_DOUBLE)
        if self.keyword("true"):
            return Literal("true", XSD_BOOLEAN)
        if self.keyword("false"):
            return Literal("false", XSD_BOOLEAN)
        start = self.pos
        term = self.pname()
        if term is None:
            raise self.error("expected object", start)
        return term

    def blank_node_property_list(self) -> BlankNode:
        self.expect("[")
        node = self.new_anon()
        if self.peek() == "]":
            self.pos += 1
            return node
        self.predicate_object_list(node)
        self.expect("]")
        return node

    def collection(self) -> Term:
        self.expect("(")
        items = []
        while self.peek() != ")":
            if not self.peek():
                raise self.error("unterminated collection")
            items.append(self.object())
        self.pos += 1
        if not items:
            return RDF_NIL
        head = node = self.new_anon()
        for i, item in enumerate(items):
            self.triples.append(Triple(node, RDF_FIRST, item))
            nxt = self.new_anon() if i + 1 < len(items) else RDF_NIL
            self.triples.append(Triple(node, RDF_REST, nxt))
            node = nxt
        return head

    # -- terminals ------------------------------------------------------------

    def iriref(self) -> Iri:
        self.skip_ws()
        m = _IRI_RE.match(self.text, self.pos)
        if not m:
            raise self.error("malformed IRI")
        self.pos = m.end()
        value = _unescape_uchar(m.group(0)[1:-1])
        if self.base and not re.match(r"[A-Za-z][A-Za-z0-9+.\-]*:", value):
            value = urljoin(self.base, value)
        if not value:
            raise self.error("empty IRI", m.start())
        return Iri(value)

    def pname(self) -> Optional[Iri]:
        if self.ntriples:
            return None
        m = _PNAME_RE.match(self.text, self.pos)
        if not m:
            return None
        prefix, local = m.group(1), m.group(2) or ""
        if prefix not in self.prefixes:
            raise self.error(f"unknown prefix {prefix!r}", cls=UnknownPrefixError)
        self.pos = m.end()
        local = _LOCAL_ESC_RE.sub(r"\1", local)
        return Iri(self.prefixes[prefix] + local)

    def blank_label(self) -> BlankNode:
        m = _BNODE_RE.match(self.text, self.pos)
        if not m:
            raise self.error("malformed blank node label")
        self.pos = m.end()
        self.explicit_labels.add(m.group(1))
        return BlankNode(m.group(1))

    def literal(self) -> Literal:
        lexical = self.string()
        if self.text.startswith("@", self.pos):
            m = _LANG_RE.match(self.text, self.pos)
            if not m:
                raise self.error("malformed language tag")
            self.pos = m.end()
            return Literal(lexical, lang=m.group(1))
        if self.text.startswith("^^", self.pos):
            self.pos += 2
            if self.text.startswith("<", self.pos):
                dt = self.iriref()
            else:
                start = self.pos
                dt = self.pname()
                if dt is None:
                    raise self.error("expected datatype IRI", start)
            return Literal(lexical, dt)
        return Literal(lexical, XSD_STRING)

    def string(self) -> str:
        text = self.text
        start = self.pos
        quote = text[start]
        if text.startswith(quote * 3, start) and not self.ntriples:
            delim, pos, long = quote * 3, start + 3, True
        else:
            delim, pos, long = quote, start + 1, False
        if self.ntriples and quote != '"':
            raise self.error("N-Triples literals use double quotes")
        out: list[str] = []
        n = len(text)
        while True:
            if pos >= n:
                raise self.error("unterminated string literal", start)
            ch = text[pos]
            if ch == "\\":
                nxt = text[pos + 1:pos + 2]
                if nxt in _ECHAR:
                    out.append(_ECHAR[nxt])
                    pos += 2
                elif nxt == "u" and re.fullmatch(r"[0-9A-Fa-f]{4}", text[pos + 2:pos + 6]):
                    out.append(chr(int(text[pos + 2:pos + 6], 16)))
                    pos += 6
                elif nxt == "U" and re.fullmatch(r"[0-9A-Fa-f]{8}", text[pos + 2:pos + 10]):
                    out.append(chr(int(text[pos + 2:pos + 10], 16)))
                    pos += 10
                else:
                    raise self.error("invalid escape sequence", pos)
                continue
            if text.startswith(delim, pos):
                if long and text.startswith(quote, pos + 3):
                    # a quote run longer than the delimiter belongs to the content
                    out.append(ch)
                    pos += 1
                    continue
                self.pos = pos + len(delim)
                return "".join(out)
            if not long and ch in "\r\n":
                raise self.error("newline in short string literal", pos)
            out.append(ch)
            pos += 1

    # -- N-Triples ------------------------------------------------------------

    def ntriples_statement(self) -> None:
        ch = self.peek()
        if ch == "<":
            s: Term = self.iriref()
        elif self.text.startswith("_:", self.pos):
            s = self.blank_label()
        else:
            raise self.error("expected subject")
        if self.peek() != "<":
            raise self.error("expected predicate IRI")
        p = self.iriref()
        ch = self.peek()
        if ch == "<":
            o: Term = self.iriref()
        elif self.text.startswith("_:", self.pos):
            o = self.blank_label()
        elif ch == '"':
            o = self.literal()
        else:
            raise self.error("expected object")
        self.expect(".")
        self.triples.append(Triple(s, p, o))


def parse_rdf(text: str, format: str = "turtle", base: str = "") -> Graph:
    """Parse a Turtle or N-Triples document into a Graph.

    Anonymous blank nodes get labels in document order. If such a label would
    clash with an explicit one, parsing restarts with a different stem.
    """
    fmt = format.lower()
    if fmt in ("ttl", "turtle"):
        ntriples = False
    elif fmt in ("nt", "ntriples", "n-triples"):
        ntriples = True
    else:
        raise ValueError(f"unsupported RDF format: {format}")
    if text.startswith("\ufeff"):
        text = text[1:]
    stem = "b"
    while True:
        parser = _Parser(text, ntriples, stem, base)
        parser.parse()
        generated = {f"{stem}{i}" for i in range(1, parser.anon_count + 1)}
        if not generated & parser.explicit_labels:
            break
        stem += "x"
    return Graph(parser.triples, parser.prefixes)


# -- serialization ---------------------------------------------------------------

_LOCAL_SAFE = re.compile(r"[A-Za-z_][A-Za-z0-9_\-]*(?:\.[A-Za-z0-9_\-]+)*\Z")
_PREFIX_SAFE = re.compile(r"(?:[A-Za-z][A-Za-z0-9_\-]*)?\Z")


class _Compactor:
    def __init__(self, prefixes: dict[str, str]) -> None:
        usable = [
            (ns, pfx) for pfx, ns in prefixes.items() if _PREFIX_SAFE.match(pfx) and ns
        ]
        # longest namespace wins so nested vocabularies compact predictably
        self.namespaces = sorted(usable, key=lambda item: (-len(item[0]), item[1]))

    def iri(self, iri: Iri) -> str:
        value = iri.value
        for ns, pfx in self.namespaces:
            if value.startswith(ns):
                local = value[len(ns):]
                if local == "" or _LOCAL_SAFE.match(local):
                    return f"{pfx}:{local}"
        return iri.n3()

    def term(self, term: Term) -> str:
        if isinstance(term, Iri):
            return self.iri(term)
        if isinstance(term, Literal):
            body = f'"{escape_string(term.lexical)}"'
            if term.lang is not None:
                return f"{body}@{term.lang}"
            if term.datatype == XSD_STRING:
                return body
            return f"{body}^^{self.iri(term.datatype)}"
        return term.n3()


def _serialize_turtle(g: Graph) -> str:
    prefixes = g.prefixes
    lines = [f"@prefix {p}: <{ns}> ." for p, ns in sorted(prefixes.items())]
    comp = _Compactor(prefixes)
    triples = g.sorted_triples()
    if lines and triples:
        lines.append("")
    i = 0
    while i < len(triples):
        subject = triples[i].subject
        j = i
        while j < len(triples) and triples[j].subject == subject:
            j += 1
        block = triples[i:j]
        parts: list[str] = []
        k = 0
        while k < len(block):
            pred = block[k].predicate
            objs = []
            while k < len(block) and block[k].predicate == pred:
                objs.append(comp.term(block[k].object))
                k += 1
            verb = "a" if pred == RDF_TYPE else comp.iri(pred)
            parts.append(f"{verb} " + " ,\n        ".join(objs))
        lines.append(f"{comp.term(subject)} " + " ;\n    ".join(parts) + " .")
        lines.append("")
        i = j
    text = "\n".join(lines)
    return text if text.endswith("\n") else text + "\n"


def serialize_rdf(g: Graph, format: str = "turtle") -> str:
    """Serialize deterministically: sorted triples, stable prefix order."""
    fmt = format.lower()
    if fmt in ("ttl", "turtle"):
        return _serialize_turtle(g)
    if fmt in ("nt", "ntriples", "n-triples"):
        return "".join(
            t.n3() + "\n" for t in sorted(g.triples, key=triple_key)
        )
    raise ValueError(f"unsupported RDF format: {format}")


def format_for_path(path: str) -> str:
    return "ntriples" if path.lower().endswith(".nt") else "turtle"
