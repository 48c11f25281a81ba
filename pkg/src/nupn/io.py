"""Line-oriented net format, document model and report rendering.

::

    net nu fig1
    # comment
    place p1
    trans t
    arc p1 -> t x y
    arc t -> q1 x nu1
    marking p1 = {a:1, b:1}

Kinds are ``nu``, ``pt``, ``inhibitor`` and ``reset``. On ``nu`` arcs the
variables are listed with repetition for multiplicity. On the other kinds an
arc is weighted: no token means weight 1, otherwise repeated identifiers or
a single integer. ``inhibit p -> t`` and ``reset p -> t`` add the special
arcs. In markings ``.`` is the black token and ``_<n>`` denotes the engine's
name number ``n``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .net import DOT, Firing, Marking, NuNet, PTNet, embed_pt, is_fresh
from .reductions import InhibitorNet, ResetNet, Translation, inhibitor_to_nu, reset_to_nu

KINDS = ("nu", "pt", "inhibitor", "reset")

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_NAME = re.compile(r"\.|[A-Za-z_][A-Za-z0-9_]*")
_GENERATED = re.compile(r"_(\d+)")
_MARKING = re.compile(r"marking\s+(\S+)\s*=\s*\{(.*)\}\s*$")
_FIRE = re.compile(r"fire\s+(\S+)\s*\{(.*)\}\s*$")


class ParseError(ValueError):
    def __init__(self, message, line, column=1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.message = message
        self.line = line
        self.column = column


@dataclass(frozen=True)
class Arc:
    src: str
    dst: str
    vars: tuple = ()
    weight: int = 1


@dataclass
class NetDocument:
    kind: str
    name: str
    places: list = field(default_factory=list)
    transitions: list = field(default_factory=list)
    arcs: list = field(default_factory=list)
    inhibitors: list = field(default_factory=list)
    resets: list = field(default_factory=list)
    marking: dict = field(default_factory=dict)  # place -> {name: count}
    comments: list = field(default_factory=list)


# -- parsing ------------------------------------------------------------------

def _tokens(line):
    return [(m.group(), m.start() + 1) for m in re.finditer(r"\S+", line)]


def _parse_bag(body, lineno, col0, allow_names=True):
    bag = {}
    body_stripped = body.strip()
    if not body_stripped:
        return bag
    pos = 0
    for part in body.split(","):
        col = col0 + pos + (len(part) - len(part.lstrip()))
        pos += len(part) + 1
        item = part.strip()
        m = re.fullmatch(r"(\S+)\s*:\s*(\d+)", item)
        if not m or not _NAME.fullmatch(m.group(1)):
            raise ParseError(f"expected name:count, got {item!r}", lineno, col)
        name, count = m.group(1), int(m.group(2))
        if not allow_names and name != ".":
            raise ParseError(f"only '.' tokens are allowed here, got {name!r}", lineno, col)
        if name in bag:
            raise ParseError(f"name {name} listed twice", lineno, col)
        if count:
            bag[name] = count
    return bag


def parse(text: str) -> NetDocument:
    doc = None
    declared = {}
    seen_arcs = set()
    pending = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            (pending if doc is None else doc.comments).append(line[1:].strip())
            continue
        indent = len(raw) - len(raw.lstrip())
        toks = [(t, c + indent) for t, c in _tokens(line)]
        word = toks[0][0]
        if doc is None:
            if word != "net":
                raise ParseError("expected 'net <kind> <name>' header", lineno, toks[0][1])
            if len(toks) != 3:
                raise ParseError("expected 'net <kind> <name>'", lineno, toks[0][1])
            if toks[1][0] not in KINDS:
                raise ParseError(f"unknown kind {toks[1][0]!r}", lineno, toks[1][1])
            doc = NetDocument(toks[1][0], toks[2][0])
            doc.comments.extend(pending)
            continue
        if word in ("place", "trans"):
            if len(toks) != 2 or not _IDENT.fullmatch(toks[1][0]):
                raise ParseError(f"expected '{word} <identifier>'", lineno, toks[0][1])
            ident = toks[1][0]
            if ident in declared:
                raise ParseError(f"{ident} declared twice", lineno, toks[1][1])
            declared[ident] = word
            (doc.places if word == "place" else doc.transitions).append(ident)
        elif word in ("arc", "inhibit", "reset"):
            _parse_arc(doc, declared, seen_arcs, word, toks, lineno)
        elif word == "marking":
            m = _MARKING.match(line)
            if not m:
                raise ParseError("expected 'marking <place> = {name:count, ...}'", lineno, toks[0][1])
            place = m.group(1)
            if declared.get(place) != "place":
                raise ParseError(f"undeclared place {place}", lineno, toks[1][1])
            if place in doc.marking:
                raise ParseError(f"marking of {place} given twice", lineno, toks[1][1])
            col0 = indent + m.start(2) + 1
            bag = _parse_bag(m.group(2), lineno, col0, allow_names=doc.kind == "nu")
            doc.marking[place] = bag
        else:
            raise ParseError(f"unknown statement {word!r}", lineno, toks[0][1])
    if doc is None:
        raise ParseError("empty document", 1)
    doc.marking = {p: b for p, b in doc.marking.items() if b}
    return doc


def _parse_arc(doc, declared, seen, word, toks, lineno):
    if len(toks) < 4 or toks[2][0] != "->":
        raise ParseError(f"expected '{word} <src> -> <dst> ...'", lineno, toks[0][1])
    (src, scol), (dst, dcol) = toks[1], toks[3]
    for ident, col in ((src, scol), (dst, dcol)):
        if ident not in declared:
            raise ParseError(f"undeclared reference {ident}", lineno, col)
    kinds = (declared[src], declared[dst])
    if kinds not in (("place", "trans"), ("trans", "place")):
        raise ParseError("an arc must join a place and a transition", lineno, scol)
    rest = toks[4:]
    if word != "arc":
        wanted = "inhibitor" if word == "inhibit" else "reset"
        if doc.kind != wanted:
            raise ParseError(f"'{word}' arcs are not allowed in a {doc.kind} net", lineno, toks[0][1])
        if kinds != ("place", "trans") or rest:
            raise ParseError(f"expected '{word} <place> -> <trans>'", lineno, toks[0][1])
        arcs = doc.inhibitors if word == "inhibit" else doc.resets
        if (src, dst) in arcs:
            raise ParseError(f"duplicate {word} arc", lineno, toks[0][1])
        arcs.append((src, dst))
        return
    if (src, dst) in seen:
        raise ParseError(f"duplicate arc {src} -> {dst}", lineno, toks[0][1])
    seen.add((src, dst))
    if doc.kind == "nu":
        if not rest:
            raise ParseError("a nu arc needs at least one variable", lineno, dcol)
        for v, col in rest:
            if not _IDENT.fullmatch(v):
                raise ParseError(f"bad variable {v!r}", lineno, col)
            if kinds[0] == "place" and is_fresh(v):
                raise ParseError("fresh variable on input arc", lineno, col)
        doc.arcs.append(Arc(src, dst, tuple(v for v, _ in rest)))
        return
    if len(rest) == 1 and rest[0][0].isdigit():
        weight = int(rest[0][0])
        if weight < 1:
            raise ParseError("arc weight must be positive", lineno, rest[0][1])
    else:
        for v, col in rest:
            if not _IDENT.fullmatch(v):
                raise ParseError(f"bad arc annotation {v!r}", lineno, col)
        weight = max(len(rest), 1)
    doc.arcs.append(Arc(src, dst, (), weight))


def parse_marking(doc: NetDocument, text: str) -> dict:
    """Parse a target file: ``marking`` lines and comments only."""
    out = {}
    allowed = set(doc.places)
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        m = _MARKING.match(line)
        if not m:
            if line.startswith("net "):
                continue
            raise ParseError("expected 'marking <place> = {...}'", lineno)
        place = m.group(1)
        if place not in allowed:
            raise ParseError(f"undeclared place {place}", lineno)
        if place in out:
            raise ParseError(f"marking of {place} given twice", lineno)
        indent = len(raw) - len(raw.lstrip())
        out[place] = _parse_bag(m.group(2), lineno, indent + m.start(2) + 1,
                                allow_names=doc.kind == "nu")
    return {p: b for p, b in out.items() if b}


# -- rendering ----------------------------------------------------------------

def _name_key(s):
    return (s != ".", s)


def _render_bag(bag):
    return "{" + ", ".join(f"{a}:{bag[a]}" for a in sorted(bag, key=_name_key)) + "}"


def render(doc: NetDocument) -> str:
    lines = [f"net {doc.kind} {doc.name}"]
    lines += [f"# {c}" if c else "#" for c in doc.comments]
    lines += [f"place {p}" for p in doc.places]
    lines += [f"trans {t}" for t in doc.transitions]
    for a in doc.arcs:
        if doc.kind == "nu":
            lines.append(f"arc {a.src} -> {a.dst} {' '.join(a.vars)}")
        elif a.weight == 1:
            lines.append(f"arc {a.src} -> {a.dst}")
        else:
            lines.append(f"arc {a.src} -> {a.dst} {a.weight}")
    lines += [f"inhibit {p} -> {t}" for p, t in doc.inhibitors]
    lines += [f"reset {p} -> {t}" for p, t in doc.resets]
    for p in doc.places:
        if doc.marking.get(p):
            lines.append(f"marking {p} = {_render_bag(doc.marking[p])}")
    return "\n".join(lines) + "\n"


# -- names and models -----------------------------------------------------------

class NameTable:
    """Bijection between written names and engine names (ints)."""

    def __init__(self, written=()):
        self.to_id = {".": DOT}
        self.to_str = {DOT: "."}
        reserved = set()
        for s in written:
            g = _GENERATED.fullmatch(s)
            if g:
                reserved.add(int(g.group(1)))
                self.to_id[s] = int(g.group(1))
                self.to_str[int(g.group(1))] = s
        nxt = 1
        for s in sorted(set(written)):
            if s in self.to_id:
                continue
            while nxt in reserved:
                nxt += 1
            self.to_id[s] = nxt
            self.to_str[nxt] = s
            nxt += 1

    def id(self, s: str) -> int:
        if s not in self.to_id:
            g = _GENERATED.fullmatch(s)
            i = int(g.group(1)) if g else max(self.to_str) + 1
            if i in self.to_str:
                raise ValueError(f"name {s} clashes with {self.to_str[i]}")
            self.to_id[s] = i
            self.to_str[i] = s
        return self.to_id[s]

    def name(self, i: int) -> str:
        return self.to_str.get(i, f"_{i}")


@dataclass
class Model:
    """A document loaded as a name net, translated from a source net when needed."""

    doc: NetDocument
    net: NuNet
    initial: Marking
    names: NameTable
    translation: Translation | None = None

    def marking(self, bags: dict) -> Marking:
        if self.translation is not None:
            return self.translation.marking({p: b.get(".", 0) for p, b in bags.items()})
        if self.doc.kind == "pt":
            src = {p: b.get(".", 0) for p, b in bags.items()}
            content = {p: {DOT: k} for p, k in src.items() if k}
            if "_dot" in self.net.place_index and "_dot" not in self.doc.places:
                content["_dot"] = {DOT: 1}
            return self.net.marking(content)
        return self.net.marking({p: {self.names.id(a): k for a, k in b.items()}
                                 for p, b in bags.items()})

    def render_marking(self, m: Marking) -> str:
        lines = []
        for i, p in enumerate(self.net.places):
            bag = {}
            for a in m.tokens[i]:
                s = self.names.name(a)
                bag[s] = bag.get(s, 0) + 1
            if bag:
                lines.append(f"marking {p} = {_render_bag(bag)}")
        return "\n".join(lines)


def _source_net(doc):
    flow = {(a.src, a.dst): a.weight for a in doc.arcs}
    if doc.kind == "inhibitor":
        return InhibitorNet(doc.places, doc.transitions, flow, frozenset(doc.inhibitors))
    return ResetNet(doc.places, doc.transitions, flow, frozenset(doc.resets))


def load(doc: NetDocument) -> Model:
    if doc.kind == "nu":
        written = [a for bag in doc.marking.values() for a in bag]
        names = NameTable(written)
        net = NuNet(doc.places, doc.transitions, {(a.src, a.dst): a.vars for a in doc.arcs})
        initial = net.marking({p: {names.id(a): k for a, k in b.items()}
                               for p, b in doc.marking.items()})
        return Model(doc, net, initial, names)
    m0 = {p: b.get(".", 0) for p, b in doc.marking.items()}
    if doc.kind == "pt":
        pt = PTNet(tuple(doc.places), tuple(doc.transitions),
                   {(a.src, a.dst): a.weight for a in doc.arcs})
        net, initial = embed_pt(pt, m0)
        return Model(doc, net, initial, NameTable())
    source = _source_net(doc)
    tr = inhibitor_to_nu(source, m0) if doc.kind == "inhibitor" else reset_to_nu(source, m0)
    names = NameTable()
    for p, i in tr.table.items():
        names.to_id[f"a_{p}"] = i
        names.to_str[i] = f"a_{p}"
    return Model(doc, tr.net, tr.initial, names, tr)


def to_document(model: Model, name: str | None = None, comments=()) -> NetDocument:
    """The name-net document of a loaded model."""
    net = model.net
    doc = NetDocument("nu", name or model.doc.name, list(net.places), list(net.transitions))
    doc.comments = list(comments)
    doc.arcs = [Arc(s, d, label) for s, d, label in net.arcs()]
    for i, p in enumerate(net.places):
        bag = {}
        for a in model.initial.tokens[i]:
            s = model.names.name(a)
            bag[s] = bag.get(s, 0) + 1
        if bag:
            doc.marking[p] = bag
    return doc


# -- reports ----------------------------------------------------------------------

def render_firing(f: Firing, names: NameTable) -> str:
    inner = ",".join(f"{v}={names.name(a)}" for v, a in f.mode)
    return f"fire {f.transition} {{{inner}}}"


def parse_firings(text: str, names: NameTable) -> list[Firing]:
    out = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line.startswith("fire "):
            continue
        m = _FIRE.match(line)
        if not m:
            raise ParseError("expected 'fire <trans> {var=name,...}'", lineno)
        sigma = {}
        body = m.group(2).strip()
        for part in body.split(",") if body else ():
            var, _, val = part.partition("=")
            if not _IDENT.fullmatch(var.strip()) or not _NAME.fullmatch(val.strip()):
                raise ParseError(f"bad binding {part.strip()!r}", lineno)
            sigma[var.strip()] = names.id(val.strip())
        out.append(Firing.of(m.group(1), sigma))
    return out


def render_result(result, names: NameTable) -> str:
    """Fixed report layout: ``verdict:``, ``stats:``, optional ``pumped:``, then ``witness:``."""
    lines = [f"verdict: {result.verdict}"]
    if hasattr(result, "basis_size"):
        lines.append(f"stats: basis={result.basis_size} iterations={result.iterations}")
    else:
        lines.append(f"stats: nodes={result.nodes} edges={result.edges} "
                     f"width={result.width} depth={result.depth}")
        if result.pump is not None:
            lines.append(f"pumped: {result.pump[0]} {result.pump[1]}")
    if result.witness is None:
        lines.append("witness: none")
    else:
        lines.append("witness:")
        lines += [render_firing(f, names) for f in result.witness]
    return "\n".join(lines) + "\n"
