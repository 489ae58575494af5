"""Quadratic operad presentations: a small DSL, presets and relator normalization.

Grammar (the ``operad NAME { ... }`` wrapper is optional)::

    operad As {
      mode ns;
      generator m : arity 2, degree 0;
      relation m(m(1,2),3) - m(1,m(2,3));
    }

A relation is a rational combination of generator applications over numbered
leaves; ``lhs = rhs`` is read as ``lhs - rhs``. Comments run from ``#`` or
``//`` to the end of the line.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from fractions import Fraction

from . import trees as T
from .free_operad import (FreeOperad, Generator, GeneratorSet, OperadError, TreePolynomial,
                          monomial_degree)
from .kernels import rref
from .trees import Node, Tree

log = logging.getLogger(__name__)


class PresentationError(ValueError):
    """Syntax or semantic error, with a 1-based source location when known."""

    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        self.message = message
        self.line = line
        self.col = col
        where = f"line {line}, column {col}: " if line is not None else ""
        super().__init__(where + message)


@dataclass(frozen=True)
class Presentation:
    name: str
    gens: GeneratorSet
    relators: tuple[TreePolynomial, ...]
    mode: str = "ns"
    comments: tuple[str, ...] = ()

    @property
    def operad(self) -> FreeOperad:
        return FreeOperad(self.gens, self.mode)

    def to_opd(self) -> str:
        lines = [f"# {c}" for c in self.comments]
        lines += [f"operad {self.name} {{", f"  mode {self.mode};"]
        for g in self.gens:
            extra = f", degree {g.degree}" if g.degree else ""
            if g.symmetry != "none":
                extra += f", {g.symmetry}"
            lines.append(f"  generator {g.name} : arity {g.arity}{extra};")
        rank = self.gens.rank
        for r in self.relators:
            lines.append(f"  relation {r.to_text(rank)};")
        lines.append("}")
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class NormalizedRelator:
    leading: Tree
    tail: TreePolynomial

    @property
    def relator(self) -> TreePolynomial:
        return TreePolynomial.monomial(self.leading) - self.tail

    def rule_text(self, rank=None) -> str:
        return f"{T.to_text(self.leading)} -> {self.tail.to_text(rank)}"


# -- tokenizer ------------------------------------------------------------------

_TOKEN_RE = re.compile(r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>(?:\#|//)[^\n]*)
  | (?P<int>\d+)
  | (?P<name>[^\W\d][\w']*)
  | (?P<punct>[{}();,:*/+\-=])
""", re.VERBOSE | re.UNICODE)


@dataclass(frozen=True)
class _Tok:
    kind: str
    value: object
    line: int
    col: int


def _tokenize(text: str) -> list[_Tok]:
    out = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise PresentationError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        col = pos - line_start + 1
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind == "int":
            out.append(_Tok("int", int(m.group()), line, col))
        elif kind in ("name", "punct"):
            out.append(_Tok(kind, m.group(), line, col))
        pos = m.end()
    out.append(_Tok("eof", None, line, pos - line_start + 1))
    return out


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.pos = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.pos]

    def error(self, msg: str, tok: _Tok | None = None):
        tok = tok or self.tok
        raise PresentationError(msg, tok.line, tok.col)

    def accept(self, kind: str, value=None) -> _Tok | None:
        t = self.tok
        if t.kind == kind and (value is None or t.value == value):
            self.pos += 1
            return t
        return None

    def expect(self, kind: str, value=None, what: str | None = None) -> _Tok:
        t = self.accept(kind, value)
        if t is None:
            found = "end of input" if self.tok.kind == "eof" else repr(self.tok.value)
            self.error(f"expected {what or value or kind}, found {found}")
        return t

    # expressions -------------------------------------------------------------

    def expression(self) -> list[tuple[Fraction, Tree, _Tok]]:
        terms = self.signed_terms()
        if self.accept("punct", "="):
            terms += [(-c, m, t) for c, m, t in self.signed_terms()]
        return terms

    def signed_terms(self):
        terms = []
        sign = Fraction(1)
        if self.accept("punct", "-"):
            sign = Fraction(-1)
        else:
            self.accept("punct", "+")
        terms.append(self.term(sign))
        while True:
            if self.accept("punct", "+"):
                terms.append(self.term(Fraction(1)))
            elif self.accept("punct", "-"):
                terms.append(self.term(Fraction(-1)))
            else:
                return terms

    def term(self, sign: Fraction):
        start = self.tok
        coeff = Fraction(1)
        if self.tok.kind == "int":
            num = self.expect("int").value
            den = 1
            if self.accept("punct", "/"):
                den = self.expect("int", what="denominator").value
                if den == 0:
                    self.error("zero denominator", start)
            coeff = Fraction(num, den)
            self.accept("punct", "*")
        return sign * coeff, self.monomial(), start

    def monomial(self) -> Tree:
        name = self.expect("name", what="generator name")
        self.expect("punct", "(")
        kids = [self.argument()]
        while self.accept("punct", ","):
            kids.append(self.argument())
        self.expect("punct", ")")
        return Node(name.value, tuple(kids))

    def argument(self):
        t = self.accept("int")
        if t is not None:
            if t.value < 1:
                self.error("leaf labels start at 1", t)
            return t.value
        return self.monomial()


# -- semantic checks ------------------------------------------------------------

def _check_monomial(t: Tree, gens: GeneratorSet, tok: _Tok):
    for v in T.vertices(t):
        if v.gen not in gens:
            raise PresentationError(f"unknown generator {v.gen!r}", tok.line, tok.col)
        if gens[v.gen].arity != len(v.children):
            raise PresentationError(
                f"generator {v.gen!r} has arity {gens[v.gen].arity} but is applied to "
                f"{len(v.children)} inputs", tok.line, tok.col)
    labels = T.leaves(t)
    if sorted(labels) != list(range(1, len(labels) + 1)):
        raise PresentationError(f"leaves of {T.to_text(t)} must be 1..{len(labels)} each used once",
                                tok.line, tok.col)


def to_shuffle_form(t: Tree, gens: GeneratorSet) -> tuple[int, Tree]:
    """Rewrite a labelled monomial as ±(shuffle tree) using symmetry flags."""
    if isinstance(t, int):
        return 1, t
    sign = 1
    kids = []
    for c in t.children:
        s, k = to_shuffle_form(c, gens)
        sign *= s
        kids.append(k)
    mins = [T.min_label(k) for k in kids]
    if any(a > b for a, b in zip(mins, mins[1:])):
        g = gens[t.gen]
        if g.symmetry == "none":
            raise OperadError(
                f"{T.to_text(t)} is not a shuffle tree and {t.gen!r} has no symmetry flag")
        a, b = kids
        if g.symmetry == "skew":
            sign = -sign
        if monomial_degree(a, gens) % 2 and monomial_degree(b, gens) % 2:
            sign = -sign
        kids = [b, a]
    return sign, Node(t.gen, tuple(kids))


def build_polynomial(terms, gens: GeneratorSet, mode: str) -> TreePolynomial:
    pairs = []
    for c, m, tok in terms:
        _check_monomial(m, gens, tok)
        if mode == "ns":
            if T.leaves(m) != sorted(T.leaves(m)):
                raise PresentationError(
                    f"nonsymmetric monomial {T.to_text(m)} must list leaves in order",
                    tok.line, tok.col)
            pairs.append((m, c))
        else:
            try:
                s, m2 = to_shuffle_form(m, gens)
            except OperadError as exc:
                raise PresentationError(str(exc), tok.line, tok.col) from None
            pairs.append((m2, s * c))
    arities = {T.arity(m) for _, m, _ in terms}
    if len(arities) > 1:
        tok = terms[0][2]
        raise PresentationError("relation mixes arities " + ", ".join(map(str, sorted(arities))),
                                tok.line, tok.col)
    return TreePolynomial.from_pairs(pairs)


# -- parser entry points --------------------------------------------------------

def parse_presentation(text: str) -> Presentation:
    p = _Parser(text)
    name = "P"
    wrapped = False
    if p.accept("name", "operad"):
        name = p.expect("name", what="operad name").value
        p.expect("punct", "{")
        wrapped = True
    mode = "ns"
    mode_seen = False
    gens: list[Generator] = []
    raw_relations = []
    while True:
        if wrapped and p.accept("punct", "}"):
            break
        if p.tok.kind == "eof":
            if wrapped:
                p.error("missing closing '}'")
            break
        kw = p.expect("name", what="'mode', 'generator' or 'relation'")
        if kw.value == "mode":
            m = p.expect("name", what="ns or shuffle")
            if m.value not in ("ns", "shuffle"):
                p.error(f"unknown mode {m.value!r}", m)
            if mode_seen or gens or raw_relations:
                p.error("mode must be declared once, before generators and relations", kw)
            mode, mode_seen = m.value, True
        elif kw.value == "generator":
            gname = p.expect("name", what="generator name")
            p.expect("punct", ":")
            p.expect("name", "arity")
            ar = p.expect("int", what="arity").value
            degree, symmetry = 0, "none"
            while p.accept("punct", ","):
                opt = p.expect("name", what="degree, symmetric or skew")
                if opt.value == "degree":
                    neg = bool(p.accept("punct", "-"))
                    degree = p.expect("int", what="degree").value * (-1 if neg else 1)
                elif opt.value in ("symmetric", "skew"):
                    symmetry = opt.value
                else:
                    p.error(f"unknown generator option {opt.value!r}", opt)
            if any(g.name == gname.value for g in gens):
                p.error(f"duplicate generator {gname.value!r}", gname)
            try:
                gens.append(Generator(gname.value, ar, degree, symmetry))
            except OperadError as exc:
                p.error(str(exc), gname)
        elif kw.value == "relation":
            raw_relations.append((kw, p.expression()))
        else:
            p.error(f"unknown declaration {kw.value!r}", kw)
        p.expect("punct", ";")
    if wrapped and p.tok.kind != "eof":
        p.error("unexpected input after closing '}'")
    gset = GeneratorSet(tuple(gens))
    for g in gset:
        if g.symmetry != "none" and mode != "shuffle":
            raise PresentationError(f"symmetry flag on {g.name!r} needs shuffle mode")
    relators = []
    for k, (kw, terms) in enumerate(raw_relations, start=1):
        poly = build_polynomial(terms, gset, mode)
        if not poly:
            raise PresentationError(f"relation {k} is zero", kw.line, kw.col)
        weights = poly.weights()
        if weights != {2}:
            raise PresentationError(
                f"relation {k} is not quadratic (weights {sorted(weights)}); only quadratic "
                "presentations are supported", kw.line, kw.col)
        relators.append(poly)
    return Presentation(name, gset, tuple(relators), mode)


def parse_polynomial(text: str, pres: Presentation) -> TreePolynomial:
    """Parse a tree expression against the generators of a presentation."""
    p = _Parser(text)
    terms = p.expression()
    if p.tok.kind != "eof":
        p.error(f"unexpected {p.tok.value!r}")
    return build_polynomial(terms, pres.gens, pres.mode)


def load_presentation(path) -> Presentation:
    with open(path, encoding="utf-8") as fh:
        return parse_presentation(fh.read())


# -- normalization --------------------------------------------------------------

def normalize_relators(pres: Presentation) -> list[NormalizedRelator]:
    """Monic, inter-reduced relators with distinct leading terms.

    Relators are row-reduced in the weight-2 basis ordered from the largest
    monomial down, so each pivot is a leading term and no leading term occurs
    in any tail.
    """
    rank = pres.gens.rank
    by_arity: dict[int, list[TreePolynomial]] = {}
    for r in pres.relators:
        by_arity.setdefault(r.arity, []).append(r)
    out = []
    for ar in sorted(by_arity):
        monos = set()
        for r in by_arity[ar]:
            monos.update(m for m, _ in r)
        basis = sorted(monos, key=lambda m: T.path_lex_key(m, rank), reverse=True)
        col = {m: k for k, m in enumerate(basis)}
        rows = []
        for r in by_arity[ar]:
            row = [Fraction(0)] * len(basis)
            for m, c in r:
                row[col[m]] = c
            rows.append(row)
        reduced, pivots = rref(rows, len(basis))
        dropped = len(rows) - len(reduced)
        if dropped:
            log.info("arity %d: %d dependent relator(s) dropped", ar, dropped)
        for row, pc in zip(reduced, pivots):
            tail = TreePolynomial({basis[k]: -row[k] for k in range(len(basis)) if k != pc})
            out.append(NormalizedRelator(basis[pc], tail))
    out.sort(key=lambda nr: T.path_lex_key(nr.leading, rank))
    return out


# -- presets --------------------------------------------------------------------

PRESETS = {
    "As": """\
operad As {
  mode ns;
  generator m : arity 2;
  relation m(m(1,2),3) - m(1,m(2,3));
}
""",
    "modified-As": """\
operad ModifiedAs {
  mode ns;
  generator m : arity 2;
  relation m(m(1,2),3) - 2*m(1,m(2,3));
}
""",
    "Com": """\
# commutative: m(x,y) = m(y,x), associativity expanded in the shuffle basis
operad Com {
  mode shuffle;
  generator m : arity 2, symmetric;
  relation m(m(1,2),3) - m(1,m(2,3));
  relation m(m(1,3),2) - m(1,m(2,3));
}
""",
    "Lie": """\
# skew-symmetric bracket, Jacobi identity in the shuffle basis
operad Lie {
  mode shuffle;
  generator b : arity 2, skew;
  relation b(b(1,2),3) - b(1,b(2,3)) - b(b(1,3),2);
}
""",
}


def preset(name: str) -> Presentation:
    if name not in PRESETS:
        raise PresentationError(f"unknown preset {name!r} (choose from {', '.join(PRESETS)})")
    return parse_presentation(PRESETS[name])
