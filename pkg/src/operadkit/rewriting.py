"""Rewriting method for binary quadratic operads.

Normalized relators become rewrite rules ``leading -> tail``. A weight-3
monomial is critical when both of its 2-vertex subtrees are leading terms;
if every critical monomial reduces to a single normal form along every
strategy, the presentation is Koszul and the monomials avoiding all leading
terms form a PBW basis.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction

from . import trees as T
from .free_operad import Divisor, TreePolynomial, divisors, substitute
from .kernels import rref
from .presentation import NormalizedRelator, Presentation, normalize_relators
from .trees import Tree

MAX_STATES = 20000


class RewritingError(ValueError):
    pass


@dataclass(frozen=True)
class RewriteSystem:
    presentation: Presentation
    rules: tuple[NormalizedRelator, ...]

    def __post_init__(self):
        bad = [g.name for g in self.presentation.gens if g.arity != 2]
        if bad:
            raise RewritingError("rewriting needs binary generators; not binary: " + ", ".join(bad))
        leads = [r.leading for r in self.rules]
        if len(set(leads)) != len(leads):
            raise RewritingError("leading terms must be pairwise distinct")

    @classmethod
    def from_presentation(cls, pres: Presentation) -> "RewriteSystem":
        return cls(pres, tuple(normalize_relators(pres)))

    @property
    def mode(self) -> str:
        return self.presentation.mode

    @property
    def rank(self) -> dict[str, int]:
        return self.presentation.gens.rank

    @property
    def gens(self):
        return self.presentation.gens

    def rule_for(self, pattern: Tree) -> NormalizedRelator | None:
        return self._table.get(pattern)

    @property
    def _table(self) -> dict:
        table = self.__dict__.get("_table_cache")
        if table is None:
            table = {r.leading: r for r in self.rules}
            object.__setattr__(self, "_table_cache", table)
        return table

    def redexes(self, m: Tree) -> list[Divisor]:
        """Divisors of ``m`` that are leading terms, outermost then leftmost first."""
        found = [d for d in divisors(m) if d.pattern in self._table]
        return sorted(found, key=lambda d: (len(d.path), d.path, d.slot))

    def is_normal(self, m: Tree) -> bool:
        return not self.redexes(m)

    def rewrite_at(self, m: Tree, d: Divisor) -> TreePolynomial:
        return substitute(m, d, self._table[d.pattern].tail, self.gens)

    def key(self, m: Tree):
        return T.path_lex_key(m, self.rank)


def _step(sys: RewriteSystem, poly: TreePolynomial, m: Tree, d: Divisor) -> TreePolynomial:
    c = poly.coefficient(m)
    return poly - TreePolynomial.monomial(m, c) + sys.rewrite_at(m, d).scale(c)


def reduce_normal_form(poly: TreePolynomial, sys: RewriteSystem,
                       rng: random.Random | None = None) -> TreePolynomial:
    """Rewrite until no monomial contains a leading term.

    The default strategy rewrites the largest reducible monomial at its
    outermost, leftmost redex. With ``rng`` the monomial and redex are
    picked at random (used to test strategy independence).
    """
    while True:
        reducible = [(m, sys.redexes(m)) for m, _ in poly]
        reducible = [(m, r) for m, r in reducible if r]
        if not reducible:
            return poly
        if rng is None:
            m, r = max(reducible, key=lambda mr: sys.key(mr[0]))
            d = r[0]
        else:
            m, r = rng.choice(sorted(reducible, key=lambda mr: sys.key(mr[0])))
            d = rng.choice(r)
        poly = _step(sys, poly, m, d)


def find_critical_monomials(sys: RewriteSystem) -> list[Tree]:
    if not sys.rules:
        return []
    out = []
    for m in sys.presentation.operad.monomials(4, 3):
        ds = divisors(m)
        if len(ds) == 2 and all(sys.rule_for(d.pattern) is not None for d in ds):
            out.append(m)
    return out


@dataclass
class ReductionGraph:
    """All reduction strategies from one critical monomial."""

    start: Tree
    states: list[TreePolynomial] = field(default_factory=list)
    edges: list[tuple[int, int, str]] = field(default_factory=list)
    terminal: list[int] = field(default_factory=list)

    def normal_forms(self) -> list[TreePolynomial]:
        seen = []
        for k in self.terminal:
            if self.states[k] not in seen:
                seen.append(self.states[k])
        return seen

    def paths(self, limit: int = 64) -> list[list[int]]:
        succ: dict[int, list[int]] = {}
        for a, b, _ in self.edges:
            succ.setdefault(a, []).append(b)
        out: list[list[int]] = []

        def go(node, path):
            if len(out) >= limit:
                return
            if node not in succ:
                out.append(path)
                return
            for nxt in succ[node]:
                go(nxt, path + [nxt])

        go(0, [0])
        return out


def reduction_graph(sys: RewriteSystem, start: Tree) -> ReductionGraph:
    g = ReductionGraph(start)
    index: dict[TreePolynomial, int] = {}
    first = TreePolynomial.monomial(start)
    index[first] = 0
    g.states.append(first)
    queue = deque([0])
    while queue:
        k = queue.popleft()
        poly = g.states[k]
        moves = []
        for m, _ in poly.sorted_terms(sys.rank):
            for d in sys.redexes(m):
                moves.append((m, d))
        if not moves:
            g.terminal.append(k)
            continue
        for m, d in moves:
            nxt = _step(sys, poly, m, d)
            if nxt not in index:
                if len(g.states) >= MAX_STATES:
                    raise RewritingError("reduction graph too large")
                index[nxt] = len(g.states)
                g.states.append(nxt)
                queue.append(index[nxt])
            label = f"{T.to_text(m)} @ {T.to_text(d.pattern)}"
            g.edges.append((k, index[nxt], label))
    return g


@dataclass
class KoszulCertificate:
    system: RewriteSystem
    graphs: list[ReductionGraph]

    @property
    def critical_monomials(self) -> list[Tree]:
        return [g.start for g in self.graphs]

    @property
    def confluent(self) -> bool:
        return all(len(g.normal_forms()) == 1 for g in self.graphs)

    @property
    def verdict(self) -> str:
        return "Koszul" if self.confluent else "NotConcluded"

    def summary(self) -> str:
        n = len(self.graphs)
        word = "monomial" if n == 1 else "monomials"
        if self.confluent:
            return f"{n} critical {word}, confluent, Koszul"
        bad = sum(len(g.normal_forms()) > 1 for g in self.graphs)
        return f"{n} critical {word}, {bad} not confluent, not concluded"

    def to_json(self) -> dict:
        rank = self.system.rank
        crit = []
        for g in self.graphs:
            crit.append({
                "monomial": T.to_text(g.start),
                "normal_forms": [p.to_text(rank) for p in g.normal_forms()],
                "confluent": len(g.normal_forms()) == 1,
                "paths": [[g.states[k].to_text(rank) for k in path] for path in g.paths()],
            })
        return {
            "operad": self.system.presentation.name,
            "mode": self.system.mode,
            "rules": [r.rule_text(rank) for r in self.system.rules],
            "critical_monomials": crit,
            "confluent": self.confluent,
            "verdict": self.verdict,
        }


def check_confluence(sys: RewriteSystem) -> KoszulCertificate:
    return KoszulCertificate(sys, [reduction_graph(sys, m) for m in find_critical_monomials(sys)])


def reduction_dot(g: ReductionGraph, rank=None, name: str = "reduction") -> str:
    lines = [f"digraph {name} {{", '  node [shape=box, fontname="Helvetica"];']
    terminal = set(g.terminal)
    for k, s in enumerate(g.states):
        style = ", peripheries=2" if k in terminal else ""
        text = s.to_text(rank).replace('"', '\\"')
        lines.append(f'  s{k} [label="{text}"{style}];')
    for a, b, _ in g.edges:
        lines.append(f"  s{a} -> s{b};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def enumerate_pbw_basis(sys: RewriteSystem, arity: int,
                        certificate: KoszulCertificate | None = None) -> list[Tree]:
    """Monomials of the given arity with no leading term as a 2-vertex subtree."""
    cert = certificate or check_confluence(sys)
    if not cert.confluent:
        raise RewritingError("PBW basis needs a confluent rewriting system")
    if arity == 1:
        return [1]
    return [m for m in sys.presentation.operad.monomials(arity, arity - 1) if sys.is_normal(m)]


def quotient_dimension(sys: RewriteSystem, weight: int) -> int:
    """Dimension of the weight-w, arity w+1 component of the quotient operad.

    Computed as (number of monomials) minus the rank of the ideal, where the
    ideal is spanned by every relator inserted at every internal edge.
    """
    arity = weight + 1
    monos = sys.presentation.operad.monomials(arity, weight)
    if weight < 2:
        return len(monos)
    col = {m: k for k, m in enumerate(monos)}
    rows = []
    for m in monos:
        for d in divisors(m):
            for r in sys.rules:
                row = [Fraction(0)] * len(monos)
                for t, c in substitute(m, d, r.relator, sys.gens):
                    row[col[t]] += c
                rows.append(row)
    reduced, _ = rref(rows, len(monos)) if rows else ([], [])
    return len(monos) - len(reduced)

