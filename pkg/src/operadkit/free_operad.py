"""Free nonsymmetric and free shuffle operads on a set of generators.

Monomials are decorated trees (:class:`operadkit.trees.Node` with generator
names); polynomials are exact rational combinations of monomials of one
arity. The vertices of a monomial are ordered in preorder, and every sign in
this module is the Koszul sign of reordering that sequence of generator
degrees.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Mapping

from . import trees as T
from .linalg import fmt_rational
from .trees import Node, Tree

SYMMETRY_FLAGS = ("none", "symmetric", "skew")
MODES = ("ns", "shuffle")


class OperadError(ValueError):
    pass


@dataclass(frozen=True)
class Generator:
    name: str
    arity: int
    degree: int = 0
    symmetry: str = "none"

    def __post_init__(self):
        if self.arity < 1:
            raise OperadError(f"generator {self.name!r} must have arity >= 1")
        if self.symmetry not in SYMMETRY_FLAGS:
            raise OperadError(f"unknown symmetry flag {self.symmetry!r}")
        if self.symmetry != "none" and self.arity != 2:
            raise OperadError(f"symmetry flag on {self.name!r} needs arity 2")


@dataclass(frozen=True)
class GeneratorSet:
    generators: tuple[Generator, ...]

    def __post_init__(self):
        names = [g.name for g in self.generators]
        if len(set(names)) != len(names):
            raise OperadError("generator names must be unique")

    @classmethod
    def of(cls, *gens: Generator) -> "GeneratorSet":
        return cls(tuple(gens))

    def __iter__(self):
        return iter(self.generators)

    def __len__(self):
        return len(self.generators)

    def __getitem__(self, name: str) -> Generator:
        for g in self.generators:
            if g.name == name:
                return g
        raise KeyError(name)

    def __contains__(self, name: str) -> bool:
        return any(g.name == name for g in self.generators)

    @property
    def rank(self) -> dict[str, int]:
        return {g.name: k for k, g in enumerate(self.generators)}

    def degree(self, name: str) -> int:
        return self[name].degree

    def arities(self) -> set[int]:
        return {g.arity for g in self.generators}

    def is_binary(self) -> bool:
        return all(g.arity == 2 for g in self.generators)


# -- signs ----------------------------------------------------------------------

def koszul_sign(degrees: list[int], perm: list[int]) -> int:
    """Sign of moving the items ``degrees`` into the order ``perm``.

    ``perm[k]`` is the source position of the item placed at position k.
    """
    odd = 0
    for a in range(len(perm)):
        for b in range(a + 1, len(perm)):
            if perm[a] > perm[b] and degrees[perm[a]] % 2 and degrees[perm[b]] % 2:
                odd ^= 1
    return -1 if odd else 1


def monomial_degree(t: Tree, gens: GeneratorSet) -> int:
    return sum(gens.degree(v.gen) for v in T.vertices(t))


# -- polynomials ----------------------------------------------------------------

@dataclass(frozen=True)
class TreePolynomial:
    """Rational combination of decorated trees with a common arity."""

    terms: Mapping[Tree, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        clean = {m: Fraction(c) for m, c in self.terms.items() if c != 0}
        object.__setattr__(self, "terms", clean)
        ars = {T.arity(m) for m in clean}
        if len(ars) > 1:
            raise OperadError("polynomial mixes arities " + ", ".join(map(str, sorted(ars))))

    @classmethod
    def monomial(cls, t: Tree, coeff=1) -> "TreePolynomial":
        return cls({t: Fraction(coeff)})

    @classmethod
    def zero(cls) -> "TreePolynomial":
        return cls({})

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[Tree, Fraction]]) -> "TreePolynomial":
        acc: dict[Tree, Fraction] = {}
        for m, c in pairs:
            acc[m] = acc.get(m, 0) + c
        return cls(acc)

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms.items())

    def __eq__(self, other):
        return isinstance(other, TreePolynomial) and dict(self.terms) == dict(other.terms)

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other: "TreePolynomial") -> "TreePolynomial":
        return TreePolynomial.from_pairs(list(self.terms.items()) + list(other.terms.items()))

    def __neg__(self) -> "TreePolynomial":
        return TreePolynomial({m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "TreePolynomial") -> "TreePolynomial":
        return self + (-other)

    def scale(self, c) -> "TreePolynomial":
        return TreePolynomial({m: c * v for m, v in self.terms.items()})

    def coefficient(self, m: Tree) -> Fraction:
        return self.terms.get(m, Fraction(0))

    @property
    def arity(self) -> int | None:
        for m in self.terms:
            return T.arity(m)
        return None

    def weights(self) -> set[int]:
        return {T.vertex_count(m) for m in self.terms}

    def sorted_terms(self, gen_rank: Mapping[str, int] | None = None, descending: bool = True):
        return sorted(self.terms.items(), key=lambda mc: T.path_lex_key(mc[0], gen_rank),
                      reverse=descending)

    def leading(self, gen_rank: Mapping[str, int] | None = None) -> Tree:
        if not self.terms:
            raise OperadError("zero polynomial has no leading term")
        return max(self.terms, key=lambda m: T.path_lex_key(m, gen_rank))

    def to_text(self, gen_rank: Mapping[str, int] | None = None) -> str:
        if not self.terms:
            return "0"
        parts = []
        for k, (m, c) in enumerate(self.sorted_terms(gen_rank)):
            mag = abs(c)
            body = T.to_text(m) if mag == 1 else f"{fmt_rational(mag)}*{T.to_text(m)}"
            if k == 0:
                parts.append(("-" if c < 0 else "") + body)
            else:
                parts.append(("- " if c < 0 else "+ ") + body)
        return " ".join(parts)

    def __str__(self):
        return self.to_text()


# -- composition --------------------------------------------------------------

def _compose_monomials(f: Tree, i: int, g: Tree, gens: GeneratorSet) -> tuple[int, Tree]:
    """Graft g on the leaf labelled i of f and return (sign, tree)."""
    m = T.arity(g)
    if i not in T.leaves(f):
        raise OperadError(f"no leaf {i} in {T.to_text(f)}")
    shifted_g = T.relabel(g, {x: x + i - 1 for x in T.leaves(g)})
    deg_after = 0
    seen = False

    def go(t):
        nonlocal deg_after, seen
        if isinstance(t, int):
            if t == i:
                seen = True
                return shifted_g
            return t if t < i else t + m - 1
        if seen:
            deg_after += gens.degree(t.gen)
        return Node(t.gen, tuple(go(c) for c in t.children))

    out = go(f)
    sign = -1 if (monomial_degree(g, gens) * deg_after) % 2 else 1
    return sign, out


def partial_compose(f: TreePolynomial, i: int, g: TreePolynomial, gens: GeneratorSet) -> TreePolynomial:
    """Bilinear partial composition ``f o_i g``.

    The inputs of ``g`` take the labels ``i..i+m-1`` and the later inputs of
    ``f`` shift up by ``m-1``; in shuffle mode this is the shuffle
    composition along the identity shuffle, which again yields shuffle trees.
    """
    if not f or not g:
        return TreePolynomial.zero()
    n = f.arity
    if not 1 <= i <= n:
        raise OperadError(f"composition index {i} out of range 1..{n}")
    pairs = []
    for a, ca in f:
        for b, cb in g:
            s, t = _compose_monomials(a, i, b, gens)
            pairs.append((t, s * ca * cb))
    return TreePolynomial.from_pairs(pairs)


def generator_corolla(gen: Generator) -> Node:
    return T.corolla(gen.arity, gen.name)


@dataclass(frozen=True)
class FreeOperad:
    gens: GeneratorSet
    mode: str = "ns"

    def __post_init__(self):
        if self.mode not in MODES:
            raise OperadError(f"unknown mode {self.mode!r}")

    @property
    def rank(self) -> dict[str, int]:
        return self.gens.rank

    def corolla(self, name: str) -> TreePolynomial:
        return TreePolynomial.monomial(generator_corolla(self.gens[name]))

    def compose(self, f: TreePolynomial, i: int, g: TreePolynomial) -> TreePolynomial:
        return partial_compose(f, i, g, self.gens)

    def degree(self, m: Tree) -> int:
        return monomial_degree(m, self.gens)

    def monomials(self, arity: int, weight: int) -> list[Tree]:
        """All decorated monomials of the given arity and weight, path-lex sorted."""
        out = []
        for shape in self._shapes(arity, weight):
            out.extend(self._decorate(shape))
        rank = self.rank
        return sorted(out, key=lambda m: T.path_lex_key(m, rank))

    def _shapes(self, arity: int, weight: int) -> list[Tree]:
        allowed = sorted(a for a in self.gens.arities() if a >= 2)
        if weight == 0:
            return [1] if arity == 1 else []
        if 1 in self.gens.arities():
            raise OperadError("arity-1 generators are not supported in enumeration")
        profiles = _profiles(allowed, weight, arity)
        shapes = []
        for prof in profiles:
            if self.mode == "ns":
                shapes.extend(s for s in T.enumerate_planar_trees(arity, weight)
                              if sorted(len(v.children) for v in T.vertices(s)) == list(prof))
            else:
                shapes.extend(T.enumerate_shuffle_trees(arity, prof))
        return shapes

    def _decorate(self, shape: Tree) -> Iterator[Tree]:
        if isinstance(shape, int):
            yield shape
            return
        options = [g.name for g in self.gens if g.arity == len(shape.children)]
        kid_opts = [list(self._decorate(c)) for c in shape.children]

        def prod(k):
            if k == len(kid_opts):
                yield ()
                return
            for head in kid_opts[k]:
                for tail in prod(k + 1):
                    yield (head,) + tail

        for name in options:
            for kids in prod(0):
                yield Node(name, kids)

    def weight2_basis(self, arity: int) -> list[Tree]:
        return self.monomials(arity, 2)


def _profiles(allowed: list[int], weight: int, arity: int) -> list[tuple[int, ...]]:
    out = []

    def go(start, left, acc, excess):
        if left == 0:
            if excess + 1 == arity:
                out.append(tuple(acc))
            return
        for k in range(start, len(allowed)):
            go(k, left - 1, acc + [allowed[k]], excess + allowed[k] - 1)

    go(0, weight, [], 0)
    return out


def weight2_basis(gens: GeneratorSet, arity: int, mode: str = "ns") -> list[Tree]:
    return FreeOperad(gens, mode).weight2_basis(arity)


# -- monomial surgery used by rewriting ----------------------------------------

@dataclass(frozen=True)
class Divisor:
    """A 2-vertex subtree of a monomial at an internal edge.

    ``path`` addresses the parent vertex (child positions from the root),
    ``slot`` the position of the child vertex among its inputs. ``pattern``
    is the standardized 2-vertex tree and ``blocks`` the subtrees hanging
    below it, indexed by the standardized labels.
    """

    path: tuple[int, ...]
    slot: int
    pattern: Tree
    blocks: tuple[Tree, ...]


def _subtree(t: Tree, path: tuple[int, ...]) -> Tree:
    for k in path:
        t = t.children[k]
    return t


def _replace(t: Tree, path: tuple[int, ...], new: Tree) -> Tree:
    if not path:
        return new
    kids = list(t.children)
    kids[path[0]] = _replace(kids[path[0]], path[1:], new)
    return Node(t.gen, tuple(kids))


def divisors(m: Tree) -> list[Divisor]:
    out = []

    def go(t, path):
        if isinstance(t, int):
            return
        for slot, c in enumerate(t.children):
            if isinstance(c, Node):
                out.append(_make_divisor(t, slot, path))
            go(c, path + (slot,))

    go(m, ())
    return out


def _make_divisor(v: Node, slot: int, path) -> Divisor:
    c = v.children[slot]
    hanging = [x for k, x in enumerate(v.children) if k != slot] + list(c.children)
    order = sorted(hanging, key=T.min_label)
    label = {id(x): r + 1 for r, x in enumerate(order)}
    inner = Node(c.gen, tuple(label[id(x)] for x in c.children))
    kids = tuple(inner if k == slot else label[id(x)] for k, x in enumerate(v.children))
    return Divisor(path, slot, Node(v.gen, kids), tuple(order))


def _between_degree(m: Tree, d: Divisor, gens: GeneratorSet) -> int:
    """Sum of degrees of vertices strictly between the divisor's two vertices in preorder."""
    parent = _subtree(m, d.path)
    return sum(gens.degree(x.gen) for k in range(d.slot)
               for x in T.vertices(parent.children[k]))


def substitute(m: Tree, d: Divisor, replacement: TreePolynomial, gens: GeneratorSet) -> TreePolynomial:
    """Replace the divisor ``d`` of ``m`` by a combination of 2-vertex patterns."""
    base = _between_degree(m, d, gens)
    inner_deg = gens.degree(d.pattern.children[d.slot].gen)
    sign_m = -1 if (base * inner_deg) % 2 else 1
    pairs = []
    for pat, c in replacement:
        new_sub = _plug(pat, d.blocks)
        new = _replace(m, d.path, new_sub)
        nd = Divisor(d.path, _inner_slot(pat), pat, d.blocks)
        base2 = _between_degree(new, nd, gens)
        inner2 = gens.degree(pat.children[nd.slot].gen)
        sign_new = -1 if (base2 * inner2) % 2 else 1
        pairs.append((new, sign_m * sign_new * c))
    return TreePolynomial.from_pairs(pairs)


def _inner_slot(pat: Node) -> int:
    return next(k for k, c in enumerate(pat.children) if isinstance(c, Node))


def _plug(pat: Tree, blocks: tuple[Tree, ...]) -> Tree:
    if isinstance(pat, int):
        return blocks[pat - 1]
    return Node(pat.gen, tuple(_plug(c, blocks) for c in pat.children))
