"""Planar, shuffle and rooted trees.

A tree is either a leaf (a positive ``int`` label) or a :class:`Node` carrying
a generator name and an ordered tuple of children. Planar trees have leaves
labelled ``1..n`` from left to right; shuffle trees carry any bijective
labelling satisfying the shuffle condition. Undecorated shapes use the empty
generator name.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, permutations
from typing import Iterator, Mapping, Sequence, Union


class TreeError(ValueError):
    pass


@dataclass(frozen=True)
class Node:
    gen: str
    children: tuple

    def __post_init__(self):
        if len(self.children) < 1:
            raise TreeError("a vertex needs at least one input")

    def __str__(self) -> str:
        return to_text(self)


Tree = Union[Node, int]


# -- basic structure ----------------------------------------------------------

def is_leaf(t: Tree) -> bool:
    return isinstance(t, int)


def leaves(t: Tree) -> list[int]:
    """Leaf labels in planar (left to right) order."""
    if isinstance(t, int):
        return [t]
    out: list[int] = []
    for c in t.children:
        out.extend(leaves(c))
    return out


def arity(t: Tree) -> int:
    if isinstance(t, int):
        return 1
    return sum(arity(c) for c in t.children)


def vertex_count(t: Tree) -> int:
    if isinstance(t, int):
        return 0
    return 1 + sum(vertex_count(c) for c in t.children)


def vertices(t: Tree) -> list[Node]:
    """Internal vertices in preorder (root first, then children left to right)."""
    if isinstance(t, int):
        return []
    out = [t]
    for c in t.children:
        out.extend(vertices(c))
    return out


def min_label(t: Tree) -> int:
    if isinstance(t, int):
        return t
    return min(min_label(c) for c in t.children)


def relabel(t: Tree, mapping: Mapping[int, int]) -> Tree:
    if isinstance(t, int):
        return mapping[t]
    return Node(t.gen, tuple(relabel(c, mapping) for c in t.children))


def standardize(t: Tree) -> Tree:
    """Relabel leaves by rank so the label set becomes ``1..n``."""
    ranks = {x: k + 1 for k, x in enumerate(sorted(leaves(t)))}
    return relabel(t, ranks)


def planar_normalize(t: Tree) -> Tree:
    """Relabel leaves ``1..n`` in planar order (forget any labelling)."""
    counter = iter(range(1, arity(t) + 1))

    def go(s):
        if isinstance(s, int):
            return next(counter)
        return Node(s.gen, tuple(go(c) for c in s.children))

    return go(t)


def strip(t: Tree) -> Tree:
    """Forget decorations."""
    if isinstance(t, int):
        return t
    return Node("", tuple(strip(c) for c in t.children))


def corolla(n: int, gen: str = "") -> Node:
    return Node(gen, tuple(range(1, n + 1)))


# -- shuffle condition and rooted trees --------------------------------------

def is_shuffle_tree(t: Tree) -> bool:
    """Bijective labelling by ``1..n`` with increasing input minima at every vertex."""
    labels = leaves(t)
    if sorted(labels) != list(range(1, len(labels) + 1)):
        return False

    def ok(s: Tree) -> bool:
        if isinstance(s, int):
            return True
        mins = [min_label(c) for c in s.children]
        return all(a < b for a, b in zip(mins, mins[1:])) and all(ok(c) for c in s.children)

    return ok(t)


def is_mr_tree(t: Tree) -> bool:
    """Leftmost leaf is the minimum and rightmost the maximum below every vertex."""
    if isinstance(t, int):
        return True
    ls = leaves(t)
    return ls[0] == min(ls) and ls[-1] == max(ls) and all(is_mr_tree(c) for c in t.children)


def rooted_canonical(t: Tree) -> Tree:
    """Minimal shuffle representative of the planar-embedding class of ``t``.

    Valid for undecorated trees and for decorations whose vertices may be
    freely reordered; signs are the caller's business.
    """
    if isinstance(t, int):
        return t
    kids = sorted((rooted_canonical(c) for c in t.children), key=min_label)
    return Node(t.gen, tuple(kids))


# -- enumeration --------------------------------------------------------------

def _compositions(n: int, k: int) -> Iterator[tuple[int, ...]]:
    """Compositions of n into k positive parts, first part largest first."""
    if k == 1:
        yield (n,)
        return
    for first in range(n - k + 1, 0, -1):
        for rest in _compositions(n - first, k - 1):
            yield (first,) + rest


@lru_cache(maxsize=None)
def _shapes(n: int, binary: bool) -> tuple:
    if n == 1:
        return (0,)
    out = []
    arities = (2,) if binary else range(2, n + 1)
    for k in arities:
        for comp in _compositions(n, k):
            for kids in _product_shapes(comp, binary):
                out.append(Node("", kids))
    return tuple(out)


def _product_shapes(comp: tuple[int, ...], binary: bool) -> Iterator[tuple]:
    if not comp:
        yield ()
        return
    for head in _shapes(comp[0], binary):
        for tail in _product_shapes(comp[1:], binary):
            yield (head,) + tail


def enumerate_planar_trees(leaves_: int, vertices_: int | None = None,
                           binary_only: bool = False) -> list[Tree]:
    """All planar trees with the given number of leaves, labelled ``1..n``.

    Ordered deterministically: smaller root arity first, then heavier left
    subtrees first (so the left comb leads among binary trees).
    """
    if leaves_ < 1:
        raise TreeError("a tree has at least one leaf")
    if binary_only and vertices_ is not None and vertices_ != leaves_ - 1:
        return []
    out = []
    for s in _shapes(leaves_, binary_only):
        if vertices_ is not None and vertex_count_shape(s) != vertices_:
            continue
        out.append(planar_normalize(_leafify(s)))
    return out


def vertex_count_shape(s) -> int:
    if s == 0:
        return 0
    return 1 + sum(vertex_count_shape(c) for c in s.children)


def _leafify(s) -> Tree:
    # placeholder leaves (0) become distinct positive labels in planar order
    counter = iter(range(1, 10**9))

    def go(x):
        if x == 0:
            return next(counter)
        return Node(x.gen, tuple(go(c) for c in x.children))

    return go(s)


def _ordered_block_partitions(labels: tuple[int, ...], k: int) -> Iterator[list[tuple[int, ...]]]:
    """Partitions of a sorted label tuple into k blocks listed by increasing minimum."""
    if k == 1:
        yield [labels]
        return
    first, rest = labels[0], labels[1:]
    # the first block contains the minimum; later blocks are partitioned recursively
    for size in range(0, len(rest) - (k - 1) + 1):
        for extra in combinations(rest, size):
            remaining = tuple(x for x in rest if x not in extra)
            for tail in _ordered_block_partitions(remaining, k - 1):
                yield [(first,) + extra] + tail


def _shuffle_trees_on(labels: tuple[int, ...], arities: tuple[int, ...]) -> Iterator[Tree]:
    if len(labels) == 1:
        yield labels[0]
        return
    for k in arities:
        if k > len(labels):
            continue
        for blocks in _ordered_block_partitions(labels, k):
            for kids in _product_shuffle(blocks, arities):
                yield Node("", kids)


def _product_shuffle(blocks, arities) -> Iterator[tuple]:
    if not blocks:
        yield ()
        return
    for head in _shuffle_trees_on(blocks[0], arities):
        for tail in _product_shuffle(blocks[1:], arities):
            yield (head,) + tail


def _arity_profile(t: Tree) -> tuple[int, ...]:
    return tuple(sorted(len(v.children) for v in vertices(t)))


def enumerate_shuffle_trees(n: int, vertex_arities: Sequence[int] | None = None) -> list[Tree]:
    """Shuffle trees with n leaves and exactly the given multiset of vertex arities.

    With ``vertex_arities=None`` every shuffle tree (all arities >= 2) is
    returned, which is also the canonical enumeration of rooted trees.
    """
    if n < 1:
        raise TreeError("a tree has at least one leaf")
    if vertex_arities is None:
        allowed = tuple(range(2, n + 1))
        profile = None
    else:
        profile = tuple(sorted(vertex_arities))
        if any(a < 2 for a in profile) or sum(a - 1 for a in profile) + 1 != n:
            return []
        allowed = tuple(sorted(set(profile)))
    out = []
    for t in _shuffle_trees_on(tuple(range(1, n + 1)), allowed):
        if profile is None or _arity_profile(t) == profile:
            out.append(t)
    return out


def enumerate_rooted_trees(n: int) -> list[Tree]:
    return enumerate_shuffle_trees(n, None)


def brute_force_shuffle_trees(n: int, vertex_arities: Sequence[int]) -> list[Tree]:
    """All labellings of all planar shapes, filtered by the shuffle condition."""
    profile = tuple(sorted(vertex_arities))
    out = []
    for shape in enumerate_planar_trees(n, len(profile)):
        if _arity_profile(shape) != profile:
            continue
        for perm in permutations(range(1, n + 1)):
            t = relabel(shape, {k + 1: perm[k] for k in range(n)})
            if is_shuffle_tree(t):
                out.append(t)
    return out


# -- grafting -----------------------------------------------------------------

def graft(outer: Tree, leaf_index: int, inner: Tree) -> Tree:
    """Graft ``inner`` onto the leaf in planar position ``leaf_index`` (1-based).

    The result is relabelled ``1..n`` in planar order.
    """
    n = arity(outer)
    if not 1 <= leaf_index <= n:
        raise TreeError(f"leaf index {leaf_index} out of range 1..{n}")
    pos = iter(range(1, n + 1))

    def go(t):
        if isinstance(t, int):
            return inner if next(pos) == leaf_index else t
        return Node(t.gen, tuple(go(c) for c in t.children))

    return planar_normalize(go(outer))


# -- path-lexicographic order -------------------------------------------------

def path_words(t: Tree, gen_rank: Mapping[str, int] | None = None) -> dict[int, tuple[int, ...]]:
    """For each leaf label, the word of generator ranks from the root to it."""
    out: dict[int, tuple[int, ...]] = {}

    def go(s, prefix):
        if isinstance(s, int):
            out[s] = prefix
            return
        r = gen_rank.get(s.gen, 0) if gen_rank else 0
        for c in s.children:
            go(c, prefix + (r,))

    go(t, ())
    return out


def path_lex_key(t: Tree, gen_rank: Mapping[str, int] | None = None) -> tuple:
    words = path_words(t, gen_rank)
    wordkey = tuple((len(words[k]), words[k]) for k in sorted(words))
    arities = tuple(len(v.children) for v in vertices(t))
    return (wordkey, tuple(leaves(t)), arities)


def compare_path_lex(a: Tree, b: Tree, gen_rank: Mapping[str, int] | None = None) -> int:
    """-1, 0 or 1 as ``a`` is smaller, equal or larger than ``b``.

    Leaf by leaf (in label order) the root-to-leaf generator words are
    compared, shorter words first and then lexicographically; ties are broken
    by the planar leaf-label sequence.
    """
    if arity(a) != arity(b):
        raise TreeError("path-lex comparison needs equal leaf counts")
    ka, kb = path_lex_key(a, gen_rank), path_lex_key(b, gen_rank)
    return (ka > kb) - (ka < kb)


# -- text and DOT -------------------------------------------------------------

def to_text(t: Tree) -> str:
    if isinstance(t, int):
        return str(t)
    return f"{t.gen or '*'}(" + ",".join(to_text(c) for c in t.children) + ")"


_TOKEN = re.compile(r"\s*(?:(\d+)|([^\W\d][\w']*|\*)|(.))", re.UNICODE)


def parse_tree(text: str) -> Tree:
    """Parse the nested-parentheses encoding, e.g. ``m(m(1,2),3)``."""
    toks = []
    for m in _TOKEN.finditer(text):
        if m.group(1):
            toks.append(("int", int(m.group(1)), m.start(1)))
        elif m.group(2):
            toks.append(("name", m.group(2), m.start(2)))
        elif m.group(3):
            toks.append(("punct", m.group(3), m.start(3)))
    pos = 0

    def expect(kind, value=None):
        nonlocal pos
        if pos >= len(toks):
            raise TreeError(f"unexpected end of tree expression {text!r}")
        tok = toks[pos]
        if tok[0] != kind or (value is not None and tok[1] != value):
            raise TreeError(f"unexpected {tok[1]!r} at column {tok[2] + 1} in {text!r}")
        pos += 1
        return tok

    def node():
        nonlocal pos
        if pos < len(toks) and toks[pos][0] == "int":
            return expect("int")[1]
        name = expect("name")[1]
        expect("punct", "(")
        kids = [node()]
        while pos < len(toks) and toks[pos][1] == ",":
            pos += 1
            kids.append(node())
        expect("punct", ")")
        return Node("" if name == "*" else name, tuple(kids))

    t = node()
    if pos != len(toks):
        raise TreeError(f"trailing input at column {toks[pos][2] + 1} in {text!r}")
    return t


def to_dot(t: Tree, name: str = "tree") -> str:
    lines = [f"digraph {name} {{", "  rankdir=BT;", '  node [fontname="Helvetica"];']
    counter = iter(range(10**9))

    def go(s) -> str:
        ident = f"n{next(counter)}"
        if isinstance(s, int):
            lines.append(f'  {ident} [label="{s}", shape=plaintext];')
        else:
            lines.append(f'  {ident} [label="{s.gen or ""}", shape=circle];')
            for c in s.children:
                lines.append(f"  {go(c)} -> {ident};")
        return ident

    root = go(t)
    lines.append(f'  root [label="", shape=point];\n  {root} -> root;')
    lines.append("}")
    return "\n".join(lines) + "\n"
