"""Pure-Python versions of the hot kernels.

These are the reference implementations; ``operadkit._core`` (Cython) must
agree with them exactly. Vectors are sparse dicts ``{index: Fraction}`` with
no zero entries; multilinear tables map input index tuples to such vectors.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product


def rref(rows, ncols):
    """Reduced row echelon form over the rationals.

    Pivots are taken in the lowest available column, and within a column the
    first remaining row with a nonzero entry is used. Returns the nonzero
    reduced rows and the list of pivot columns.
    """
    m = [list(r) for r in rows]
    pivots = []
    r = 0
    nrows = len(m)
    for c in range(ncols):
        if r == nrows:
            break
        piv = -1
        for k in range(r, nrows):
            if m[k][c] != 0:
                piv = k
                break
        if piv < 0:
            continue
        m[r], m[piv] = m[piv], m[r]
        row = m[r]
        inv = 1 / Fraction(row[c])
        if inv != 1:
            row = [x * inv for x in row]
            m[r] = row
        for k in range(nrows):
            if k != r:
                f = m[k][c]
                if f != 0:
                    other = m[k]
                    m[k] = [a - f * b for a, b in zip(other, row)]
        pivots.append(c)
        r += 1
    return m[:r], pivots


def apply_multilinear(table, vecs):
    """Evaluate a multilinear map on a tensor product of sparse vectors."""
    out = {}
    supports = [list(v.items()) for v in vecs]
    for combo in product(*supports):
        key = tuple(k for k, _ in combo)
        col = table.get(key)
        if not col:
            continue
        coef = Fraction(1)
        for _, c in combo:
            coef *= c
        for k, c in col.items():
            out[k] = out.get(k, 0) + coef * c
    return {k: c for k, c in out.items() if c != 0}


def add_scaled(acc, vec, scale):
    """``acc += scale * vec`` in place, dropping cancelled entries."""
    for k, c in vec.items():
        v = acc.get(k, 0) + scale * c
        if v:
            acc[k] = v
        else:
            acc.pop(k, None)
    return acc
