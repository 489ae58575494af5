# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled versions of the kernels in ``_kernels_py``.

Entries stay Python ``Fraction`` objects; the speedup comes from typed loop
control and avoiding generator/itertools overhead in the inner loops.
"""

from fractions import Fraction

_ONE = Fraction(1)


def rref(rows, Py_ssize_t ncols):
    cdef list m = [list(row_in) for row_in in rows]
    cdef list pivots = []
    cdef Py_ssize_t r = 0, c, k, j, piv
    cdef Py_ssize_t nrows = len(m)
    cdef list row, other
    for c in range(ncols):
        if r == nrows:
            break
        piv = -1
        for k in range(r, nrows):
            if (<list>m[k])[c] != 0:
                piv = k
                break
        if piv < 0:
            continue
        m[r], m[piv] = m[piv], m[r]
        row = <list>m[r]
        inv = _ONE / row[c]
        if inv != 1:
            row = [x * inv for x in row]
            m[r] = row
        for k in range(nrows):
            if k != r:
                other = <list>m[k]
                f = other[c]
                if f != 0:
                    for j in range(c, ncols):
                        if row[j] != 0:
                            other[j] = other[j] - f * row[j]
        pivots.append(c)
        r += 1
    return m[:r], pivots


def apply_multilinear(table, vecs):
    cdef Py_ssize_t n = len(vecs)
    cdef Py_ssize_t i
    cdef dict out = {}
    cdef list keys = []
    cdef list coefs = []
    cdef list sizes = []
    cdef list idx, partial
    if n == 0:
        colobj = table.get(())
        return {k: c for k, c in colobj.items() if c != 0} if colobj else {}
    for v in vecs:
        if not v:
            return {}
        keys.append(list(v.keys()))
        coefs.append(list(v.values()))
        sizes.append(len(v))
    idx = [0] * n
    partial = [None] * (n + 1)
    partial[0] = _ONE
    cdef Py_ssize_t level = 0
    # odometer over the product of supports, with running coefficient products
    while True:
        for i in range(level, n):
            partial[i + 1] = partial[i] * (<list>coefs[i])[<Py_ssize_t>idx[i]]
        key = tuple([(<list>keys[i])[<Py_ssize_t>idx[i]] for i in range(n)])
        colobj = table.get(key)
        if colobj:
            coef = partial[n]
            for kk, cc in colobj.items():
                val = out.get(kk)
                if val is None:
                    out[kk] = coef * cc
                else:
                    out[kk] = val + coef * cc
        i = n - 1
        while i >= 0:
            idx[i] = <Py_ssize_t>idx[i] + 1
            if <Py_ssize_t>idx[i] < <Py_ssize_t>sizes[i]:
                break
            idx[i] = 0
            i -= 1
        if i < 0:
            break
        level = i
    return {k: c for k, c in out.items() if c != 0}


def add_scaled(dict acc, vec, scale):
    for k, c in vec.items():
        v = acc.get(k, 0) + scale * c
        if v:
            acc[k] = v
        else:
            acc.pop(k, None)
    return acc
