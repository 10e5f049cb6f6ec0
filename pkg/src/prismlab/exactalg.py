"""Dense exact linear algebra over ``F_p`` and ``Z/p^N``.

Matrices are small, so everything is dense numpy.  Entries stay in int64
while products cannot overflow and fall back to Python ints (object arrays)
otherwise.
"""
from __future__ import annotations

from typing import List, NamedTuple

import numpy as np

from .errors import NoSolution

_INT64_SAFE = 1 << 62


def _array(m, modulus: int, cols: int = None) -> np.ndarray:
    dtype = np.int64 if modulus * modulus < _INT64_SAFE else object
    arr = np.array(m, dtype=object)
    if arr.size == 0:
        rows = len(m) if hasattr(m, "__len__") else 0
        return np.zeros((rows, cols or 0), dtype=dtype)
    if arr.ndim == 1:
        arr = arr.reshape(1, -1)
    return (arr % modulus).astype(dtype)


class RowReduction(NamedTuple):
    rank: int
    kernel_basis: List[List[int]]
    rref: List[List[int]]
    pivots: List[int]


def fp_reduce(m, p: int, cols: int = None) -> RowReduction:
    """Reduced row echelon form, rank and a kernel basis of ``m`` over ``F_p``."""
    a = _array(m, p, cols)
    nrows, ncols = a.shape
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        inv = pow(int(a[r, c]), -1, p)
        a[r] = (a[r] * inv) % p
        col = a[:, c].copy()
        col[r] = 0
        rows = np.nonzero(col)[0]
        if rows.size:
            a[rows] = (a[rows] - np.outer(col[rows], a[r])) % p
        pivots.append(c)
        r += 1
    rank = len(pivots)
    free = [c for c in range(ncols) if c not in set(pivots)]
    kernel = []
    for fcol in free:
        v = [0] * ncols
        v[fcol] = 1
        for row, pc in enumerate(pivots):
            v[pc] = int(-a[row, fcol] % p)
        kernel.append(v)
    rref = [[int(x) for x in row] for row in a[:rank]]
    return RowReduction(rank, kernel, rref, pivots)


def fp_rank(m, p: int) -> int:
    return fp_reduce(m, p).rank


# --- Z/p^N -----------------------------------------------------------------

def _val(x: int, p: int, cap: int) -> int:
    if x == 0:
        return cap
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


def _valuations(col: np.ndarray, p: int, N: int) -> np.ndarray:
    x = col.copy()
    v = np.zeros(len(x), dtype=np.int64)
    live = x != 0
    for _ in range(N):
        hit = live & (x % p == 0)
        if not hit.any():
            break
        v += hit
        x = np.where(hit, x // p, x)
    v[~live] = N
    return v


def howell_form(m, p: int, N: int, cols: int = None, stop: int = None) -> np.ndarray:
    """Howell form of the row span of ``m`` over ``Z/p^N``.

    Rows are in echelon order with pivots normalised to powers of ``p``;
    entries above a pivot ``p^v`` are reduced modulo ``p^v``.  The Howell
    property holds: for every column ``c`` the rows whose pivot lies at or
    right of ``c`` span all vectors of the row span vanishing left of ``c``.
    With ``stop`` only the first ``stop`` columns are processed and rows
    vanishing on them are discarded.
    """
    q = p ** N
    a = _array(m, q, cols)
    ncols = a.shape[1]
    stop = ncols if stop is None else stop
    done = []            # (pivot column, row)
    for c in range(stop):
        if a.shape[0] == 0:
            break
        nz = np.nonzero(a[:, c])[0]
        if nz.size == 0:
            continue
        vals = _valuations(a[nz, c], p, N)
        i = int(nz[int(np.argmin(vals))])
        v = int(vals.min())
        pv = p ** v
        unit = int(a[i, c]) // pv
        piv = (a[i] * pow(unit, -1, q)) % q
        a = np.delete(a, i, axis=0)
        if a.shape[0]:
            factors = a[:, c] // pv
            a = (a - np.outer(factors, piv)) % q
            a = a[np.any(a, axis=1)]
        for j, (pc, r) in enumerate(done):
            f = int(r[c]) // pv
            if f:
                done[j] = (pc, (r - f * piv) % q)
        if v > 0:
            sat = (piv * p ** (N - v)) % q
            if np.any(sat):
                a = np.vstack([a, sat[None, :]])
        done.append((c, piv))
    if not done:
        return np.zeros((0, ncols), dtype=a.dtype)
    return np.array([r for _, r in done])


def _pivot_col(row) -> int:
    nz = np.nonzero(row)[0]
    return int(nz[0]) if nz.size else -1


def howell_reduce(h: np.ndarray, w, p: int, N: int, upto: int = None):
    """Reduce ``w`` against Howell rows; returns the remainder.

    Only columns ``< upto`` are cleared.  A nonzero remainder on those
    columns means ``w`` is not in the span.
    """
    q = p ** N
    w = np.array(w, dtype=h.dtype if h.size else object) % q
    upto = w.shape[0] if upto is None else upto
    for row in h:
        c = _pivot_col(row)
        if c < 0 or c >= upto:
            continue
        pv = int(row[c])
        x = int(w[c])
        if x % pv:
            return w
        if x:
            w = (w - (x // pv) * row) % q
    return w


class HowellSolution(NamedTuple):
    particular: List[int]
    kernel_gens: List[List[int]]


def howell_solve(m, b, p: int, N: int, kernel: bool = True) -> HowellSolution:
    """Solve ``m x = b`` over ``Z/p^N``.

    Uses the Howell form of ``[m^T | I]``: reducing ``(b, 0)`` leaves
    ``(0, -x)`` exactly when ``b`` is in the column span, and the rows with a
    vanishing left block generate the kernel.
    """
    q = p ** N
    mat = np.array(m, dtype=object) % q
    if mat.ndim == 1:
        mat = mat.reshape(1, -1)
    nrows, ncols = mat.shape
    if len(b) != nrows:
        raise ValueError("right-hand side has the wrong length")
    aug = np.concatenate([mat.T, np.identity(ncols, dtype=object)], axis=1)
    h = howell_form(aug, p, N, stop=None if kernel else nrows)
    w = np.concatenate([np.array(b, dtype=object) % q, np.zeros(ncols, dtype=object)])
    rem = howell_reduce(h, w, p, N, upto=nrows)
    if np.any(rem[:nrows]):
        raise NoSolution("right-hand side is not in the span over Z/p^N")
    x = [int(-v % q) for v in rem[nrows:]]
    gens = []
    if kernel:
        for row in h:
            if _pivot_col(row) >= nrows:
                gens.append([int(v) for v in row[nrows:]])
    return HowellSolution(x, gens)


def quotient_length(m, p: int, N: int, cols: int) -> int:
    """Length of ``(Z/p^N)^cols / rowspan(m)`` as a ``Z_p``-module."""
    h = howell_form(m, p, N, cols=cols)
    pivots = {}
    for row in h:
        c = _pivot_col(row)
        if c >= 0:
            pivots[c] = _val(int(row[c]), p, N)
    return sum(pivots.get(c, N) for c in range(cols))


def matvec_mod(m, x, q: int) -> List[int]:
    return [sum(int(a) * int(b) for a, b in zip(row, x)) % q for row in m]
