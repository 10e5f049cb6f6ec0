"""Frobenius flatness of finite local ``F_p``-algebras.

Over an Artinian local ring a finite module is flat iff it is free, and it is
free of rank ``g = dim M/mM`` iff ``dim M = g * dim S``.  Applied to
``M = F_*S`` (``S`` acting through ``s -> s^p``) this decides Kunz's
criterion by linear algebra alone.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

from .arith import FpPoly
from .errors import NotFree, NotLocal, UnitIdeal
from .exactalg import fp_reduce
from .groebner import buchberger, normal_form, quotient_basis


@dataclass(frozen=True, eq=False)
class ArtinAlgebra:
    """``table[i, j]`` is the coordinate vector of ``b_i * b_j``; ``b_0 = 1``."""

    prime: int
    labels: tuple
    table: np.ndarray
    max_ideal: tuple

    @property
    def dim(self) -> int:
        return len(self.labels)

    def unit_vector(self, i: int) -> np.ndarray:
        v = np.zeros(self.dim, dtype=np.int64)
        v[i] = 1
        return v

    def one(self) -> np.ndarray:
        return self.unit_vector(0)

    def mul(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        return np.einsum("i,j,ijk->k", a, b, self.table) % self.prime

    def power(self, a, e: int) -> np.ndarray:
        out = self.one()
        for _ in range(e):
            out = self.mul(out, a)
        return out

    def left_matrix(self, a) -> np.ndarray:
        """Matrix of ``x -> a * x`` acting on column vectors."""
        a = np.asarray(a, dtype=np.int64)
        return (np.einsum("i,ijk->kj", a, self.table)) % self.prime

    def is_associative(self) -> bool:
        t, p = self.table, self.prime
        left = np.einsum("ijm,mkn->ijkn", t, t) % p
        right = np.einsum("jkm,imn->ijkn", t, t) % p
        return bool(np.array_equal(left, right))

    def is_commutative(self) -> bool:
        return bool(np.array_equal(self.table, self.table.transpose(1, 0, 2)))


def _is_nilpotent(alg: ArtinAlgebra, v) -> bool:
    m = alg.left_matrix(v)
    acc = np.identity(alg.dim, dtype=np.int64)
    for _ in range(alg.dim):
        acc = (acc @ m) % alg.prime
        if not acc.any():
            return True
    return False


def _check_local(alg: ArtinAlgebra):
    for i in alg.max_ideal:
        if not _is_nilpotent(alg, alg.unit_vector(i)):
            raise NotLocal(f"basis element {alg.labels[i]} is not nilpotent")


def algebra_from_table(prime: int, labels: Sequence, table) -> ArtinAlgebra:
    """Algebra with the given structure constants; basis element 0 must be 1."""
    t = np.asarray(table, dtype=np.int64) % prime
    n = len(labels)
    if t.shape != (n, n, n):
        raise ValueError("structure constants must have shape (dim, dim, dim)")
    alg = ArtinAlgebra(prime, tuple(labels), t, tuple(range(1, n)))
    if not np.array_equal(t[0], np.identity(n, dtype=np.int64)):
        raise ValueError("basis element 0 must act as the identity")
    _check_local(alg)
    return alg


def artin_build(gens: Sequence[FpPoly]) -> ArtinAlgebra:
    """``F_p[T]/(gens)`` on its standard monomials.

    Raises NotArtinian for a positive-dimensional quotient and NotLocal unless
    the quotient is local at the origin.
    """
    gens = list(gens)
    if not gens:
        raise ValueError("at least one generator is required")
    p, n = gens[0].prime, gens[0].nvars
    gb = buchberger(gens)
    basis = quotient_basis(gb)            # NotArtinian / UnitIdeal propagate
    if not basis:
        raise UnitIdeal("the ideal contains 1")
    index = {m: i for i, m in enumerate(basis)}
    if basis[0] != (0,) * n:
        raise NotLocal("the constant monomial is not standard")
    dim = len(basis)
    table = np.zeros((dim, dim, dim), dtype=np.int64)
    for i, a in enumerate(basis):
        for j in range(i, dim):
            b = basis[j]
            prod = FpPoly.monomial(p, tuple(x + y for x, y in zip(a, b)))
            nf = normal_form(prod, gb.generators, gb.key)
            for m, c in nf.terms.items():
                table[i, j, index[m]] = c
                table[j, i, index[m]] = c
    alg = ArtinAlgebra(p, tuple(basis), table, tuple(range(1, dim)))
    _check_local(alg)
    # the quotient must live at the origin: every variable nilpotent
    for i in range(n):
        nf = normal_form(FpPoly.var(p, n, i), gb.generators, gb.key)
        v = np.zeros(dim, dtype=np.int64)
        for m, c in nf.terms.items():
            v[index[m]] = c
        if not _is_nilpotent(alg, v):
            raise NotLocal(f"variable {i + 1} is not nilpotent; the quotient is not supported at the origin")
    return alg


# --- finite modules ---------------------------------------------------------

@dataclass(frozen=True, eq=False)
class FiniteModule:
    """``action[k]`` is the matrix of basis element ``b_k`` of the algebra."""

    algebra: ArtinAlgebra
    action: np.ndarray

    @property
    def dim(self) -> int:
        return self.action.shape[1]


def regular_module(alg: ArtinAlgebra) -> FiniteModule:
    return FiniteModule(alg, np.array([alg.left_matrix(alg.unit_vector(k)) for k in range(alg.dim)]))


def direct_sum(*mods: FiniteModule) -> FiniteModule:
    alg = mods[0].algebra
    total = sum(m.dim for m in mods)
    act = np.zeros((alg.dim, total, total), dtype=np.int64)
    off = 0
    for m in mods:
        act[:, off:off + m.dim, off:off + m.dim] = m.action
        off += m.dim
    return FiniteModule(alg, act)


def frobenius_pushforward(alg: ArtinAlgebra) -> FiniteModule:
    """``F_*S``: the space ``S`` with ``s`` acting as multiplication by ``s^p``."""
    return FiniteModule(alg, np.array([alg.left_matrix(alg.power(alg.unit_vector(k), alg.prime))
                                       for k in range(alg.dim)]))


def ideal_module(alg: ArtinAlgebra, gens: Sequence) -> FiniteModule:
    """The ideal generated by ``gens`` (coordinate vectors) as an ``S``-module."""
    p = alg.prime
    span = [alg.mul(alg.unit_vector(k), g) for g in gens for k in range(alg.dim)]
    red = fp_reduce(span, p, cols=alg.dim)
    basis = np.array(red.rref, dtype=np.int64).reshape(red.rank, alg.dim)
    act = np.zeros((alg.dim, red.rank, red.rank), dtype=np.int64)
    for k in range(alg.dim):
        for j, v in enumerate(basis):
            w = alg.mul(alg.unit_vector(k), v)
            # rref rows: coordinates are the entries at pivot columns
            act[k, :, j] = [w[c] for c in red.pivots]
    return FiniteModule(alg, act % p)


def _stack_images(mod: FiniteModule):
    alg = mod.algebra
    if not alg.max_ideal or mod.dim == 0:
        return np.zeros((0, mod.dim), dtype=np.int64)
    return np.concatenate([mod.action[k] for k in alg.max_ideal], axis=1).T


@dataclass
class FreeRank:
    rank: int
    basis: List[List[int]]


def minimal_generators(mod: FiniteModule) -> int:
    """``dim M/mM`` (Nakayama)."""
    rows = _stack_images(mod)
    rank = fp_reduce(rows, mod.algebra.prime, cols=mod.dim).rank if len(rows) else 0
    return mod.dim - rank


def free_rank_test(mod: FiniteModule) -> FreeRank:
    alg, p = mod.algebra, mod.algebra.prime
    g = minimal_generators(mod)
    if mod.dim != g * alg.dim:
        raise NotFree(f"dim M = {mod.dim} but {g} generators over a ring of length {alg.dim} "
                      f"would give {g * alg.dim}", g, mod.dim, alg.dim)
    # lift a basis of M/mM: extend a basis of mM by unit vectors
    rows = _stack_images(mod)
    mm = fp_reduce(rows, p, cols=mod.dim) if len(rows) else None
    span = [list(r) for r in mm.rref] if mm else []
    chosen = []
    for i in range(mod.dim):
        e = [0] * mod.dim
        e[i] = 1
        if fp_reduce(span + [e], p, cols=mod.dim).rank > len(span):
            span.append(e)
            chosen.append(e)
        if len(chosen) == g:
            break
    images = [list(mod.action[k] @ np.array(v) % p) for v in chosen for k in range(alg.dim)]
    if fp_reduce(images, p, cols=mod.dim).rank != mod.dim:
        raise NotFree("lifted generators do not span freely", g, mod.dim, alg.dim)
    return FreeRank(g, chosen)


@dataclass
class FlatnessCertificate:
    flat: bool
    generators_needed: int
    length_module: int
    length_ring: int
    reason: str


def frobenius_flat(alg: ArtinAlgebra) -> FlatnessCertificate:
    mod = frobenius_pushforward(alg)
    try:
        fr = free_rank_test(mod)
    except NotFree as exc:
        return FlatnessCertificate(False, exc.generators, exc.module_length, exc.ring_length,
                                   f"F_*S needs {exc.generators} generators but has length "
                                   f"{exc.module_length} != {exc.generators} * {exc.ring_length}")
    return FlatnessCertificate(True, fr.rank, mod.dim, alg.dim,
                               f"F_*S is free of rank {fr.rank}")
