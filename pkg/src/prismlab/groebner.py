"""Buchberger's algorithm over ``F_p`` and what it buys us: membership,
Krull dimension and standard-monomial bases of Artinian quotients.

All statements are about the polynomial ring (global semantics).
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import List, Optional, Sequence, Tuple

from .arith import (FpPoly, Monomial, degrevlex_key, mono_div, mono_divides, mono_lcm,
                    monomials_upto)
from .errors import NotArtinian, RingMismatch, UnitIdeal

ORDERS = {
    "degrevlex": degrevlex_key,
    "lex": lambda m: m,
}


def leading(f: FpPoly, key) -> Tuple[Monomial, int]:
    m = max(f.terms, key=key)
    return m, f.terms[m]


@dataclass(frozen=True)
class GroebnerBasis:
    generators: Tuple[FpPoly, ...]
    prime: int
    nvars: int
    order: str = "degrevlex"
    reduced: bool = True

    @property
    def key(self):
        return ORDERS[self.order]

    def leading_monomials(self) -> List[Monomial]:
        return [leading(g, self.key)[0] for g in self.generators]

    def is_unit(self) -> bool:
        return any(sum(m) == 0 for m in self.leading_monomials())

    def is_homogeneous(self) -> bool:
        return all(g.is_homogeneous() for g in self.generators)


def normal_form(f: FpPoly, basis: Sequence[FpPoly], key=degrevlex_key) -> FpPoly:
    """Full reduction of ``f`` modulo ``basis``."""
    p = f.prime
    leads = [(leading(g, key), g) for g in basis if g]
    rem = {}
    cur = dict(f.terms)
    while cur:
        m = max(cur, key=key)
        c = cur[m]
        for (lm, lc), g in leads:
            if mono_divides(lm, m):
                shift = mono_div(m, lm)
                factor = c * pow(lc, -1, p) % p
                for gm, gc in g.terms.items():
                    t = tuple(a + b for a, b in zip(gm, shift))
                    v = (cur.get(t, 0) - factor * gc) % p
                    if v:
                        cur[t] = v
                    else:
                        cur.pop(t, None)
                break
        else:
            rem[m] = c
            del cur[m]
    return FpPoly._raw(p, f.nvars, rem)


def _spoly(f: FpPoly, g: FpPoly, key) -> FpPoly:
    (mf, cf), (mg, cg) = leading(f, key), leading(g, key)
    l = mono_lcm(mf, mg)
    p = f.prime
    return (f.mul_monomial(mono_div(l, mf), pow(cf, -1, p))
            - g.mul_monomial(mono_div(l, mg), pow(cg, -1, p)))


def _monic(f: FpPoly, key) -> FpPoly:
    _, c = leading(f, key)
    return f.scale(pow(c, -1, f.prime))


def buchberger(gens: Sequence[FpPoly], order: str = "degrevlex") -> GroebnerBasis:
    gens = [g for g in gens if g]
    if not gens:
        raise ValueError("need at least one generator (use the zero polynomial's ring explicitly)")
    p, n = gens[0].prime, gens[0].nvars
    for g in gens:
        if (g.prime, g.nvars) != (p, n):
            raise RingMismatch("generators over different rings")
    key = ORDERS[order]
    basis = [_monic(g, key) for g in gens]
    pairs = list(combinations(range(len(basis)), 2))
    while pairs:
        i, j = pairs.pop()
        mi, mj = leading(basis[i], key)[0], leading(basis[j], key)[0]
        # first criterion: coprime leading monomials
        if all(a == 0 or b == 0 for a, b in zip(mi, mj)):
            continue
        # second criterion: some k with LM_k | lcm and pairs (i,k), (j,k) done
        l = mono_lcm(mi, mj)
        pending = set(pairs)
        if any(k not in (i, j) and mono_divides(leading(basis[k], key)[0], l)
               and (min(i, k), max(i, k)) not in pending
               and (min(j, k), max(j, k)) not in pending
               for k in range(len(basis))):
            continue
        r = normal_form(_spoly(basis[i], basis[j], key), basis, key)
        if r:
            basis.append(_monic(r, key))
            k = len(basis) - 1
            pairs.extend((a, k) for a in range(k))
    return GroebnerBasis(tuple(_reduce_basis(basis, key)), p, n, order, True)


def _reduce_basis(basis: List[FpPoly], key) -> List[FpPoly]:
    # drop generators whose leading monomial is divisible by another's
    lms = [leading(g, key)[0] for g in basis]
    keep = []
    for i, g in enumerate(basis):
        if any(j != i and mono_divides(lms[j], lms[i]) and (lms[j] != lms[i] or j < i)
               for j in range(len(basis))):
            continue
        keep.append(g)
    out = []
    for i, g in enumerate(keep):
        others = keep[:i] + keep[i + 1:]
        out.append(_monic(normal_form(g, others, key), key))
    out.sort(key=lambda g: key(leading(g, key)[0]))
    return out


def ideal_member(f: FpPoly, gb: GroebnerBasis) -> bool:
    return normal_form(f, gb.generators, gb.key).is_zero()


def ideal_dim(gb: GroebnerBasis) -> int:
    """Krull dimension of ``F_p[T]/I``: the largest set of variables no
    leading monomial is supported in."""
    if gb.is_unit():
        raise UnitIdeal("1 lies in the ideal")
    n = gb.nvars
    supports = [frozenset(i for i, e in enumerate(m) if e) for m in gb.leading_monomials()]
    for size in range(n, -1, -1):
        for subset in combinations(range(n), size):
            s = set(subset)
            if not any(sup <= s for sup in supports):
                return size
    return 0


def quotient_basis(gb: GroebnerBasis) -> List[Monomial]:
    """Standard monomials of an Artinian quotient, ascending in the order."""
    if gb.is_unit():
        return []
    if ideal_dim(gb) > 0:
        raise NotArtinian("quotient is not finite-dimensional")
    lms = gb.leading_monomials()
    n = gb.nvars
    # each variable has a pure power among the leading monomials
    bound = 0
    for i in range(n):
        bound += min(m[i] for m in lms if all(e == 0 for k, e in enumerate(m) if k != i))
    out = [m for m in monomials_upto(n, bound)
           if not any(mono_divides(l, m) for l in lms)]
    out.sort(key=gb.key)
    return out


def ideal_of(gens: Sequence[FpPoly], order: str = "degrevlex") -> Optional[GroebnerBasis]:
    """Gröbner basis, or None when every generator is zero (the zero ideal)."""
    nz = [g for g in gens if g]
    return buchberger(nz, order) if nz else None


def dim_of(gens: Sequence[FpPoly], nvars: int) -> int:
    """Krull dimension of ``F_p[T_1..T_n]/(gens)``; raises UnitIdeal."""
    gb = ideal_of(gens)
    return nvars if gb is None else ideal_dim(gb)
