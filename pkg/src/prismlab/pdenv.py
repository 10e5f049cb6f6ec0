"""Truncated divided-power algebra ``Z/p^N<T>`` on ``gamma_0..gamma_M``.

``gamma_i * gamma_j = C(i+j, i) gamma_{i+j}`` (zero past ``M``) and the
Frobenius lift ``gamma_n -> (pn)!/n! gamma_{pn}``.  The fiber mod ``p``
has a nonzero nilpotent ``T = gamma_1`` and non-flat Frobenius, even though
it presents the regular ring ``F_p`` over the two-dimensional base
``Z_p[[T]]``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import comb, factorial
from typing import List, Tuple

import numpy as np

from .arith import DEFAULT_PRECISION, is_prime
from .common import CheckRecord
from .delta import DeltaRingSpec
from .errors import WindowTooSmall
from .kunzartin import FlatnessCertificate, algebra_from_table, frobenius_flat


@dataclass(frozen=True)
class PDAlgebra:
    prime: int
    precision: int
    top: int

    @property
    def modulus(self) -> int:
        return self.prime ** self.precision

    def element(self, coeffs, saturated: bool = False) -> "PDElement":
        c = [0] * (self.top + 1)
        for i, x in enumerate(coeffs):
            if i <= self.top:
                c[i] = x % self.modulus
            elif x % self.modulus:
                saturated = True
        return PDElement(self, tuple(c), saturated)

    def gamma(self, n: int) -> "PDElement":
        if n > self.top:
            return PDElement(self, (0,) * (self.top + 1), True)
        c = [0] * (self.top + 1)
        c[n] = 1
        return PDElement(self, tuple(c))

    def one(self) -> "PDElement":
        return self.gamma(0)

    def T(self) -> "PDElement":
        return self.gamma(1)

    def structure_constant(self, i: int, j: int) -> int:
        return comb(i + j, i) % self.modulus if i + j <= self.top else 0


def pd_build(p: int, N: int = DEFAULT_PRECISION, M: int = None) -> PDAlgebra:
    if not is_prime(p):
        raise ValueError(f"{p} is not a prime number")
    M = p * p if M is None else M
    if M < p:
        raise WindowTooSmall(f"top index {M} is below p = {p}")
    return PDAlgebra(p, N, M)


@dataclass(frozen=True)
class PDElement:
    algebra: PDAlgebra
    coeffs: Tuple[int, ...]
    saturated: bool = False

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.algebra.element([other])
        return isinstance(other, PDElement) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __add__(self, other):
        q = self.algebra.modulus
        return PDElement(self.algebra, tuple((a + b) % q for a, b in zip(self.coeffs, other.coeffs)),
                         self.saturated or other.saturated)

    def __sub__(self, other):
        q = self.algebra.modulus
        return PDElement(self.algebra, tuple((a - b) % q for a, b in zip(self.coeffs, other.coeffs)),
                         self.saturated or other.saturated)

    def scale(self, c: int) -> "PDElement":
        q = self.algebra.modulus
        return PDElement(self.algebra, tuple(a * c % q for a in self.coeffs), self.saturated)

    def __mul__(self, other):
        alg = self.algebra
        if isinstance(other, int):
            return self.scale(other)
        q, M = alg.modulus, alg.top
        out = [0] * (M + 1)
        sat = self.saturated or other.saturated
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                if not b:
                    continue
                if i + j > M:
                    sat = True
                    continue
                out[i + j] = (out[i + j] + a * b * comb(i + j, i)) % q
        return PDElement(alg, tuple(out), sat)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        out = self.algebra.one()
        for _ in range(e):
            out = out * self
        return out

    def reduce_mod_p(self) -> Tuple[int, ...]:
        return tuple(c % self.algebra.prime for c in self.coeffs)


def pd_frobenius(x: PDElement) -> PDElement:
    """Linear extension of ``gamma_n -> (pn)!/n! gamma_{pn}``."""
    alg = x.algebra
    p, q = alg.prime, alg.modulus
    out = [0] * (alg.top + 1)
    sat = x.saturated
    for n, c in enumerate(x.coeffs):
        if not c:
            continue
        if p * n > alg.top:
            sat = True
            continue
        out[p * n] = (out[p * n] + c * (factorial(p * n) // factorial(n))) % q
    return PDElement(alg, tuple(out), sat)


def pd_fiber_algebra(alg: PDAlgebra):
    """``D/(p)`` as a finite local ``F_p``-algebra on ``gamma_0..gamma_M``."""
    p, M = alg.prime, alg.top
    table = np.zeros((M + 1, M + 1, M + 1), dtype=np.int64)
    for i in range(M + 1):
        for j in range(M + 1 - i):
            table[i, j, i + j] = comb(i + j, i) % p
    return algebra_from_table(p, [f"g{i}" for i in range(M + 1)], table)


@dataclass
class CounterexampleReport:
    prime: int
    precision: int
    top: int
    t_nonzero: bool
    t_p_zero: bool
    flatness: FlatnessCertificate
    regularity: object
    small_base: object
    checks: List[CheckRecord] = field(default_factory=list)

    @property
    def not_faithfully_flat(self) -> bool:
        return not self.flatness.flat


def counterexample_report(p: int, N: int = 3, M: int = None) -> CounterexampleReport:
    """Regular ``F_p`` over ``Z_p[[T]]`` whose pd-model Frobenius is not flat."""
    from .cohen import build_presentation, small_base_check
    from .localring import regularity_verdict

    if not is_prime(p):
        raise ValueError(f"{p} is not a prime number")
    M = p * p if M is None else M
    if M < p * p or N < 2:
        raise WindowTooSmall(f"need top index >= p^2 = {p * p} and precision >= 2 (got M={M}, N={N})")
    alg = pd_build(p, N, M)
    T = alg.T()
    t_fiber = T.reduce_mod_p()
    tp_fiber = (T ** p).reduce_mod_p()
    t_nonzero = any(t_fiber)
    t_p_zero = not any(tp_fiber)
    flat = frobenius_flat(pd_fiber_algebra(alg))

    base = DeltaRingSpec.standard(p, max(N, 2), max(p, 2), ("T",))
    ring = base.ring
    pres = build_presentation(base, [ring.p(), ring.var(0)])
    verdict = regularity_verdict(pres.to_local_presentation())
    small = small_base_check(pres)

    checks = [
        CheckRecord("T nonzero in D/(p)", t_nonzero, {"T": list(t_fiber[:2])}),
        CheckRecord("T^p = 0 in D/(p)", t_p_zero,
                    {"T^p": f"{factorial(p)} * gamma_{p}", "p divides p!": True}),
        CheckRecord("Frobenius on D/(p) flat", flat.flat,
                    {"generators": flat.generators_needed, "length_module": flat.length_module,
                     "length_ring": flat.length_ring}),
        CheckRecord("F_p regular", verdict.status.value == "ProvenRegular",
                    {"status": verdict.status.value, "dim": verdict.dim, "emdim": verdict.emdim}),
        CheckRecord("small base", small.small,
                    {"dim_A": small.dim_A, "emdim_R_plus_1": small.emdim + 1}),
    ]
    return CounterexampleReport(p, N, M, t_nonzero, t_p_zero, flat, verdict, small, checks)
