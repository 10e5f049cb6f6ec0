"""Cohen presentations ``R = A/(p - f, g_1..g_r)``: orientation search,
small-base test, and verification of coordinate-change automorphisms.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Sequence

from .arith import TruncSeries, series_inv
from .common import CheckRecord
from .delta import DeltaRingSpec
from .errors import (CommutationFailed, MembershipFailed, NoOrientationFound,
                     NotInvertibleModM)
from .exactalg import fp_reduce
from .localring import LocalPresentation, emdim, linear_part
from .prism import Normalization, Prism, combination_witness, normalize_orientation, verify_prism


def rewrite_p(g: TruncSeries, f: TruncSeries, rounds: Optional[int] = None) -> TruncSeries:
    """Replace ``p`` by ``f`` until every coefficient is a single digit.

    The result agrees with ``g`` modulo ``(p - f)`` in the window.  Each round
    pushes the non-digit part one ``T``-degree up, so ``D + 1`` rounds suffice.
    """
    ring = g.ring
    p = ring.prime
    rounds = ring.degree_cap + 1 if rounds is None else rounds
    cur = g
    for _ in range(rounds):
        digits = {m: c % p for m, c in cur.terms.items() if c % p}
        low = TruncSeries(ring, digits, cur.precision)
        high = cur - low
        if high.is_zero():
            return cur
        cur = low + f * high.divide_by_p().lift(cur.precision)
    return cur


@dataclass
class CohenPresentation:
    base: DeltaRingSpec
    kernel_gens: List[TruncSeries]
    chosen_index: int
    normalization: Normalization
    residual_gens: List[TruncSeries]
    prism: Prism
    witness: List[TruncSeries] = field(default_factory=list)

    @property
    def orientation_f(self) -> TruncSeries:
        return self.normalization.f

    def to_local_presentation(self) -> LocalPresentation:
        return LocalPresentation(self.base, self.orientation_f, tuple(self.residual_gens))


def build_presentation(base: DeltaRingSpec, kernel_gens: Sequence[TruncSeries]) -> CohenPresentation:
    """Pick a kernel generator with nonzero ``p``-coordinate and orient by it.

    An ideal element has ``p``-coordinate equal to a combination of the
    generators' ``p``-coordinates, so when no single generator qualifies no
    combination does either.
    """
    gens = list(kernel_gens)
    lin = [linear_part(g) for g in gens]
    choice = next((i for i, v in enumerate(lin) if v[0]), None)
    if choice is None:
        raise NoOrientationFound("no generator has a nonzero p-coordinate in m/m^2", lin)
    d = gens[choice]
    norm = normalize_orientation(base, d)
    prism = verify_prism(base, norm.orientation)
    residual = [rewrite_p(g, norm.f) for i, g in enumerate(gens) if i != choice]
    # p - f = u^-1 * d, the witness that the orientation lies in the kernel
    witness = [series_inv(norm.unit) if i == choice else base.ring.zero() for i in range(len(gens))]
    return CohenPresentation(base, gens, choice, norm, residual, prism, witness)


@dataclass
class SmallBaseReport:
    dim_A: int
    emdim: int
    small: bool
    minimal: bool


def small_base_check(pres) -> SmallBaseReport:
    """``dim A <= emdim R + 1`` (small) and equality (minimal)."""
    local = pres.to_local_presentation() if isinstance(pres, CohenPresentation) else pres
    dim_a = local.n + 1
    e = emdim(local)
    return SmallBaseReport(dim_a, e, dim_a <= e + 1, dim_a == e + 1)


# --- coordinate changes -------------------------------------------------------

@dataclass
class CorrespondenceReport:
    matrix: List[List[TruncSeries]]
    images: List[TruncSeries]
    checks: List[CheckRecord]
    window: dict


def _member_of_principal(x: TruncSeries, d: TruncSeries, what: str):
    try:
        (c,) = combination_witness(x, [d])
    except MembershipFailed as exc:
        raise CommutationFailed(f"{what}: {x.to_text()} is not in ({d.to_text()})") from exc
    assert c * d == x
    return c


def correspondence_automorphism(base: DeltaRingSpec, orientation: TruncSeries,
                                orientation_prime: Optional[TruncSeries],
                                matrix: Sequence[Sequence[TruncSeries]],
                                x_prime: Optional[Sequence[TruncSeries]] = None):
    """Verify the substitution ``T_i -> sum_k m_ik T_k`` between two presentations.

    ``orientation`` generates ``I`` and ``orientation_prime`` generates ``I'``
    (default ``I' = I``).  Checks that the matrix is invertible modulo
    ``(p, T)``, that the substitution carries ``I'`` into ``I`` and, when the
    images ``x'_i`` are supplied, that ``F(T_i) = x'_i`` modulo ``I``.
    """
    ring = base.ring
    n = ring.nvars
    p = ring.prime
    rows = [list(r) for r in matrix]
    if len(rows) != n or any(len(r) != n for r in rows):
        raise ValueError(f"matrix must be {n} x {n}")
    rows = [[e if isinstance(e, TruncSeries) else ring.const(e) for e in r] for r in rows]
    residue = [[e.constant_term() % p for e in r] for r in rows]
    rank = fp_reduce(residue, p, cols=n).rank if n else 0
    if rank < n:
        raise NotInvertibleModM(f"matrix has rank {rank} < {n} modulo (p, T)")
    gens = ring.gens()
    images = []
    for r in rows:
        img = ring.zero()
        for e, t in zip(r, gens):
            img = img + e * t
        images.append(img)
    checks = [CheckRecord("invertible modulo (p, T)", True, {"rank": rank, "residue": residue})]
    d_prime = orientation if orientation_prime is None else orientation_prime
    moved = d_prime.substitute(images)
    c = _member_of_principal(moved, orientation, "F(I') inside I")
    checks.append(CheckRecord("F(I') inside I", True,
                              {"F(d')": moved.to_text(), "coefficient": c.to_text(),
                               "degrees_checked": ring.degree_cap}))
    if x_prime is not None:
        for i, (img, xp) in enumerate(zip(images, x_prime)):
            ci = _member_of_principal(img - xp, orientation, f"F(T_{i + 1}) = x'_{i + 1}")
            checks.append(CheckRecord(f"F(T_{i + 1}) = x'_{i + 1} mod I", True,
                                      {"coefficient": ci.to_text()}))
    window = {"precision": ring.precision, "degree_cap": ring.degree_cap}
    return rows, CorrespondenceReport(rows, images, checks, window)
