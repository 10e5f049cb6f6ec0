"""Presented complete local rings ``R = Z_p[[T_1..T_n]]/(p - f, g_1..g_r)``.

Regularity is decided three ways and the verdict says which one fired:
independent linear parts (regular), ``emdim`` against a certified
dimension, or an exact Hilbert-Samuel length that leaves the binomial
pattern of a regular ring (singular).  Anything else is UNDECIDED.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from math import comb
from typing import List, Optional, Sequence, Tuple

from .arith import TruncSeries, fiber_reduce, monomials_upto
from .delta import DeltaRingSpec
from .errors import NotInMaximalIdeal, UnitIdeal, WindowTooSmall
from .exactalg import fp_reduce, quotient_length
from .groebner import dim_of


@dataclass(frozen=True)
class LocalPresentation:
    base: DeltaRingSpec
    orientation_f: TruncSeries
    extra_gens: Tuple[TruncSeries, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "extra_gens", tuple(self.extra_gens))
        p = self.ring.prime
        if self.orientation_f.constant_term() % p:
            raise NotInMaximalIdeal("orientation f must lie in the maximal ideal")
        for g in self.extra_gens:
            if g.constant_term() % p:
                raise NotInMaximalIdeal(f"generator {g.to_text()} is a unit")

    @property
    def ring(self):
        return self.base.ring

    @property
    def n(self) -> int:
        return self.ring.nvars

    def generators(self) -> List[TruncSeries]:
        return [self.ring.p() - self.orientation_f] + list(self.extra_gens)

    def pruned(self) -> "LocalPresentation":
        """Drop zero and exactly repeated extra generators."""
        seen, keep = set(), []
        orient = self.ring.p() - self.orientation_f
        for g in self.extra_gens:
            if g.is_zero() or g == orient or g in seen:
                continue
            seen.add(g)
            keep.append(g)
        return LocalPresentation(self.base, self.orientation_f, tuple(keep))

    def fiber_gens(self):
        return [fiber_reduce(self.orientation_f)] + [fiber_reduce(g) for g in self.extra_gens]


def linear_part(g: TruncSeries) -> List[int]:
    """Image of ``g`` in ``m/m^2`` in the basis ``(p, T_1..T_n)``."""
    ring = g.ring
    p = ring.prime
    c0 = g.constant_term()
    if c0 % p:
        raise NotInMaximalIdeal(f"{g.to_text()} is a unit")
    if g.precision < 2:
        raise ValueError("linear parts need precision >= 2")
    vec = [(c0 // p) % p]
    for i in range(ring.nvars):
        m = tuple(1 if k == i else 0 for k in range(ring.nvars))
        vec.append(g.terms.get(m, 0) % p)
    return vec


def linear_part_matrix(pres: LocalPresentation):
    return [linear_part(g) for g in pres.generators()]


def emdim(pres: LocalPresentation) -> int:
    rank = fp_reduce(linear_part_matrix(pres), pres.ring.prime, cols=pres.n + 1).rank
    return pres.n + 1 - rank


@dataclass
class DimEstimate:
    dim: int
    certified: bool
    fiber_dim: int
    p_status: str            # "regular", "zero" or "unknown"
    reason: str


def dim_estimate(pres: LocalPresentation) -> DimEstimate:
    """Krull dimension of ``R`` from its special fiber ``F_p[T]/(fbar, gbar)``.

    ``dim R`` is ``s`` or ``s + 1`` where ``s`` is the fiber dimension,
    according to whether ``p`` is nilpotent or regular on ``R``.
    """
    pres = pres.pruned()
    n = pres.n
    fib = pres.fiber_gens()
    try:
        s = dim_of(fib, n)
    except UnitIdeal:
        raise UnitIdeal("presentation collapses to the zero ring") from None
    nonzero = [g for g in fib if g]
    homogeneous = all(g.is_homogeneous() for g in nonzero)
    local_ok = homogeneous or s == 0
    fbar = fib[0]
    if fbar.is_zero():
        # p - f = p * unit, so p = 0 in R and R = F_p[[T]]/(gbar)
        why = "p = 0 in R; fiber dimension " + ("is local" if local_ok else "is global only")
        return DimEstimate(s, local_ok, s, "zero", why)
    r = len(pres.extra_gens)
    if s == n - 1 - r:
        # (fbar, gbar) regular in F_p[T] and vanishing at 0: a regular sequence
        # of F_p[[T]] too, so p is a nonzerodivisor on R.
        return DimEstimate(s + 1, True, s, "regular",
                           "fiber generators form a regular sequence; p regular on R")
    return DimEstimate(s, False, s, "unknown",
                       "fiber generators are not a regular sequence; p may be a zero-divisor")


def _hs_window(pres: LocalPresentation, s_max: int):
    ring = pres.ring
    if s_max > ring.precision or s_max - 1 > ring.degree_cap:
        raise WindowTooSmall(
            f"s_max={s_max} needs precision >= {s_max} and degree cap >= {s_max - 1} "
            f"(have N={ring.precision}, D={ring.degree_cap})")


def hs_length(pres: LocalPresentation, s: int) -> int:
    """Exact length of ``R/m^s`` as a module over ``Z/p^s``.

    ``A/m^s`` is the direct sum of ``Z/p^(s-|b|) T^b`` over ``|b| < s``; the
    image of ``(p - f, g)`` is spanned by the multiples ``T^c * gen`` with
    ``|c| < s``, and the colength is read off a Howell form.
    """
    _hs_window(pres, s)
    ring = pres.ring
    p = ring.prime
    monos = monomials_upto(pres.n, s - 1)
    index = {m: i for i, m in enumerate(monos)}
    q = p ** s
    rows = []
    for b in monos:
        row = [0] * len(monos)
        row[index[b]] = p ** (s - sum(b)) % q
        if any(row):
            rows.append(row)
    for g in pres.generators():
        for c in monos:
            row = [0] * len(monos)
            for m, coeff in g.terms.items():
                nb = tuple(x + y for x, y in zip(m, c))
                if sum(nb) < s:
                    row[index[nb]] = (row[index[nb]] + coeff) % q
            if any(row):
                rows.append(row)
    return quotient_length(rows, p, s, len(monos))


def hilbert_samuel(pres: LocalPresentation, s_max: int) -> List[int]:
    """``[len(R/m^s) for s = 1..s_max]``."""
    _hs_window(pres, s_max)
    return [hs_length(pres, s) for s in range(1, s_max + 1)]


def regular_pattern(d: int, s_max: int) -> List[int]:
    return [comb(s - 1 + d, d) for s in range(1, s_max + 1)]


class RegularityStatus(str, Enum):
    PROVEN_REGULAR = "ProvenRegular"
    PROVEN_SINGULAR = "ProvenSingular"
    UNDECIDED = "Undecided"


@dataclass
class RegularityVerdict:
    status: RegularityStatus
    dim: Optional[int]
    emdim: int
    certificate: dict = field(default_factory=dict)
    blockers: List[str] = field(default_factory=list)


def default_hs_window(pres: LocalPresentation, wanted: int = 8) -> int:
    ring = pres.ring
    return max(0, min(wanted, ring.precision, ring.degree_cap + 1))


def regularity_verdict(pres: LocalPresentation, s_max: Optional[int] = None) -> RegularityVerdict:
    pres = pres.pruned()
    n = pres.n
    lin = linear_part_matrix(pres)
    rank = fp_reduce(lin, pres.ring.prime, cols=n + 1).rank
    e = n + 1 - rank
    count = len(lin)
    cert = {"linear_parts": lin, "linear_rank": rank, "generators": count}
    window = default_hs_window(pres) if s_max is None else s_max
    if count == rank:
        d = n + 1 - count
        cert["criterion"] = "generators have independent linear parts"
        if window >= 1:
            cert["hilbert_samuel"] = hilbert_samuel(pres, window)
        return RegularityVerdict(RegularityStatus.PROVEN_REGULAR, d, e, cert)
    est = dim_estimate(pres)
    cert["dimension"] = {"dim": est.dim, "certified": est.certified,
                         "fiber_dim": est.fiber_dim, "p": est.p_status, "reason": est.reason}
    if est.certified:
        if e > est.dim:
            cert["criterion"] = "embedding dimension exceeds certified dimension"
            return RegularityVerdict(RegularityStatus.PROVEN_SINGULAR, est.dim, e, cert)
        cert["criterion"] = "embedding dimension equals certified dimension"
        return RegularityVerdict(RegularityStatus.PROVEN_REGULAR, est.dim, e, cert)
    blockers = [f"linear parts dependent ({count} generators, rank {rank})",
                f"dimension not certified: {est.reason}"]
    if window >= 2:
        lengths = hilbert_samuel(pres, window)
        expected = regular_pattern(e, window)
        cert["hilbert_samuel"] = lengths
        for s, (got, want) in enumerate(zip(lengths, expected), start=1):
            if got != want:
                cert["criterion"] = (f"length(R/m^{s}) = {got} but a regular ring of "
                                     f"dimension emdim = {e} has {want}")
                return RegularityVerdict(RegularityStatus.PROVEN_SINGULAR, None, e, cert)
        blockers.append(f"Hilbert-Samuel lengths match the regular pattern up to s = {window}")
    else:
        blockers.append("Hilbert-Samuel window too small")
    return RegularityVerdict(RegularityStatus.UNDECIDED, None, e, cert, blockers)
