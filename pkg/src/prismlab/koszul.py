"""Koszul homology on the special fiber, regular sequences, Hodge-Tate ranks."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import comb
from typing import Dict, List, Sequence, Tuple

from .arith import FpPoly, fiber_reduce, monomials_upto
from .common import UNDECIDED
from .errors import UnitIdeal, WindowTooSmall
from .exactalg import fp_reduce
from .groebner import dim_of


@dataclass
class KoszulWindow:
    gens: Tuple[FpPoly, ...]
    degree_window: int
    homology_dims: Dict[Tuple[int, int], int]
    certified: bool

    def vanishes(self, i: int = 1) -> bool:
        return all(v == 0 for (k, _), v in self.homology_dims.items() if k == i)

    def nonzero_degrees(self, i: int = 1) -> List[int]:
        return sorted(t for (k, t), v in self.homology_dims.items() if k == i and v)


def _piece(weights, nvars, i, t, graded):
    """Basis of ``K_i`` in degree ``t`` (graded) or degree ``<= t`` (filtered)."""
    basis = []
    for S in combinations(range(len(weights)), i):
        w = sum(weights[j] for j in S)
        if t < w:
            continue
        monos = monomials_upto(nvars, t - w)
        if graded:
            monos = [m for m in monos if sum(m) == t - w]
        basis.extend((S, m) for m in monos)
    return basis


def _differential(gens, src, dst, p):
    """Matrix (rows = source basis) of ``e_S -> sum_k (-1)^k g_{s_k} e_{S - s_k}``."""
    index = {b: j for j, b in enumerate(dst)}
    rows = []
    for S, mu in src:
        row = [0] * len(dst)
        for k, s in enumerate(S):
            rest = S[:k] + S[k + 1:]
            sign = -1 if k % 2 else 1
            for m, c in gens[s].terms.items():
                key = (rest, tuple(a + b for a, b in zip(m, mu)))
                j = index.get(key)
                if j is not None:
                    row[j] = (row[j] + sign * c) % p
        rows.append(row)
    return rows


def _rank(rows, cols, p):
    if not rows or not cols:
        return 0
    return fp_reduce(rows, p, cols=cols).rank


def koszul_homology_window(gens: Sequence[FpPoly], degree_window: int) -> KoszulWindow:
    """Dimensions of ``H_i(K(gens))`` for ``i >= 1`` in degrees up to the window.

    Homogeneous input gives exact graded dimensions.  Otherwise the complex
    is cut by the degree filtration (entry ``t`` is the homology of the
    subcomplex of degree ``<= t``) and the numbers are flagged heuristic.
    """
    gens = tuple(gens)
    if not gens:
        return KoszulWindow(gens, degree_window, {}, True)
    p, n = gens[0].prime, gens[0].nvars
    graded = all(g.is_homogeneous() and not g.is_zero() for g in gens)
    weights = [max(g.degree(), 0) for g in gens]
    if degree_window < max(weights):
        raise WindowTooSmall(f"degree window {degree_window} is below generator degree {max(weights)}")
    r = len(gens)
    dims = {}
    for t in range(degree_window + 1):
        pieces = [_piece(weights, n, i, t, graded) for i in range(r + 1)]
        ranks = [0] * (r + 2)
        for i in range(1, r + 1):
            if pieces[i] and pieces[i - 1]:
                ranks[i] = _rank(_differential(gens, pieces[i], pieces[i - 1], p), len(pieces[i - 1]), p)
        for i in range(1, r + 1):
            dims[(i, t)] = len(pieces[i]) - ranks[i] - ranks[i + 1]
    return KoszulWindow(gens, degree_window, dims, graded)


@dataclass
class RegularSequenceReport:
    verdict: object
    dim: int
    nvars: int
    length: int
    homogeneous: bool
    note: str


def regular_sequence_report(gens: Sequence[FpPoly], nvars: int = None) -> RegularSequenceReport:
    gens = list(gens)
    if nvars is None:
        if not gens:
            raise ValueError("nvars is required for an empty sequence")
        nvars = gens[0].nvars
    r = len(gens)
    dim = dim_of(gens, nvars)          # UnitIdeal propagates
    homogeneous = all(g.is_homogeneous() for g in gens)
    if nvars - dim == r:
        return RegularSequenceReport(True, dim, nvars, r, homogeneous,
                                     "dimension drops by the sequence length")
    if homogeneous:
        return RegularSequenceReport(False, dim, nvars, r, homogeneous,
                                     f"dimension drop {nvars - dim} is not {r}")
    return RegularSequenceReport(UNDECIDED, dim, nvars, r, homogeneous,
                                 f"global dimension drop {nvars - dim} is not {r}; "
                                 "local behaviour at the origin may differ")


def regular_sequence_verdict(gens: Sequence[FpPoly], nvars: int = None):
    """True, False or UNDECIDED (Cohen-Macaulay dimension criterion)."""
    return regular_sequence_report(gens, nvars).verdict


# --- Hodge-Tate ranks ---------------------------------------------------------

def ht_rank(r: int, i: int) -> int:
    if r < 0 or i < 0:
        raise ValueError("r and i must be non-negative")
    if r == 0:
        return 1 if i == 0 else 0
    return comb(r + i - 1, i)


@dataclass
class HTTable:
    r: int
    ranks: List[int]
    filtration: List[int]
    twists: List[int] = field(default_factory=list)


def ht_filtration_table(r: int, j_max: int) -> HTTable:
    ranks = [ht_rank(r, i) for i in range(j_max + 1)]
    fil, acc = [], 0
    for x in ranks:
        acc += x
        fil.append(acc)
    return HTTable(r, ranks, fil, [-i for i in range(j_max + 1)])


def lci_discreteness_check(pres):
    """Whether the extra generators are a regular sequence on ``B = A/(p - f)``.

    First the fiber test: a regular sequence on ``B/p`` lifts because ``B``
    is p-torsion-free or equal to its fiber.  Failing that, ``B`` is regular
    local of dimension ``n``, hence Cohen-Macaulay, and the sequence is
    regular exactly when ``dim B/(g) = n - r``; this decides whenever that
    dimension is certified.
    """
    from .localring import dim_estimate

    r = len(pres.extra_gens)
    if r == 0:
        return True
    n = pres.n
    fbar = fiber_reduce(pres.orientation_f)
    gbar = [fiber_reduce(g) for g in pres.extra_gens]
    seq = gbar if fbar.is_zero() else [fbar] + gbar
    try:
        fiber_verdict = regular_sequence_verdict(seq, n)
    except UnitIdeal:
        fiber_verdict = False
    if fiber_verdict is True:
        return True
    est = dim_estimate(pres)
    if est.certified:
        return est.dim == n - r
    return UNDECIDED
