import random
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from helpers import presentation
from prismlab.arith import FpPoly, SeriesRing, fiber_reduce, monomials_upto
from prismlab.common import UNDECIDED
from prismlab.errors import UnitIdeal, WindowTooSmall
from prismlab.koszul import (ht_filtration_table, ht_rank, koszul_homology_window,
                             lci_discreteness_check, regular_sequence_report,
                             regular_sequence_verdict)
from prismlab.reader import parse_poly

R2 = SeriesRing(5, 2, 12, ("T", "S"))


def fp(text, ring=R2):
    return fiber_reduce(parse_poly(text, ring))


def test_koszul_examples():
    assert koszul_homology_window([fp("T"), fp("S")], 4).vanishes(1)
    w = koszul_homology_window([fp("T"), fp("T")], 4)
    assert not w.vanishes(1)
    assert w.nonzero_degrees(1)[0] == 1
    assert koszul_homology_window([fp("T^2")], 5).vanishes(1)


def test_koszul_window_guard():
    with pytest.raises(WindowTooSmall):
        koszul_homology_window([fp("T^3")], 2)


def test_regular_sequence_examples():
    assert regular_sequence_verdict([fp("T"), fp("S")]) is True
    assert regular_sequence_verdict([fp("T*S"), fp("T")]) is False
    rep = regular_sequence_report([fp("T^2 - S"), fp("S^2")])
    assert rep.verdict is True and not rep.homogeneous and rep.dim == 0
    with pytest.raises(UnitIdeal):
        regular_sequence_verdict([fp("1"), fp("T")])


def test_inhomogeneous_failure_is_undecided():
    # (T*(1+S), T) has global dimension 1, so the drop is 1 < 2
    assert regular_sequence_verdict([fp("T + T*S"), fp("T")]) is UNDECIDED


def test_ht_examples():
    assert ht_rank(1, 5) == 1
    assert ht_rank(2, 3) == 4
    assert ht_rank(3, 2) == 6
    t = ht_filtration_table(2, 4)
    assert t.ranks == [1, 2, 3, 4, 5] and t.filtration == [1, 3, 6, 10, 15]
    assert ht_filtration_table(0, 5).ranks == [1, 0, 0, 0, 0, 0]
    assert set(ht_filtration_table(1, 7).ranks) == {1}


def test_ht_pascal_and_hockey_stick():
    for r in range(0, 7):
        for i in range(0, 13):
            if r >= 1 and i >= 1:
                assert ht_rank(r, i) == ht_rank(r - 1, i) + ht_rank(r, i - 1)
            assert sum(ht_rank(r, k) for k in range(i + 1)) == (comb(r + i, i) if r else 1)


def test_lci_examples():
    assert lci_discreteness_check(presentation("T^2")) is True
    assert lci_discreteness_check(presentation("T", ["S^2"], variables=("T", "S"))) is True
    assert lci_discreteness_check(presentation("T", ["S", "S"], variables=("T", "S"))) is False


def _random_homogeneous(rng, p, nvars, degree):
    terms = {m: rng.randrange(1, p) for m in monomials_upto(nvars, degree)
             if sum(m) == degree and rng.random() < 0.6}
    return FpPoly(p, nvars, terms)


@settings(max_examples=40)
@given(st.sampled_from([2, 3, 5]), st.integers(1, 3), st.integers(1, 2), st.integers(0, 10 ** 6))
def test_koszul_agrees_with_dimension(p, nvars, r, seed):
    rng = random.Random(seed)
    gens = [_random_homogeneous(rng, p, nvars, rng.randint(1, 2)) for _ in range(r)]
    if any(g.is_zero() for g in gens):
        return
    verdict = regular_sequence_verdict(gens, nvars)
    window = koszul_homology_window(gens, max(g.degree() for g in gens) * r + 2)
    assert window.certified
    assert window.vanishes(1) == (verdict is True)


@settings(max_examples=40)
@given(st.sampled_from([2, 3, 5]), st.integers(1, 3), st.integers(1, 3), st.integers(0, 10 ** 6))
def test_power_invariance(p, nvars, r, seed):
    rng = random.Random(seed)
    gens = [_random_homogeneous(rng, p, nvars, rng.randint(1, 2)) for _ in range(r)]
    if any(g.is_zero() for g in gens):
        return
    powered = [g ** rng.randint(1, 3) for g in gens]
    assert regular_sequence_verdict(gens, nvars) == regular_sequence_verdict(powered, nvars)
