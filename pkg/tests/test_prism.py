import random

import pytest
from hypothesis import given, settings, strategies as st

from helpers import el, spec
from prismlab.arith import fiber_reduce, random_series
from prismlab.common import UNDECIDED
from prismlab.errors import MembershipFailed, NotDistinguished, WindowTooSmall
from prismlab.prism import (PrismKind, classify, classify_f, combination_witness,
                            normalize_orientation, regseq_suite, verify_prism)

CURATED = [
    # (prime, variables, orientation, kind)
    (5, (), "p", PrismKind.CRYSTALLINE),
    (5, ("T",), "p - T^2", PrismKind.TRANSVERSAL),
    (3, ("T",), "p - T", PrismKind.TRANSVERSAL),
    (5, ("T", "S"), "p - T*S", PrismKind.TRANSVERSAL),
    (5, ("T",), "2*p - T", PrismKind.TRANSVERSAL),
    (3, ("T",), "p - p*T", PrismKind.CRYSTALLINE),
    (2, ("T",), "p + T^3", PrismKind.TRANSVERSAL),
]


def curated_prism(p, variables, d_text, N=6, D=12):
    s = spec(p, N, D, variables)
    return verify_prism(s, el(d_text, s))


def test_verify_examples():
    assert curated_prism(5, (), "p").kind is PrismKind.CRYSTALLINE
    assert curated_prism(5, ("T",), "p - T^2").kind is PrismKind.TRANSVERSAL
    s = spec(5)
    with pytest.raises(NotDistinguished):
        verify_prism(s, el("T", s))


def test_certificate_witness_reproduces_p():
    pr = curated_prism(5, ("T",), "p - T^2")
    names = [c.name for c in pr.certificates]
    assert "distinguished" in names and "p in I + phi(I)A" in names


def test_normalize_examples():
    s = spec(5)
    n = normalize_orientation(s, el("p", s))
    assert n.f.is_zero() and n.unit == s.ring.one()
    n = normalize_orientation(s, el("2*p - T", s))
    assert n.unit.constant_term() == 2
    assert fiber_reduce(n.f) == fiber_reduce(el("3*T", s))
    assert n.unit * n.orientation == el("2*p - T", s)
    with pytest.raises(NotDistinguished):
        normalize_orientation(s, el("T", s))


def test_classify_examples():
    s = spec(5)
    assert classify_f(s.ring.zero()) is PrismKind.CRYSTALLINE
    assert classify_f(el("T^2", s)) is PrismKind.TRANSVERSAL
    assert classify_f(el("p*T", s)) is PrismKind.CRYSTALLINE


@pytest.mark.parametrize("p,variables,d_text,kind", CURATED)
def test_nine_conditions_agree(p, variables, d_text, kind):
    pr = curated_prism(p, variables, d_text)
    assert classify(pr) is kind
    rep = regseq_suite(pr, i_max=1)
    assert rep.agree, rep.verdicts
    assert rep.value is (kind is PrismKind.TRANSVERSAL)
    assert set(rep.verdicts) == set(range(1, 10))


@pytest.mark.parametrize("p,variables,d_text,kind", CURATED[:4])
def test_nine_conditions_stable_under_powers(p, variables, d_text, kind):
    pr = curated_prism(p, variables, d_text, N=6, D=24)
    base = regseq_suite(pr, i_max=1)
    powered = regseq_suite(pr, i_max=1, exponent=2)
    assert powered.verdicts == base.verdicts


def test_regseq_window_guard():
    pr = curated_prism(5, ("T",), "p - T^3", D=12)
    with pytest.raises(WindowTooSmall):
        regseq_suite(pr)


@pytest.mark.parametrize("p,variables,d_text,kind", CURATED)
def test_normalized_orientation_reverifies(p, variables, d_text, kind):
    s = spec(p, 6, 12, variables)
    n = normalize_orientation(s, el(d_text, s))
    again = verify_prism(s, n.orientation)
    assert again.kind is kind
    assert n.unit * n.orientation == n.d


@pytest.mark.parametrize("p,variables,d_text,kind", CURATED)
def test_unit_rescaling_invariance(p, variables, d_text, kind):
    s = spec(p, 6, 12, variables)
    d = el(d_text, s)
    base = regseq_suite(verify_prism(s, d), i_max=1)
    rng = random.Random(f"units:{d_text}")
    for _ in range(20):
        u = random_series(s.ring, rng, max_terms=3, max_degree=3, unit=True)
        pr = verify_prism(s, u * d)
        assert pr.kind is kind
        assert classify(pr) is kind
    # one rescaled suite run is enough to see the verdicts survive
    assert regseq_suite(pr, i_max=1).verdicts == base.verdicts


def test_combination_witness_failure():
    s = spec(5)
    with pytest.raises(MembershipFailed):
        combination_witness(s.ring.one(), [el("T", s), el("p", s)])
    a, b = combination_witness(el("p + T^2", s), [el("p", s), el("T", s)])
    assert a * el("p", s) + b * el("T", s) == el("p + T^2", s)


@settings(max_examples=30)
@given(st.sampled_from([2, 3, 5]), st.integers(0, 10 ** 6))
def test_random_distinguished_elements_verify(p, seed):
    s = spec(p, 5, 10)
    rng = random.Random(seed)
    h = random_series(s.ring, rng, max_terms=3, max_degree=4, in_max_ideal=True).without_constant()
    c = p * rng.choice([x for x in range(1, p * p) if x % p])
    d = s.ring.const(c) + h
    pr = verify_prism(s, d)
    assert pr.kind is classify_f(normalize_orientation(s, d).f)
    assert (pr.kind is PrismKind.TRANSVERSAL) == (not fiber_reduce(h).is_zero())
