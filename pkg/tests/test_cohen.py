import random

import pytest
from hypothesis import given, settings, strategies as st

from helpers import el, spec
from prismlab.arith import fiber_reduce, random_series
from prismlab.cohen import (build_presentation, correspondence_automorphism, rewrite_p,
                            small_base_check)
from prismlab.errors import CommutationFailed, NoOrientationFound, NotInvertibleModM
from prismlab.localring import LocalPresentation, RegularityStatus, regularity_verdict
from prismlab.prism import combination_witness, verify_prism


def test_single_orientation():
    s = spec(5)
    pres = build_presentation(s, [el("p - T^2", s)])
    assert pres.chosen_index == 0
    assert pres.orientation_f == el("T^2", s)
    assert pres.residual_gens == []
    rep = small_base_check(pres)
    assert (rep.dim_A, rep.emdim, rep.small, rep.minimal) == (2, 1, True, True)


def test_orientation_with_unit():
    s = spec(5)
    pres = build_presentation(s, [el("2*p - T", s), el("T^3", s)])
    assert fiber_reduce(pres.orientation_f) == fiber_reduce(el("3*T", s))
    assert len(pres.residual_gens) == 1
    v = regularity_verdict(pres.to_local_presentation())
    assert v.status is RegularityStatus.PROVEN_SINGULAR


def test_no_orientation():
    s = spec(5)
    with pytest.raises(NoOrientationFound):
        build_presentation(s, [el("T^2", s), el("T^3", s)])


def test_small_base_examples():
    s = spec(5)
    rep = small_base_check(build_presentation(s, [el("p", s), el("T", s)]))
    assert (rep.dim_A, rep.emdim + 1, rep.small, rep.minimal) == (2, 1, False, False)
    z = spec(5, variables=())
    rep = small_base_check(build_presentation(z, [el("p", z)]))
    assert (rep.small, rep.minimal) == (True, True)


def test_rewrite_p_example():
    s = spec(5)
    got = rewrite_p(el("p*T + p^2", s), el("T^2", s))
    assert got == el("T^4 + T^3", s)


@settings(max_examples=30)
@given(st.sampled_from([2, 3, 5]), st.integers(0, 10 ** 6))
def test_rewrite_p_stays_in_coset(p, seed):
    s = spec(p, 5, 8)
    rng = random.Random(seed)
    f = random_series(s.ring, rng, max_terms=2, max_degree=3, in_max_ideal=True).without_constant()
    if fiber_reduce(f).is_zero():
        return
    g = random_series(s.ring, rng, max_terms=3, max_degree=4)
    out = rewrite_p(g, f)
    diff = g - out
    # g - rewrite(g) lies in (p - f): check by exact division
    (c,) = combination_witness(diff, [s.ring.p() - f])
    assert c * (s.ring.p() - f) == diff


KERNELS = [
    (5, ("T",), ["p - T^2"]),
    (5, ("T",), ["2*p - T", "T^3"]),
    (3, ("T", "S"), ["p - T*S", "S^2"]),
    (3, ("T", "S"), ["p - T", "S - T^2"]),
    (2, ("T",), ["p", "T"]),
]


@pytest.mark.parametrize("p,variables,gens", KERNELS)
def test_built_orientation_is_a_prism(p, variables, gens):
    s = spec(p, 6, 12, variables)
    pres = build_presentation(s, [el(g, s) for g in gens])
    again = verify_prism(s, pres.prism.orientation)
    assert again.kind is pres.prism.kind


def test_orientation_choice_independence():
    s = spec(3, 6, 12, ("T", "S"))
    first = [el("p - T^2", s), el("p - S^3", s)]
    a = build_presentation(s, first)
    b = build_presentation(s, first[::-1])
    assert a.chosen_index == 0 and b.chosen_index == 0
    assert a.orientation_f != b.orientation_f
    va = regularity_verdict(a.to_local_presentation())
    vb = regularity_verdict(b.to_local_presentation())
    assert (va.status, va.dim, va.emdim) == (vb.status, vb.dim, vb.emdim)


@settings(max_examples=30)
@given(st.sampled_from([2, 3, 5]), st.integers(0, 10 ** 6))
def test_minimal_implies_small(p, seed):
    s = spec(p, 4, 6, ("T", "S"))
    rng = random.Random(seed)
    f = random_series(s.ring, rng, max_terms=3, max_degree=3, in_max_ideal=True)
    gens = tuple(random_series(s.ring, rng, max_terms=2, max_degree=3, in_max_ideal=True)
                 for _ in range(rng.randint(0, 2)))
    rep = small_base_check(LocalPresentation(s, f, gens))
    if rep.minimal:
        assert rep.small


def test_correspondence_identity():
    s = spec(5)
    rows, rep = correspondence_automorphism(s, el("p - T^2", s), None, [[1]], [el("T", s)])
    assert all(c.passed for c in rep.checks)


def test_correspondence_sign_flip():
    s = spec(5)
    _, rep = correspondence_automorphism(s, el("p - T^2", s), None, [[-1]], [el("-T", s)])
    assert [c.passed for c in rep.checks] == [True, True, True]
    assert rep.images == [el("-T", s)]


def test_correspondence_rejections():
    s = spec(5, variables=("T", "S"))
    with pytest.raises(NotInvertibleModM):
        correspondence_automorphism(s, el("p - T*S", s), None, [[1, 0], [0, 0]])
    t = spec(5)
    with pytest.raises(CommutationFailed):
        correspondence_automorphism(t, el("p - T^2", t), el("p - T", t), [[1]])
