import time

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from helpers import brute_free, rank_mod_p
from prismlab.arith import FpPoly, SeriesRing, fiber_reduce
from prismlab.errors import NotArtinian, NotFree, NotLocal, UnitIdeal
from prismlab.kunzartin import (algebra_from_table, artin_build, direct_sum, free_rank_test,
                                frobenius_flat, frobenius_pushforward, ideal_module,
                                minimal_generators, regular_module)
from prismlab.pdenv import pd_build, pd_fiber_algebra
from prismlab.reader import parse_poly


def fp(p, texts, variables=("T", "S")):
    ring = SeriesRing(p, 2, 12, tuple(variables))
    return [fiber_reduce(parse_poly(t, ring)) for t in texts]


IDEALS = [["T", "S"], ["T^2", "S"], ["T^3", "S"], ["T^4", "S"], ["T^2", "S^2"],
          ["T^2", "T*S", "S^2"], ["T^2 - S", "S^2"], ["T^3", "T*S", "S^2"]]


def corpus(p):
    algs = [(f"{p}:{'/'.join(g)}", artin_build(fp(p, g))) for g in IDEALS]
    for top in range(1, 4):
        algs.append((f"{p}:pd{top}", pd_fiber_algebra(pd_build(p, 2, max(top, p)))))
    return [(name, a) for name, a in algs if a.dim <= 4]


def test_artin_build_examples():
    assert artin_build(fp(5, ["T^2"], ("T",))).dim == 2
    assert artin_build(fp(5, ["T", "S"])).dim == 1
    a = artin_build(fp(5, ["T^2 - S", "S^2"]))
    assert a.dim == 4 and a.is_associative() and a.is_commutative()
    with pytest.raises(NotArtinian):
        artin_build(fp(5, ["T"]))
    with pytest.raises(UnitIdeal):
        artin_build(fp(5, ["1", "T"]))
    with pytest.raises(NotLocal):
        artin_build(fp(5, ["1 + T", "S"]))
    with pytest.raises(NotLocal):
        artin_build(fp(5, ["T^2 - T", "S"]))


def test_flatness_examples():
    for p in (2, 3, 5):
        assert frobenius_flat(artin_build(fp(p, ["T", "S"]))).flat
        for e in (2, 3, 4):
            cert = frobenius_flat(artin_build(fp(p, [f"T^{e}"], ("T",))))
            assert not cert.flat
    cert = frobenius_flat(artin_build(fp(2, ["T^2"], ("T",))))
    assert (cert.generators_needed, cert.length_module, cert.length_ring) == (2, 2, 2)


def test_free_rank_examples():
    a = artin_build(fp(3, ["T^2"], ("T",)))
    assert free_rank_test(regular_module(a)).rank == 1
    assert free_rank_test(direct_sum(regular_module(a), regular_module(a))).rank == 2
    with pytest.raises(NotFree) as exc:
        free_rank_test(ideal_module(a, [a.unit_vector(1)]))
    assert (exc.value.generators, exc.value.module_length, exc.value.ring_length) == (1, 1, 2)


def _action(mod):
    p = mod.algebra.prime

    def act(k, v):
        return tuple(int(x) for x in (mod.action[k] @ np.array(v, dtype=np.int64)) % p)
    return act, mod.dim


@pytest.mark.parametrize("p", [2, 3, 5])
def test_flatness_agrees_with_brute_force(p):
    start = time.perf_counter()
    for name, alg in corpus(p):
        mod = frobenius_pushforward(alg)
        oracle = brute_free(alg, _action(mod), p)
        assert frobenius_flat(alg).flat == (oracle is not None), name
    assert time.perf_counter() - start < 10


@pytest.mark.parametrize("p", [2, 3, 5])
def test_flat_only_for_fields(p):
    for name, alg in corpus(p):
        if frobenius_flat(alg).flat:
            assert alg.dim == 1, name


@pytest.mark.parametrize("p", [2, 3])
def test_free_rank_of_powers(p):
    for name, alg in corpus(p):
        for k in (1, 2, 3):
            assert free_rank_test(direct_sum(*[regular_module(alg)] * k)).rank == k, name


def test_minimal_generators_matches_gaussian_elimination():
    for name, alg in corpus(3):
        mod = frobenius_pushforward(alg)
        rows = [[int(x) for x in mod.action[k] @ e % 3] for k in alg.max_ideal
                for e in np.identity(mod.dim, dtype=np.int64)]
        expect = mod.dim - (rank_mod_p(rows, 3) if rows else 0)
        assert minimal_generators(mod) == expect, name


def test_table_guards():
    with pytest.raises(ValueError):
        algebra_from_table(2, ["a"], np.zeros((2, 2, 2)))
    t = np.zeros((2, 2, 2), dtype=np.int64)
    t[0] = np.identity(2)
    t[1, 0, 1] = 1
    t[1, 1, 1] = 1            # idempotent: not local
    with pytest.raises(NotLocal):
        algebra_from_table(2, ["1", "e"], t)


@settings(max_examples=30)
@given(st.sampled_from([2, 3, 5]), st.integers(1, 5), st.integers(1, 4))
def test_monomial_algebras_flat_iff_field(p, a, b):
    alg = artin_build(fp(p, [f"T^{a}", f"S^{b}"]))
    assert alg.is_associative()
    assert frobenius_flat(alg).flat == (a == 1 and b == 1)
