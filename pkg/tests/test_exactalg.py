import itertools
import random

import numpy as np
import pytest
from hypothesis import given, strategies as st

from prismlab.errors import NoSolution
from prismlab.exactalg import fp_reduce, howell_form, howell_solve, matvec_mod, quotient_length

from helpers import rank_mod_p


def test_fp_reduce_examples():
    r = fp_reduce(np.identity(3, dtype=int).tolist(), 5)
    assert r.rank == 3 and r.kernel_basis == []
    r = fp_reduce([[0, 0, 0], [0, 0, 0]], 5)
    assert r.rank == 0 and len(r.kernel_basis) == 3
    r = fp_reduce([[1, 2], [2, 4]], 5)
    assert r.rank == 1
    (k,) = r.kernel_basis
    assert matvec_mod([[1, 2], [2, 4]], k, 5) == [0, 0]
    assert k[0] * 1 % 5 == 3 * k[1] % 5            # proportional to (3, 1)


@given(st.sampled_from([2, 3, 5, 7]), st.integers(1, 5), st.integers(1, 6), st.integers(0, 10**9))
def test_fp_reduce_rank_nullity(p, rows, cols, seed):
    rng = random.Random(seed)
    m = [[rng.randrange(p) for _ in range(cols)] for _ in range(rows)]
    r = fp_reduce(m, p)
    assert r.rank + len(r.kernel_basis) == cols
    assert r.rank == rank_mod_p(m, p)
    for v in r.kernel_basis:
        assert not any(matvec_mod(m, v, p))
    # reduced row echelon: pivot entries 1, zero elsewhere in pivot columns
    for i, c in enumerate(r.pivots):
        assert [row[c] for row in r.rref] == [1 if j == i else 0 for j in range(r.rank)]


def test_howell_solve_examples():
    with pytest.raises(NoSolution):
        howell_solve([[2]], [1], 2, 3)
    assert howell_solve([[1]], [7], 2, 3).particular == [7]
    sol = howell_solve([[3]], [9], 3, 3)
    assert sol.particular[0] * 3 % 27 == 9
    brute = [x for x in range(27) if 3 * x % 27 == 9]
    assert sorted({(sol.particular[0] + k * 9) % 27 for k in range(3)}) == brute
    assert [g[0] % 27 for g in sol.kernel_gens] == [9]


def _span(gens, q, n):
    out = {tuple([0] * n)}
    frontier = list(out)
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = tuple((a + b) % q for a, b in zip(x, g))
                if y not in out:
                    out.add(y)
                    nxt.append(y)
        frontier = nxt
    return out


def test_howell_brute_force_300_systems():
    rng = random.Random(7)
    for _ in range(300):
        p, N = rng.choice([(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (5, 1), (5, 2), (5, 3)])
        q = p ** N
        if q > 125:
            continue
        rows, cols = rng.randint(1, 3), rng.randint(1, 3)
        if q ** max(rows, cols) > 15625:
            rows, cols = min(rows, 2), min(cols, 2)
        m = [[rng.choice([0, rng.randrange(q), p * rng.randrange(q)]) % q for _ in range(cols)]
             for _ in range(rows)]
        b = [rng.randrange(q) for _ in range(rows)]
        all_x = list(itertools.product(range(q), repeat=cols))
        sols = [x for x in all_x if matvec_mod(m, x, q) == [v % q for v in b]]
        kernel = {x for x in all_x if not any(matvec_mod(m, x, q))}
        try:
            sol = howell_solve(m, b, p, N)
        except NoSolution:
            assert not sols
            continue
        assert matvec_mod(m, sol.particular, q) == [v % q for v in b]
        assert _span(sol.kernel_gens, q, cols) == kernel
        # quotient length of the row span of m^T... compare |Z^rows / col span|
        colspan = _span([tuple(m[i][j] for i in range(rows)) for j in range(cols)], q, rows)
        size, length = q ** rows // len(colspan), 0
        while size > 1:
            size //= p
            length += 1
        mt = [[m[i][j] for i in range(rows)] for j in range(cols)]
        assert quotient_length(mt, p, N, rows) == length


def test_howell_form_is_echelon_with_prime_power_pivots():
    rng = random.Random(3)
    for _ in range(50):
        m = [[rng.randrange(125) for _ in range(4)] for _ in range(3)]
        h = howell_form(m, 5, 3)
        last = -1
        for row in h:
            nz = [i for i, v in enumerate(row) if v]
            assert nz and nz[0] > last
            last = nz[0]
            piv = int(row[nz[0]])
            assert piv in (1, 5, 25)
