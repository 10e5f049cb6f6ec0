"""Shared builders and independent brute-force oracles for the test-suite."""
import itertools
import random

from prismlab.arith import SeriesRing, TruncSeries, random_series
from prismlab.delta import DeltaRingSpec
from prismlab.localring import LocalPresentation
from prismlab.reader import parse_poly


def ring(p=5, N=6, D=12, variables=("T",)):
    return SeriesRing(p, N, D, tuple(variables))


def spec(p=5, N=6, D=12, variables=("T",)):
    return DeltaRingSpec.standard(p, N, D, tuple(variables))


def el(text, where):
    return parse_poly(text, where)


def presentation(f, gens=(), p=5, N=6, D=12, variables=("T",)):
    s = spec(p, N, D, variables)
    return LocalPresentation(s, el(f, s), tuple(el(g, s) for g in gens))


def egcd_inverse(a, m):
    """Modular inverse by the extended Euclidean algorithm."""
    r0, r1, s0, s1 = m, a % m, 0, 1
    while r1:
        q = r0 // r1
        r0, r1, s0, s1 = r1, r0 - q * r1, s1, s0 - q * s1
    if r0 != 1:
        raise ValueError("not invertible")
    return s0 % m


def schoolbook_mul(a: TruncSeries, b: TruncSeries):
    """Dictionary product with explicit truncation, independent of series_mul."""
    q = a.ring.prime ** min(a.precision, b.precision)
    out = {}
    for ma, ca in a.terms.items():
        for mb, cb in b.terms.items():
            m = tuple(x + y for x, y in zip(ma, mb))
            if sum(m) <= a.ring.degree_cap:
                out[m] = (out.get(m, 0) + ca * cb) % q
    return {m: c for m, c in out.items() if c}


def rank_mod_p(rows, p):
    """Plain Gaussian elimination over F_p."""
    rows = [[x % p for x in r] for r in rows]
    rank, col = 0, 0
    ncols = len(rows[0]) if rows else 0
    while rank < len(rows) and col < ncols:
        piv = next((i for i in range(rank, len(rows)) if rows[i][col]), None)
        if piv is None:
            col += 1
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = pow(rows[rank][col], -1, p)
        rows[rank] = [x * inv % p for x in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][col]:
                f = rows[i][col]
                rows[i] = [(x - f * y) % p for x, y in zip(rows[i], rows[rank])]
        rank += 1
        col += 1
    return rank


def subgroup_order(gens, moduli):
    """Order of the subgroup of prod Z/moduli generated by ``gens`` (closure)."""
    seen = {tuple(0 for _ in moduli)}
    frontier = list(seen)
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = tuple((a + b) % m for a, b, m in zip(x, g, moduli))
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return len(seen)


def brute_hs_length(pres, s):
    """log_p |A/(I + m^s)| by enumerating the additive subgroup generated by I."""
    from prismlab.arith import monomials_upto
    p = pres.ring.prime
    monos = monomials_upto(pres.n, s - 1)
    moduli = [p ** (s - sum(b)) for b in monos]
    gens = []
    for g in pres.generators():
        for c in monos:
            vec = [0] * len(monos)
            for m, coeff in g.terms.items():
                nb = tuple(x + y for x, y in zip(m, c))
                if sum(nb) < s:
                    i = monos.index(nb)
                    vec[i] = (vec[i] + coeff) % moduli[i]
            gens.append(tuple(vec))
            # p-multiples are generated additively; nothing else to add
    total = 1
    for m in moduli:
        total *= m
    order = subgroup_order(gens, moduli)
    quotient = total // order
    length = 0
    while quotient > 1:
        assert quotient % p == 0
        quotient //= p
        length += 1
    return length


def brute_free(alg, module_vectors_action, p, max_tuples=20000):
    """Search for a free basis of a module given as ``act(k, v)``.

    Tries every g-subset of the standard basis and, when affordable, every
    g-tuple of vectors; a tuple is a basis when the induced map from S^g is
    bijective.  Returns the rank found or None.
    """
    dim_s = alg.dim
    act, dim_m = module_vectors_action
    # g = dim M / mM computed from scratch
    mm = [act(k, e) for k in range(1, dim_s) for e in _units(dim_m)]
    g = dim_m - (rank_mod_p(mm, p) if mm else 0)
    if g * dim_s != dim_m:
        return None

    def is_basis(vs):
        imgs = [act(k, v) for v in vs for k in range(dim_s)]
        return rank_mod_p(imgs, p) == dim_m

    for combo in itertools.combinations(_units(dim_m), g):
        if is_basis(combo):
            return g
    if p ** (g * dim_m) <= max_tuples:
        space = list(itertools.product(range(p), repeat=dim_m))
        for combo in itertools.product(space, repeat=g):
            if is_basis(combo):
                return g
    return None


def _units(n):
    return [tuple(1 if i == j else 0 for j in range(n)) for i in range(n)]


def seeded(seed):
    return random.Random(seed)
