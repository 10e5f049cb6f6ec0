"""delta-ring structure on ``Z_p[[T_1..T_n]]`` in the truncation window.

The Frobenius lift is the only stored datum; ``delta(a) = (phi(a) - a^p)/p``
is derived from it, so the precision drop by one digit happens in a single
place.
"""
from __future__ import annotations

import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import List, Mapping, Optional, Sequence, Tuple

from .arith import SeriesRing, TruncSeries, fiber_reduce, random_series
from .errors import PrecisionExhausted, RingMismatch


@dataclass(frozen=True)
class DeltaRingSpec:
    """A truncated ``Z_p[[T]]`` with Frobenius lift fixed on the variables.

    ``phi_images`` defaults to ``T_i -> T_i^p``; the coefficient Frobenius
    is the identity (residue field ``F_p``).
    """

    ring: SeriesRing
    phi_images: Tuple[TruncSeries, ...] = ()

    def __post_init__(self):
        ring = self.ring
        if not self.phi_images:
            object.__setattr__(self, "phi_images",
                               tuple(v ** ring.prime for v in ring.gens()))
        imgs = tuple(self.phi_images)
        object.__setattr__(self, "phi_images", imgs)
        if len(imgs) != ring.nvars:
            raise ValueError("one Frobenius image per variable is required")
        p = ring.prime
        for v, im in zip(ring.gens(), imgs):
            if im.ring != ring:
                raise RingMismatch("Frobenius image over a different ring")
            if im.constant_term():
                raise ValueError("Frobenius images must lie in (T_1..T_n)")
            target = fiber_reduce(v).__pow__(p).truncate(ring.degree_cap)
            if fiber_reduce(im) != target:
                raise ValueError(f"{im.to_text()} does not lift the p-th power map")

    @classmethod
    def standard(cls, prime=5, precision=6, degree_cap=12, variables=("T",)):
        return cls(SeriesRing(prime, precision, degree_cap, tuple(variables)))

    @classmethod
    def with_overrides(cls, ring: SeriesRing, overrides: Mapping[str, TruncSeries]):
        imgs = [overrides.get(name, ring.var(i) ** ring.prime)
                for i, name in enumerate(ring.variables)]
        return cls(ring, tuple(imgs))

    @property
    def prime(self) -> int:
        return self.ring.prime

    def is_standard(self) -> bool:
        return all(im == v ** self.prime for v, im in zip(self.ring.gens(), self.phi_images))


def _check(a: TruncSeries, spec: DeltaRingSpec):
    if a.ring != spec.ring:
        raise RingMismatch("element does not belong to the delta-ring's window")


def phi(a: TruncSeries, spec: DeltaRingSpec) -> TruncSeries:
    _check(a, spec)
    ring = spec.ring
    if spec.is_standard():
        p, D = ring.prime, ring.degree_cap
        terms = {}
        sat = a.saturated
        for m, c in a.terms.items():
            if sum(m) * p > D:
                sat = True
                continue
            terms[tuple(e * p for e in m)] = c
        return TruncSeries(ring, terms, a.precision, sat)
    return a.substitute(spec.phi_images)


def phi_iter(a: TruncSeries, spec: DeltaRingSpec, k: int) -> TruncSeries:
    for _ in range(k):
        a = phi(a, spec)
    return a


def delta(a: TruncSeries, spec: DeltaRingSpec) -> TruncSeries:
    """``(phi(a) - a^p)/p`` at precision ``N - 1``."""
    _check(a, spec)
    if a.precision < 2:
        raise PrecisionExhausted("delta needs at least two p-adic digits")
    diff = phi(a, spec) - a ** spec.prime
    try:
        return diff.divide_by_p()
    except ArithmeticError as exc:       # would contradict the Frobenius-lift invariant
        raise AssertionError(f"phi(a) - a^p not divisible by p for {a!r}: {exc}") from exc


def is_distinguished(d: TruncSeries, spec: DeltaRingSpec) -> bool:
    return delta(d, spec).constant_term() % spec.prime != 0


def is_rank_one(a: TruncSeries, spec: DeltaRingSpec) -> bool:
    return delta(a, spec).is_zero()


# --- axiom checks -----------------------------------------------------------

def sum_rule_defect(a, b, spec) -> TruncSeries:
    p = spec.prime
    cross = (a ** p + b ** p - (a + b) ** p).divide_by_p()
    return delta(a + b, spec) - (delta(a, spec) + delta(b, spec) + cross)


def product_rule_defect(a, b, spec) -> TruncSeries:
    p = spec.prime
    da, db = delta(a, spec), delta(b, spec)
    return delta(a * b, spec) - (a ** p * db + b ** p * da + (da * db).scale(p))


@dataclass
class AxiomReport:
    prime: int
    precision: int
    degree_cap: int
    samples: int
    seed: int
    checked_precision: int
    violations: List[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def sample_pair(spec: DeltaRingSpec, seed: int, index: int):
    """Deterministic random pair for sample ``index`` (independent of scheduling)."""
    rng = random.Random(f"{seed}:{index}")
    ring = spec.ring
    top = max(1, ring.degree_cap // spec.prime)
    a = random_series(ring, rng, max_terms=3, max_degree=top)
    b = random_series(ring, rng, max_terms=3, max_degree=top)
    return a, b


def _check_one(spec, seed, index):
    a, b = sample_pair(spec, seed, index)
    bad = []
    if not sum_rule_defect(a, b, spec).is_zero():
        bad.append({"rule": "sum", "index": index, "a": a.to_text(), "b": b.to_text()})
    if not product_rule_defect(a, b, spec).is_zero():
        bad.append({"rule": "product", "index": index, "a": a.to_text(), "b": b.to_text()})
    return bad


def check_delta_axioms(spec: DeltaRingSpec, sample_count: int = 100, seed: int = 0,
                       jobs: int = 1, pairs: Optional[Sequence[Tuple[TruncSeries, TruncSeries]]] = None
                       ) -> AxiomReport:
    """Both delta identities on seeded random pairs (or the given ``pairs``)."""
    ring = spec.ring
    if ring.precision < 2:
        raise PrecisionExhausted("axiom checks need N >= 2")
    report = AxiomReport(ring.prime, ring.precision, ring.degree_cap,
                         sample_count if pairs is None else len(pairs), seed,
                         ring.precision - 1)
    if pairs is not None:
        for i, (a, b) in enumerate(pairs):
            for rule, fn in (("sum", sum_rule_defect), ("product", product_rule_defect)):
                if not fn(a, b, spec).is_zero():
                    report.violations.append({"rule": rule, "index": i,
                                              "a": a.to_text(), "b": b.to_text()})
        return report
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(lambda i: _check_one(spec, seed, i), range(sample_count)))
    else:
        results = [_check_one(spec, seed, i) for i in range(sample_count)]
    for bad in results:
        report.violations.extend(bad)
    return report
