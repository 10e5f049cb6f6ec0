"""Prisms over the truncated ``Z_p[[T]]``: verification, orientation
normalisation, transversal/crystalline classification and the nine-way
regular-sequence cross-check.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Sequence

from .arith import FpPoly, TruncSeries, fiber_reduce, series_inv
from .common import UNDECIDED, CheckRecord, tri_and
from .delta import DeltaRingSpec, delta, is_distinguished, phi, phi_iter
from .errors import (MembershipFailed, NoSolution, NormalizationFailed, NotDistinguished,
                     NotInMaximalIdeal, WindowTooSmall)
from .exactalg import howell_solve
from .groebner import dim_of


class PrismKind(str, Enum):
    TRANSVERSAL = "Transversal"
    CRYSTALLINE = "Crystalline"


@dataclass
class Normalization:
    f: TruncSeries
    unit: TruncSeries
    d: TruncSeries

    @property
    def orientation(self) -> TruncSeries:
        return self.d.ring.p() - self.f


@dataclass
class Prism:
    spec: DeltaRingSpec
    orientation: TruncSeries
    normalized_f: TruncSeries
    unit: TruncSeries
    kind: PrismKind
    certificates: List[CheckRecord] = field(default_factory=list)

    @property
    def ring(self):
        return self.spec.ring


# --- membership in finitely generated ideals of the window -----------------

def _mult_columns(g: TruncSeries, index: Dict, monos: Sequence):
    D = g.ring.degree_cap
    cols = []
    for mu in monos:
        col = {}
        for m, c in g.terms.items():
            nu = tuple(a + b for a, b in zip(mu, m))
            if sum(nu) <= D:
                col[index[nu]] = c
        cols.append(col)
    return cols


def combination_witness(target: TruncSeries, gens: Sequence[TruncSeries]) -> List[TruncSeries]:
    """Coefficients ``c`` with ``target = sum c_i * gens_i`` in the window.

    Raises MembershipFailed (with the attempted system) when no solution
    exists modulo ``p^N`` and ``(T)^(D+1)``.
    """
    ring = target.ring
    prec = min([target.precision] + [g.precision for g in gens])
    monos = ring.monomials()
    index = {m: i for i, m in enumerate(monos)}
    columns = []
    for g in gens:
        columns.extend(_mult_columns(g, index, monos))
    matrix = [[0] * len(columns) for _ in monos]
    for j, col in enumerate(columns):
        for i, c in col.items():
            matrix[i][j] = c
    rhs = [target.terms.get(m, 0) for m in monos]
    try:
        sol = howell_solve(matrix, rhs, ring.prime, prec, kernel=False)
    except NoSolution:
        raise MembershipFailed("no solution modulo p^N in the degree window",
                               system={"rows": len(monos), "cols": len(columns),
                                       "precision": prec}) from None
    k = len(monos)
    out = []
    for gi in range(len(gens)):
        chunk = sol.particular[gi * k:(gi + 1) * k]
        out.append(TruncSeries(ring, {m: c for m, c in zip(monos, chunk) if c}, prec))
    return out


# --- normalisation -----------------------------------------------------------

def _require_max_ideal(d: TruncSeries):
    if d.constant_term() % d.ring.prime:
        raise NotInMaximalIdeal("element has a unit constant term")


def normalize_orientation(spec: DeltaRingSpec, d: TruncSeries) -> Normalization:
    """Rewrite a distinguished ``d`` as ``u * (p - f)`` with ``f`` in ``(T)``.

    Split ``p - d = p*g + h`` with ``g`` the constant digit shift and ``h`` in
    ``(T)``; then ``d = p*u - h`` with ``u = 1 - g`` and ``f = u^-1 h``.
    """
    _require_max_ideal(d)
    if not is_distinguished(d, spec):
        raise NotDistinguished(f"{d.to_text()} is not distinguished")
    ring = d.ring
    p = ring.prime
    mod = d.modulus
    rest = ring.const(p, d.precision) - d
    c0 = rest.constant_term()
    if c0 > mod // 2:               # symmetric lift keeps small units small
        c0 -= mod
    g = c0 // p
    h = rest.without_constant()
    u = ring.const(1 - g, d.precision)
    if u.constant_term() % p == 0:
        raise NormalizationFailed(f"1 - g = {1 - g} is not a unit although d is distinguished")
    f = series_inv(u) * h
    if u * (ring.const(p, d.precision) - f) != d:
        raise NormalizationFailed("u * (p - f) does not reproduce d")
    return Normalization(f, u, d)


def classify_f(f: TruncSeries) -> PrismKind:
    return PrismKind.CRYSTALLINE if fiber_reduce(f).is_zero() else PrismKind.TRANSVERSAL


def classify(prism: Prism) -> PrismKind:
    return classify_f(prism.normalized_f)


def verify_prism(spec: DeltaRingSpec, d: TruncSeries) -> Prism:
    """Check the prism axioms for ``(A, (d))`` and return a certified Prism."""
    _require_max_ideal(d)
    certs = []
    dd = delta(d, spec)
    if dd.constant_term() % spec.prime == 0:
        raise NotDistinguished(f"delta({d.to_text()}) has non-unit constant term")
    certs.append(CheckRecord("distinguished", True,
                             {"delta_constant_term": dd.constant_term(),
                              "precision": dd.precision}))
    pd = phi(d, spec)
    ring = spec.ring
    target = ring.const(ring.prime, d.precision)
    a, b = combination_witness(target, [d, pd])
    assert a * d + b * pd == target
    certs.append(CheckRecord("p in I + phi(I)A", True,
                             {"a": a.to_text(), "b": b.to_text(),
                              "window": {"precision": target.precision,
                                         "degree_cap": ring.degree_cap}}))
    certs.append(CheckRecord("derived (p, I)-complete", True,
                             {"note": "structural: every element of the window is a finite sum"}))
    certs.append(CheckRecord("I invertible of rank 1", True,
                             {"note": "principal ideal generated by a nonzerodivisor of a domain"}))
    norm = normalize_orientation(spec, d)
    kind = classify_f(norm.f)
    certs.append(CheckRecord("orientation normalised", True,
                             {"f": norm.f.to_text(), "unit": norm.unit.to_text()}))
    return Prism(spec, d, norm.f, norm.unit, kind, certs)


# --- nine-condition suite ------------------------------------------------------

CONDITIONS = {
    1: "p, d", 2: "d, p", 3: "phi(d), d", 4: "d, phi(d)", 5: "p, phi(d)",
    6: "phi(d), p", 7: "p, phi^(i+1)(d)", 8: "phi^(i+1)(d), p",
    9: "phi^(i+1)(d), phi^(j+1)(d), i != j",
}


@dataclass
class _Elem:
    label: str
    series: TruncSeries
    fiber: FpPoly
    fiber_source: str


@dataclass
class RegSeqReport:
    verdicts: Dict[int, object]
    details: Dict[int, List[dict]]
    i_max: int
    exponent: int
    agree: bool
    value: object
    notes: List[str] = field(default_factory=list)


def _p_unit_form(x: TruncSeries):
    """``(v, unit?)`` with ``x = p^v * w``; None if x vanishes in the window."""
    if x.is_zero():
        return None
    p = x.ring.prime
    v = min(_val(c, p) for c in x.terms.values())
    c0 = x.constant_term()
    return v, (c0 != 0 and _val(c0, p) == v)


def _val(c, p):
    v = 0
    while c % p == 0:
        c //= p
        v += 1
    return v


class _Suite:
    def __init__(self, prism: Prism, exponent: int):
        self.prism = prism
        self.spec = prism.spec
        self.ring = prism.spec.ring
        self.e = exponent
        self.d = self.ring.p() - prism.normalized_f
        self.dbar = fiber_reduce(self.d)
        self.notes = []
        self._witness_cache = {}

    def p_elem(self):
        s = self.ring.p() ** self.e
        return _Elem(f"p^{self.e}" if self.e > 1 else "p", s,
                     FpPoly(self.ring.prime, self.ring.nvars), "exact")

    def phi_elem(self, k):
        ring = self.ring
        p = ring.prime
        exact = self.dbar ** (p ** k * self.e)
        series = phi_iter(self.d, self.spec, k) ** self.e
        label = ("d" if k == 0 else f"phi^{k}(d)" if k > 1 else "phi(d)")
        if self.e > 1:
            label = f"({label})^{self.e}"
        if exact.degree() <= ring.degree_cap:
            got = fiber_reduce(series)
            if got != exact:
                raise AssertionError(f"fiber of {label} disagrees with the Frobenius-lift law")
            source = "window"
        else:
            source = "frobenius-lift law (beyond degree window)"
        return _Elem(label, series, exact, source)

    def nzd_on_A(self, x: _Elem):
        if not x.fiber.is_zero():
            return True, "nonzero element of the domain A"
        form = _p_unit_form(x.series)
        if form is None:
            return False, "element vanishes"
        v, unit = form
        if not unit:
            return UNDECIDED, "element in pA but not a unit multiple of a p-power"
        # p^v * w: kernel of multiplication lies in p^(N-v) A, zero at precision N-v
        return v < x.series.precision, f"unit multiple of p^{v}; precision-aware kernel check"

    def is_p_type(self, x: _Elem):
        if not x.fiber.is_zero():
            return False
        form = _p_unit_form(x.series)
        return form is not None and form[1]

    def second_on_quotient(self, x: _Elem, y: _Elem):
        n = self.ring.nvars
        if self.is_p_type(x):
            return (not y.fiber.is_zero()), "fiber of the second element nonzero in F_p[T]"
        if self.is_p_type(y):
            return (not x.fiber.is_zero()), "p-power regular on A/x iff fiber of x nonzero"
        if x.fiber.is_zero() or y.fiber.is_zero():
            return UNDECIDED, "element in pA that is not a p-power"
        key = frozenset([x.label, y.label])
        if key not in self._witness_cache:
            self._witness_cache[key] = self._p_power_witness(x, y)
        j = self._witness_cache[key]
        if j is None:
            return UNDECIDED, "no p-power found in (x, y) within the window"
        dim = dim_of([x.fiber, y.fiber], n)
        return dim == n - 1, f"p^{j} in (x, y); dim F_p[T]/(xbar, ybar) = {dim}, need {n - 1}"

    def _p_power_witness(self, x, y):
        prec = min(x.series.precision, y.series.precision)
        for j in range(1, min(prec - 1, 2 * self.e - 1) + 1):
            target = self.ring.const(self.ring.prime ** j, prec)
            try:
                combination_witness(target, [x.series, y.series])
                return j
            except MembershipFailed:
                continue
        return None

    def pair(self, x: _Elem, y: _Elem):
        first, why1 = self.nzd_on_A(x)
        if first is False:
            return False, {"pair": f"{x.label}, {y.label}", "reason": why1}
        second, why2 = self.second_on_quotient(x, y)
        verdict = tri_and([first, second])
        return verdict, {"pair": f"{x.label}, {y.label}", "first": why1, "second": why2,
                         "fiber_sources": [x.fiber_source, y.fiber_source]}


def regseq_suite(prism: Prism, i_max: int = 2, exponent: int = 1) -> RegSeqReport:
    """Evaluate the nine equivalent regular-sequence conditions.

    Conditions 7-9 quantify over all ``i``; they are checked for
    ``i <= i_max``.  With ``exponent > 1`` every element is replaced by that
    power, which must not change any verdict.
    """
    ring = prism.ring
    fbar = fiber_reduce(prism.normalized_f)
    if ring.degree_cap < ring.prime * fbar.degree():
        raise WindowTooSmall(f"degree cap {ring.degree_cap} < p*deg(f) = {ring.prime * fbar.degree()}")
    s = _Suite(prism, exponent)
    P = s.p_elem()
    phis = {k: s.phi_elem(k) for k in range(0, i_max + 2)}
    d, pd = phis[0], phis[1]
    cases = {1: [(P, d)], 2: [(d, P)], 3: [(pd, d)], 4: [(d, pd)], 5: [(P, pd)], 6: [(pd, P)],
             7: [(P, phis[i + 1]) for i in range(i_max + 1)],
             8: [(phis[i + 1], P) for i in range(i_max + 1)],
             9: [(phis[i + 1], phis[j + 1]) for i in range(i_max + 1)
                 for j in range(i_max + 1) if i != j]}
    verdicts, details = {}, {}
    for c, pairs in cases.items():
        results = [s.pair(x, y) for x, y in pairs]
        verdicts[c] = tri_and(v for v, _ in results)
        details[c] = [dict(info, verdict=v) for v, info in results]
    values = list(verdicts.values())
    if any(v is UNDECIDED for v in values):
        agree, value = False, UNDECIDED
    else:
        agree = len(set(values)) == 1
        value = values[0] if agree else UNDECIDED
    notes = [f"conditions 7-9 checked to i_max = {i_max}"] + s.notes
    return RegSeqReport(verdicts, details, i_max, exponent, agree, value, notes)
