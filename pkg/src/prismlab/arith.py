"""Two-tier number system.

Elements of ``Z_p[[T_1..T_n]]`` are kept modulo ``(p^N, (T)^(D+1))`` as
:class:`TruncSeries`; the special fiber ``F_p[T_1..T_n]`` is exact
(:class:`FpPoly`, no degree cap).  Monomials are plain exponent tuples.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from functools import cached_property
from operator import add
from typing import Dict, Iterable, Optional, Sequence, Tuple

from .errors import NotAUnit, RingMismatch

Monomial = Tuple[int, ...]

DEFAULT_PRIME = 5
DEFAULT_PRECISION = 6
DEFAULT_DEGREE = 12


# --- monomials -------------------------------------------------------------

def mono_degree(m: Monomial) -> int:
    return sum(m)


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(map(add, a, b))


def mono_divides(a: Monomial, b: Monomial) -> bool:
    """True if ``a`` divides ``b``."""
    return all(x <= y for x, y in zip(a, b))


def mono_div(b: Monomial, a: Monomial) -> Monomial:
    return tuple(y - x for x, y in zip(a, b))


def mono_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(map(max, a, b))


def degrevlex_key(m: Monomial):
    """Sort key: larger key means larger monomial in degrevlex."""
    return (sum(m), tuple(-e for e in reversed(m)))


def monomials_upto(nvars: int, degree: int) -> list:
    """All monomials of total degree <= degree, ascending degrevlex."""
    out = []

    def rec(prefix, left, k):
        if k == nvars:
            out.append(tuple(prefix))
            return
        for e in range(left + 1):
            prefix.append(e)
            rec(prefix, left - e, k + 1)
            prefix.pop()

    if nvars == 0:
        return [()]
    rec([], degree, 0)
    out.sort(key=degrevlex_key)
    return out


def mono_text(m: Monomial, names: Sequence[str]) -> str:
    parts = []
    for name, e in zip(names, m):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def is_prime(n: int) -> bool:
    return n >= 2 and all(n % k for k in range(2, int(n ** 0.5) + 1))


def _valuation(x: int, p: int) -> int:
    v = 0
    while x and x % p == 0:
        x //= p
        v += 1
    return v


# --- scalars ---------------------------------------------------------------

@dataclass(frozen=True)
class PrecScalar:
    """A residue class modulo ``prime**precision``."""

    value: int
    prime: int
    precision: int

    def __post_init__(self):
        if self.prime < 2 or self.precision < 1:
            raise ValueError("need prime >= 2 and precision >= 1")
        object.__setattr__(self, "value", self.value % self.prime ** self.precision)

    @property
    def modulus(self) -> int:
        return self.prime ** self.precision

    def _coerce(self, other):
        if isinstance(other, PrecScalar):
            if other.prime != self.prime:
                raise RingMismatch("scalars over different primes")
            return other.value, min(self.precision, other.precision)
        if isinstance(other, int):
            return other, self.precision
        return NotImplemented, None

    def __add__(self, other):
        v, n = self._coerce(other)
        if v is NotImplemented:
            return v
        return PrecScalar(self.value + v, self.prime, n)

    __radd__ = __add__

    def __sub__(self, other):
        v, n = self._coerce(other)
        if v is NotImplemented:
            return v
        return PrecScalar(self.value - v, self.prime, n)

    def __rsub__(self, other):
        v, n = self._coerce(other)
        if v is NotImplemented:
            return v
        return PrecScalar(v - self.value, self.prime, n)

    def __mul__(self, other):
        v, n = self._coerce(other)
        if v is NotImplemented:
            return v
        return PrecScalar(self.value * v, self.prime, n)

    __rmul__ = __mul__

    def __neg__(self):
        return PrecScalar(-self.value, self.prime, self.precision)

    def is_unit(self) -> bool:
        return self.value % self.prime != 0

    def valuation(self) -> Optional[int]:
        """p-adic valuation, or None for zero at this precision."""
        if self.value == 0:
            return None
        return _valuation(self.value, self.prime)


def coeff_inv(a: PrecScalar) -> PrecScalar:
    if not a.is_unit():
        raise NotAUnit(f"{a.value} is divisible by {a.prime}")
    return PrecScalar(pow(a.value, -1, a.modulus), a.prime, a.precision)


# --- truncated series ------------------------------------------------------

@dataclass(frozen=True)
class SeriesRing:
    """``Z/p^N [T_1..T_n] / (T)^(D+1)``: the truncation window of ``Z_p[[T]]``."""

    prime: int = DEFAULT_PRIME
    precision: int = DEFAULT_PRECISION
    degree_cap: int = DEFAULT_DEGREE
    variables: Tuple[str, ...] = ("T",)

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        if not is_prime(self.prime):
            raise ValueError(f"{self.prime} is not a prime number")
        if self.precision < 1 or self.degree_cap < 0:
            raise ValueError("need precision >= 1 and degree_cap >= 0")
        if len(set(self.variables)) != len(self.variables):
            raise ValueError("duplicate variable names")

    @cached_property
    def nvars(self) -> int:
        return len(self.variables)

    @cached_property
    def modulus(self) -> int:
        return self.prime ** self.precision

    def zero(self) -> "TruncSeries":
        return TruncSeries(self, {})

    def one(self) -> "TruncSeries":
        return self.const(1)

    def const(self, c: int, precision: Optional[int] = None) -> "TruncSeries":
        return TruncSeries(self, {(0,) * self.nvars: c}, precision)

    def p(self) -> "TruncSeries":
        return self.const(self.prime)

    def var(self, which) -> "TruncSeries":
        i = self.variables.index(which) if isinstance(which, str) else which
        m = [0] * self.nvars
        m[i] = 1
        return TruncSeries(self, {tuple(m): 1})

    def gens(self):
        return [self.var(i) for i in range(self.nvars)]

    def monomials(self, degree: Optional[int] = None) -> list:
        return monomials_upto(self.nvars, self.degree_cap if degree is None else degree)

    def with_window(self, precision=None, degree_cap=None) -> "SeriesRing":
        return SeriesRing(self.prime,
                          self.precision if precision is None else precision,
                          self.degree_cap if degree_cap is None else degree_cap,
                          self.variables)


class TruncSeries:
    """A power series modulo ``(p^precision, (T)^(D+1))``, canonical sparse form.

    ``saturated`` records that some product term above the degree cap was
    discarded while building this value; it does not take part in equality.
    """

    __slots__ = ("ring", "terms", "precision", "saturated")

    def __init__(self, ring: SeriesRing, terms: Dict[Monomial, int],
                 precision: Optional[int] = None, saturated: bool = False):
        prec = ring.precision if precision is None else precision
        if not 1 <= prec <= ring.precision:
            raise ValueError(f"precision {prec} outside 1..{ring.precision}")
        mod = ring.prime ** prec
        D = ring.degree_cap
        clean = {}
        for m, c in terms.items():
            if len(m) != ring.nvars:
                raise RingMismatch(f"monomial {m} has wrong arity")
            if sum(m) > D:
                if c % mod:
                    saturated = True
                continue
            c %= mod
            if c:
                clean[m] = c
        self.ring = ring
        self.terms = clean
        self.precision = prec
        self.saturated = saturated

    @classmethod
    def _raw(cls, ring, terms, precision, saturated):
        obj = cls.__new__(cls)
        obj.ring = ring
        obj.terms = terms
        obj.precision = precision
        obj.saturated = saturated
        return obj

    # -- basic protocol --
    @property
    def modulus(self) -> int:
        return self.ring.prime ** self.precision

    def __eq__(self, other):
        if isinstance(other, int):
            return self == self.ring.const(other, self.precision)
        if not isinstance(other, TruncSeries):
            return NotImplemented
        return (self.ring == other.ring and self.precision == other.precision
                and self.terms == other.terms)

    def __hash__(self):
        return hash((self.ring, self.precision, frozenset(self.terms.items())))

    def __repr__(self):
        return f"TruncSeries({self.to_text()!r}, N={self.precision}, D={self.ring.degree_cap})"

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def coeff(self, m: Monomial) -> PrecScalar:
        return PrecScalar(self.terms.get(tuple(m), 0), self.ring.prime, self.precision)

    def constant_term(self) -> int:
        return self.terms.get((0,) * self.ring.nvars, 0)

    def degree(self) -> int:
        """Largest total degree present (-1 for zero)."""
        return max((sum(m) for m in self.terms), default=-1)

    def order(self) -> Optional[int]:
        """Smallest total degree present (None for zero)."""
        return min((sum(m) for m in self.terms), default=None)

    def with_precision(self, precision: int) -> "TruncSeries":
        if precision > self.precision:
            raise ValueError("cannot raise precision")
        return TruncSeries(self.ring, self.terms, precision, self.saturated)

    def lift(self, precision: int) -> "TruncSeries":
        """Same least residues read at a higher precision (an arbitrary lift)."""
        return TruncSeries(self.ring, self.terms, precision, self.saturated)

    def homogeneous_part(self, degree: int) -> "TruncSeries":
        return TruncSeries._raw(self.ring, {m: c for m, c in self.terms.items() if sum(m) == degree},
                                self.precision, self.saturated)

    def without_constant(self) -> "TruncSeries":
        z = (0,) * self.ring.nvars
        return TruncSeries._raw(self.ring, {m: c for m, c in self.terms.items() if m != z},
                                self.precision, self.saturated)

    # -- arithmetic --
    def _coerce(self, other) -> Optional["TruncSeries"]:
        if isinstance(other, TruncSeries):
            if other.ring is not self.ring and other.ring != self.ring:
                raise RingMismatch("series over different rings")
            return other
        if isinstance(other, PrecScalar):
            if other.prime != self.ring.prime:
                raise RingMismatch("scalar over a different prime")
            return self.ring.const(other.value, min(other.precision, self.ring.precision))
        if isinstance(other, int):
            return self.ring.const(other, self.precision)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        terms = dict(self.terms)
        for m, c in o.terms.items():
            terms[m] = terms.get(m, 0) + c
        return TruncSeries(self.ring, terms, min(self.precision, o.precision),
                           self.saturated or o.saturated)

    __radd__ = __add__

    def __neg__(self):
        mod = self.modulus
        return TruncSeries._raw(self.ring, {m: mod - c for m, c in self.terms.items()},
                                self.precision, self.saturated)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return series_mul(self, o)

    __rmul__ = __mul__

    def scale(self, c: int) -> "TruncSeries":
        return TruncSeries(self.ring, {m: v * c for m, v in self.terms.items()},
                           self.precision, self.saturated)

    def __pow__(self, e: int):
        if not isinstance(e, int) or e < 0:
            return NotImplemented
        result = None
        base = self
        while e:
            if e & 1:
                result = base if result is None else result * base
            e >>= 1
            if e:
                base = base * base
        return self.ring.const(1, self.precision) if result is None else result

    def divide_by_p(self) -> "TruncSeries":
        """Exact digit shift; the precision drops by one."""
        if self.precision < 2:
            raise ArithmeticError("no digit left to shift")
        p = self.ring.prime
        out = {}
        for m, c in self.terms.items():
            q, r = divmod(c, p)
            if r:
                raise ArithmeticError(f"coefficient {c} of {m} not divisible by {p}")
            out[m] = q
        return TruncSeries(self.ring, out, self.precision - 1, self.saturated)

    def substitute(self, images: Sequence["TruncSeries"]) -> "TruncSeries":
        """Ring map fixing scalars and sending ``T_i`` to ``images[i]``.

        Images must lie in ``(T_1..T_n)`` so that the truncation ideal is
        preserved and the result is exact in the window.
        """
        ring = self.ring
        if len(images) != ring.nvars:
            raise RingMismatch("wrong number of images")
        for im in images:
            if im.ring != ring:
                raise RingMismatch("image over a different ring")
            if im.constant_term():
                raise ValueError("substitution images must have zero constant term")
        prec = min([self.precision] + [im.precision for im in images])
        powers = [{0: ring.const(1, prec)} for _ in images]

        def power(i, e):
            cache = powers[i]
            if e not in cache:
                k = max(k for k in cache if k < e)
                val = cache[k]
                for _ in range(e - k):
                    val = val * images[i]
                    k += 1
                    cache[k] = val
            return cache[e]

        acc: Dict[Monomial, int] = {}
        sat = self.saturated or any(im.saturated for im in images)
        for m, c in self.terms.items():
            term = ring.const(c, prec)
            for i, e in enumerate(m):
                if e:
                    term = term * power(i, e)
            sat = sat or term.saturated
            for mm, cc in term.terms.items():
                acc[mm] = acc.get(mm, 0) + cc
        return TruncSeries(ring, acc, prec, sat)

    def to_text(self) -> str:
        return format_series(self)


def format_series(s: TruncSeries) -> str:
    """Canonical text: descending degrevlex, explicit least-residue coefficients."""
    if not s.terms:
        return "0"
    parts = []
    for m in sorted(s.terms, key=degrevlex_key, reverse=True):
        mt = mono_text(m, s.ring.variables)
        c = s.terms[m]
        parts.append(f"{c}*{mt}" if mt else str(c))
    return " + ".join(parts)


def series_mul(a: TruncSeries, b: TruncSeries) -> TruncSeries:
    if a.ring is not b.ring and a.ring != b.ring:
        raise RingMismatch("series over different rings")
    ring = a.ring
    D = ring.degree_cap
    prec = min(a.precision, b.precision)
    mod = ring.prime ** prec
    if len(a.terms) > len(b.terms):
        a, b = b, a
    bl = sorted(((sum(m), m, c) for m, c in b.terms.items()), key=lambda t: t[0])
    out: Dict[Monomial, int] = {}
    dropped = False
    one_var = ring.nvars == 1
    for m1, c1 in a.terms.items():
        d1 = sum(m1)
        room = D - d1
        for d2, m2, c2 in bl:
            if d2 > room:
                dropped = True
                break
            m = (m1[0] + m2[0],) if one_var else tuple(map(add, m1, m2))
            out[m] = out.get(m, 0) + c1 * c2
    terms = {}
    for m, c in out.items():
        c %= mod
        if c:
            terms[m] = c
    return TruncSeries._raw(ring, terms, prec, a.saturated or b.saturated or dropped)


def series_inv(u: TruncSeries) -> TruncSeries:
    """Inverse of a unit of the local ring via the geometric series."""
    ring = u.ring
    c0 = PrecScalar(u.constant_term(), ring.prime, u.precision)
    if not c0.is_unit():
        raise NotAUnit("constant term is divisible by p")
    v0 = coeff_inv(c0).value
    w = ring.const(1, u.precision) - u.scale(v0)     # in (p, T)
    total = ring.const(1, u.precision)
    power = w
    # w^k lies in (p, T)^k, which vanishes once k >= N + D.
    while not power.is_zero():
        total = total + power
        power = power * w
    result = total.scale(v0)
    result.saturated = False
    return result


def random_series(ring: SeriesRing, rng: random.Random, max_terms: int = 4,
                  max_degree: Optional[int] = None, unit: bool = False,
                  in_max_ideal: bool = False) -> TruncSeries:
    """A seeded random element; ``unit``/``in_max_ideal`` constrain the constant."""
    top = ring.degree_cap if max_degree is None else min(max_degree, ring.degree_cap)
    mons = monomials_upto(ring.nvars, top)
    mod = ring.modulus
    terms = {}
    for _ in range(rng.randint(0, max_terms)):
        terms[rng.choice(mons)] = rng.randrange(mod)
    z = (0,) * ring.nvars
    c = terms.get(z, rng.randrange(mod))
    if unit and c % ring.prime == 0:
        c += rng.randrange(1, ring.prime)
    if in_max_ideal:
        c -= c % ring.prime
    terms[z] = c
    return TruncSeries(ring, terms)


# --- exact special fiber ---------------------------------------------------

class FpPoly:
    """Exact polynomial over ``F_p``; canonical sparse form, no truncation."""

    __slots__ = ("prime", "nvars", "terms")

    def __init__(self, prime: int, nvars: int, terms: Optional[Dict[Monomial, int]] = None):
        self.prime = prime
        self.nvars = nvars
        clean = {}
        for m, c in (terms or {}).items():
            c %= prime
            if c:
                if len(m) != nvars:
                    raise RingMismatch(f"monomial {m} has wrong arity")
                clean[tuple(m)] = clean.get(tuple(m), 0) + c
        self.terms = {m: c % prime for m, c in clean.items() if c % prime}

    @classmethod
    def _raw(cls, prime, nvars, terms):
        obj = cls.__new__(cls)
        obj.prime = prime
        obj.nvars = nvars
        obj.terms = terms
        return obj

    @classmethod
    def const(cls, prime: int, nvars: int, c: int) -> "FpPoly":
        return cls(prime, nvars, {(0,) * nvars: c})

    @classmethod
    def var(cls, prime: int, nvars: int, i: int) -> "FpPoly":
        m = [0] * nvars
        m[i] = 1
        return cls(prime, nvars, {tuple(m): 1})

    @classmethod
    def monomial(cls, prime: int, m: Monomial, c: int = 1) -> "FpPoly":
        return cls(prime, len(m), {tuple(m): c})

    def __eq__(self, other):
        if isinstance(other, int):
            return self == FpPoly.const(self.prime, self.nvars, other)
        if not isinstance(other, FpPoly):
            return NotImplemented
        return (self.prime, self.nvars, self.terms) == (other.prime, other.nvars, other.terms)

    def __hash__(self):
        return hash((self.prime, self.nvars, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        return f"FpPoly({self.to_text()!r}, p={self.prime})"

    def to_text(self, names: Optional[Sequence[str]] = None) -> str:
        if not self.terms:
            return "0"
        names = names or _default_names(self.nvars)
        parts = []
        for m in sorted(self.terms, key=degrevlex_key, reverse=True):
            mt = mono_text(m, names)
            c = self.terms[m]
            parts.append(f"{c}*{mt}" if mt else str(c))
        return " + ".join(parts)

    def is_zero(self) -> bool:
        return not self.terms

    def _check(self, other):
        if isinstance(other, int):
            return FpPoly.const(self.prime, self.nvars, other)
        if not isinstance(other, FpPoly):
            return None
        if (other.prime, other.nvars) != (self.prime, self.nvars):
            raise RingMismatch("polynomials over different rings")
        return other

    def __add__(self, other):
        o = self._check(other)
        if o is None:
            return NotImplemented
        p = self.prime
        t = dict(self.terms)
        for m, c in o.terms.items():
            v = (t.get(m, 0) + c) % p
            if v:
                t[m] = v
            else:
                t.pop(m, None)
        return FpPoly._raw(p, self.nvars, t)

    __radd__ = __add__

    def __neg__(self):
        p = self.prime
        return FpPoly._raw(p, self.nvars, {m: p - c for m, c in self.terms.items()})

    def __sub__(self, other):
        o = self._check(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._check(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        o = self._check(other)
        if o is None:
            return NotImplemented
        p = self.prime
        out: Dict[Monomial, int] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in o.terms.items():
                m = tuple(map(add, m1, m2))
                out[m] = (out.get(m, 0) + c1 * c2) % p
        return FpPoly._raw(p, self.nvars, {m: c for m, c in out.items() if c})

    __rmul__ = __mul__

    def scale(self, c: int) -> "FpPoly":
        return FpPoly(self.prime, self.nvars, {m: v * c for m, v in self.terms.items()})

    def mul_monomial(self, m: Monomial, c: int = 1) -> "FpPoly":
        p = self.prime
        return FpPoly._raw(p, self.nvars, {tuple(map(add, k, m)): v * c % p
                                           for k, v in self.terms.items() if v * c % p})

    def __pow__(self, e: int):
        if not isinstance(e, int) or e < 0:
            return NotImplemented
        result = FpPoly.const(self.prime, self.nvars, 1)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def degree(self) -> int:
        return max((sum(m) for m in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(m) for m in self.terms}) <= 1

    def constant_term(self) -> int:
        return self.terms.get((0,) * self.nvars, 0)

    def truncate(self, degree: int) -> "FpPoly":
        return FpPoly._raw(self.prime, self.nvars,
                           {m: c for m, c in self.terms.items() if sum(m) <= degree})


def _default_names(n: int):
    return ("T",) if n == 1 else tuple(f"T{i + 1}" for i in range(n))


def fiber_reduce(a: TruncSeries) -> FpPoly:
    """Reduction ``A -> A/pA``."""
    p = a.ring.prime
    return FpPoly._raw(p, a.ring.nvars, {m: c % p for m, c in a.terms.items() if c % p})


def lift_poly(f: FpPoly, ring: SeriesRing) -> TruncSeries:
    """Least-residue lift of a fiber polynomial into the window."""
    if f.prime != ring.prime or f.nvars != ring.nvars:
        raise RingMismatch("fiber polynomial does not match the ring")
    return TruncSeries(ring, dict(f.terms))


def series_from_terms(ring: SeriesRing, items: Iterable) -> TruncSeries:
    acc: Dict[Monomial, int] = {}
    for m, c in items:
        acc[tuple(m)] = acc.get(tuple(m), 0) + c
    return TruncSeries(ring, acc)
