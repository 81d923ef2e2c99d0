"""Limit measures of the skew map, empirical (Birkhoff) measures, integration.

Every measure handled here lives on a single vertical fiber {x} x S^1,
so its Fourier coefficients factor as

    mu^(m, n) = exp(2*pi*i*m*x) * rho(n),   rho(n) = integral of exp(2*pi*i*n*y)

where rho is the fiber law.  Classes expose ``x_phase`` and
``fiber_coefficients`` and callers combine them.
"""

from __future__ import annotations

import cmath
import functools
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Union

import numpy as np

from .torus import (
    BaseValue,
    Coordinate,
    FloatValue,
    Rational,
    TorusPoint,
    format_base_value,
    format_coordinate,
    frac,
    frac_multiples,
    orbit_precision,
    orbit_y,
    orbit_y_numerators,
    parse_base_value,
    parse_coordinate,
    skew_map,
)

__all__ = [
    "Atom",
    "FiberLebesgue",
    "PeriodicAtomic",
    "EmpiricalMeasure",
    "ErgodicMeasure",
    "Measure",
    "limit_measure",
    "empirical",
    "cesaro_periodic_average",
    "CesaroCheck",
    "check_cesaro_convergence",
    "integrate",
    "pushforward",
    "coefficient",
    "atom_map",
    "law_signature",
    "same_atoms",
    "format_measure",
    "parse_measure",
]

TWO_PI = 2.0 * math.pi
_SMALL = 1 << 31  # int64 products of two residues below this cannot overflow


class Atom(NamedTuple):
    x: BaseValue
    y: Coordinate
    weight: Fraction


def _cis(turns) -> np.ndarray:
    t = np.asarray(turns, dtype=np.float64)
    return np.exp(1j * TWO_PI * (t - np.floor(t)))


def _phase_of_coordinate(y: Coordinate, ns: np.ndarray) -> np.ndarray:
    """frac(n*y) for each n, exact when y is a Fraction."""
    if isinstance(y, Fraction):
        num, den = y.numerator, y.denominator
        if den < _SMALL:
            return np.mod(np.mod(ns, den) * num, den) / den
        return np.array([(int(n) * num % den) / den for n in ns])
    t = ns.astype(np.float64) * y
    return t - np.floor(t)


def _x_phase(x: BaseValue, ms) -> np.ndarray:
    ms = np.asarray(ms, dtype=np.int64)
    if ms.size > 256:
        return _cis(frac_multiples(x, ms))
    return _x_phase_cached(x, ms.tobytes(), ms.shape, orbit_precision())


@functools.lru_cache(maxsize=4096)
def _x_phase_cached(x: BaseValue, key: bytes, shape, mode: str) -> np.ndarray:
    # mode is part of the key only so a precision switch invalidates entries
    ms = np.frombuffer(key, dtype=np.int64).reshape(shape)
    out = _cis(frac_multiples(x, ms))
    out.flags.writeable = False
    return out


@dataclass(frozen=True)
class FiberLebesgue:
    """delta_{x0} x Lebesgue on the circle."""

    x0: BaseValue

    def x_phase(self, ms) -> np.ndarray:
        return _x_phase(self.x0, ms)

    def fiber_coefficients(self, ns) -> np.ndarray:
        ns = np.asarray(ns, dtype=np.int64)
        return (ns == 0).astype(np.complex128)

    def __str__(self) -> str:
        return format_measure(self)


@dataclass(frozen=True)
class PeriodicAtomic:
    """Uniform measure on the q atoms (p/q, frac(y0 + i*p/q)), i = 0..q-1.

    ``y0`` is kept as given; two instances whose y0 agree modulo 1/q
    describe the same measure (see :meth:`same_measure`).
    """

    pq: Rational
    y0: Coordinate = Fraction(0)

    def __post_init__(self):
        if not isinstance(self.pq, Rational):
            raise TypeError("PeriodicAtomic needs a Rational base point")
        y0 = Fraction(self.y0) if isinstance(self.y0, int) else self.y0
        if not isinstance(y0, Fraction):
            y0 = float(y0)
        object.__setattr__(self, "y0", frac(y0))

    @property
    def q(self) -> int:
        return self.pq.q

    def atom_ys(self) -> list:
        p, q, y0 = self.pq.p, self.pq.q, self.y0
        if isinstance(y0, Fraction):
            return [frac(y0 + Fraction(i * p % q, q)) for i in range(q)]
        return list(_float_residue_ys(y0, p, q, np.arange(q)))

    def atoms(self) -> list[Atom]:
        w = Fraction(1, self.q)
        return [Atom(self.pq, y, w) for y in self.atom_ys()]

    def canonical_y0(self) -> Coordinate:
        """Representative of y0 modulo 1/q in [0, 1/q)."""
        q = self.q
        if isinstance(self.y0, Fraction):
            return self.y0 - Fraction(math.floor(self.y0 * q), q)
        return frac(self.y0 * q) / q

    def same_measure(self, other: "PeriodicAtomic", tol: float = 0.0) -> bool:
        if not isinstance(other, PeriodicAtomic) or other.pq != self.pq:
            return False
        shift = (self.y0 - other.y0) * self.q
        if isinstance(shift, Fraction):
            return shift.denominator == 1
        off = abs(shift - round(shift))
        return off <= tol

    def x_phase(self, ms) -> np.ndarray:
        return _x_phase(self.pq, ms)

    def exact_law(self):
        """``(L, nums, counts)`` with atoms at nums/L, or None for float y0."""
        if not isinstance(self.y0, Fraction):
            return None
        L, nums = orbit_y_numerators(TorusPoint(self.pq, self.y0), self.q)
        return L, nums, [1] * self.q

    def fiber_coefficients(self, ns) -> np.ndarray:
        return _periodic_fiber(self.q, self.y0, np.asarray(ns, dtype=np.int64))

    def __str__(self) -> str:
        return format_measure(self)


def _scalar_phase(y: Coordinate, n: int) -> float:
    if isinstance(y, Fraction):
        return (n * y.numerator % y.denominator) / y.denominator
    t = n * y
    return t - math.floor(t)


def _periodic_fiber(q: int, y0: Coordinate, ns: np.ndarray) -> np.ndarray:
    """rho(n) = [q | n] exp(2 pi i n y0), with rho(-n) = conj(rho(n)) exactly."""
    out = np.zeros(ns.shape, dtype=np.complex128)
    if ns.size <= 64:
        # short windows: a plain loop beats a dozen tiny array operations
        flat = out.reshape(-1)
        for idx, n in enumerate(ns.reshape(-1).tolist()):
            if n % q == 0:
                z = cmath.exp(1j * TWO_PI * _scalar_phase(y0, abs(n)))
                flat[idx] = z.conjugate() if n < 0 else z
        return out
    hit = ns % q == 0
    out[hit] = _cis(_phase_of_coordinate(y0, np.abs(ns[hit])))
    # real test functions then integrate to exact reals
    neg = ns < 0
    out[neg] = np.conj(out[neg])
    return out


def _rational_weyl(p: int, q: int, ns: np.ndarray, N: int) -> np.ndarray:
    """sum_{i<N} exp(2 pi i n i p/q) for each n.

    Whole periods cancel unless q | n, so only the last N mod q terms
    contribute; their geometric sum uses exact residues for both phases.
    """
    r = N % q
    if q < _SMALL:
        a = np.mod(np.mod(ns, q) * p, q)
        tail = np.mod(a * r, q)
    else:
        a = np.array([n * p % q for n in ns.tolist()], dtype=object)
        tail = np.array([k * r % q for k in a.tolist()], dtype=object)
    hit = a == 0
    out = np.zeros(ns.shape, dtype=np.complex128)
    out[hit] = N
    if r and not hit.all():
        miss = ~hit
        step = (a[miss] / q).astype(np.float64)
        out[miss] = (1.0 - _cis((tail[miss] / q).astype(np.float64))) / (1.0 - _cis(step))
    return out


def _float_residue_ys(y0: float, p: int, q: int, idx: np.ndarray) -> np.ndarray:
    # same float expression as torus.orbit_y so atoms agree bit-for-bit
    ys = y0 + frac_multiples(Rational(p, q), idx)
    ys -= np.floor(ys)
    ys[ys >= 1.0] = 0.0
    return ys


@dataclass(frozen=True)
class EmpiricalMeasure:
    """Uniform measure on the first n orbit points of ``base``."""

    base: TorusPoint
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("empirical measure needs n >= 1")

    def fiber_law(self):
        """Distinct fiber positions and their exact integer multiplicities.

        For rational x = p/q only the first min(n, q) orbit indices give
        distinct points; index i occurs n//q times plus once more if
        i < n % q.
        """
        x, n = self.base.x, self.n
        if isinstance(x, Rational):
            q = x.q
            m = min(n, q)
            idx = np.arange(m)
            counts = n // q + (idx < n % q).astype(np.int64)
            return orbit_y(self.base, m), counts
        return orbit_y(self.base, n), np.ones(n, dtype=np.int64)

    def exact_law(self):
        """Integer form of :meth:`fiber_law` when x and y are both rational."""
        x = self.base.x
        if not (isinstance(x, Rational) and isinstance(self.base.y, Fraction)):
            return None
        q, n = x.q, self.n
        m = min(n, q)
        L, nums = orbit_y_numerators(self.base, m)
        r = n % q
        return L, nums, [n // q + (i < r) for i in range(m)]

    def atoms(self) -> list[Atom]:
        ys, counts = self.fiber_law()
        merged: dict = {}
        for y, c in zip(ys, counts):
            y = y if isinstance(y, Fraction) else float(y)
            merged[y] = merged.get(y, 0) + int(c)
        return [Atom(self.base.x, y, Fraction(c, self.n)) for y, c in merged.items()]

    def x_phase(self, ms) -> np.ndarray:
        return _x_phase(self.base.x, ms)

    def fiber_coefficients(self, ns) -> np.ndarray:
        ns = np.asarray(ns, dtype=np.int64)
        x = self.base.x
        if isinstance(x, Rational):
            if self.n % x.q == 0:
                # whole periods: exactly the periodic measure
                return _periodic_fiber(x.q, self.base.y, ns)
            # e(n*y0) times a rational Weyl sum in closed form
            return _cis(_phase_of_coordinate(self.base.y, ns)) * _rational_weyl(x.p, x.q, ns, self.n) / self.n
        ys, counts = self.fiber_law()
        ys = np.asarray(ys, dtype=np.float64)
        w = counts / self.n
        acc = np.zeros(ns.shape, dtype=np.complex128)
        # chunked direct summation keeps memory bounded at large n
        step = max(1, 2_000_000 // max(1, ns.size))
        for s in range(0, len(ys), step):
            t = np.multiply.outer(ns.astype(np.float64), ys[s:s + step])
            acc += _cis(t) @ w[s:s + step]
        return acc

    def __str__(self) -> str:
        return format_measure(self)


ErgodicMeasure = Union[FiberLebesgue, PeriodicAtomic]
Measure = Union[FiberLebesgue, PeriodicAtomic, EmpiricalMeasure]


def limit_measure(point: TorusPoint) -> ErgodicMeasure:
    """Weak-* limit of the empirical measures along the orbit of ``point``."""
    x = point.x
    if isinstance(x, Rational):
        return PeriodicAtomic(x, point.y)
    if isinstance(x, FloatValue) and not x.assume_irrational:
        raise ValueError(
            f"x = {x.v!r} is a raw float; call rationalize(x, qmax) or "
            "construct FloatValue(x, assume_irrational=True)"
        )
    return FiberLebesgue(x)


def empirical(point: TorusPoint, n: int) -> EmpiricalMeasure:
    return EmpiricalMeasure(point, n)


def cesaro_periodic_average(values, M: int):
    """(a_1 + ... + a_M) / M; exact (Fraction) for integer/Fraction input."""
    if M < 1:
        raise ValueError("period M must be >= 1")
    head = list(values)[:M]
    if len(head) < M:
        raise ValueError(f"need at least M={M} values, got {len(head)}")
    if all(isinstance(a, (int, Fraction)) for a in head):
        return Fraction(sum(head), M)
    return math.fsum(head) / M


@dataclass(frozen=True)
class CesaroCheck:
    limit: float
    worst_error: float
    worst_ratio: float  # error * n / (2 M max|a|); <= 1 means the bound holds

    @property
    def ok(self) -> bool:
        return self.worst_ratio <= 1.0


def check_cesaro_convergence(values, M: int, n_max: int) -> CesaroCheck:
    """Running averages of the M-periodic extension against the limit.

    Checks |S_n/n - limit| <= 2*M*max|a|/n for every n <= n_max.
    """
    limit = float(cesaro_periodic_average(values, M))
    period = np.asarray([float(a) for a in list(values)[:M]])
    amax = float(np.max(np.abs(period)))
    n = np.arange(1, n_max + 1)
    running = np.cumsum(np.resize(period, n_max)) / n
    err = np.abs(running - limit)
    if amax == 0.0:
        return CesaroCheck(limit, float(err.max()), 0.0)
    ratio = err * n / (2 * M * amax)
    return CesaroCheck(limit, float(err.max()), float(ratio.max()))


def coefficient(mu: Measure, m: int, n: int) -> complex:
    """Single Fourier coefficient mu^(m, n) = integral of exp(2 pi i (m x + n y))."""
    return complex(mu.x_phase([m])[0] * mu.fiber_coefficients([n])[0])


def integrate(mu: Measure, phi) -> complex:
    """Integral of a trigonometric polynomial ``phi`` (anything with ``.terms``)."""
    terms = phi.terms
    if not terms:
        return 0j
    ms = sorted({m for m, _ in terms})
    ns = sorted({n for _, n in terms})
    xp = dict(zip(ms, mu.x_phase(ms)))
    fc = dict(zip(ns, mu.fiber_coefficients(ns)))
    return complex(sum(c * xp[m] * fc[n] for (m, n), c in terms.items()))


def pushforward(mu: Measure) -> Measure:
    """Image of ``mu`` under the skew map."""
    if isinstance(mu, FiberLebesgue):
        return mu
    if isinstance(mu, PeriodicAtomic):
        p, q = mu.pq.p, mu.pq.q
        if isinstance(mu.y0, Fraction):
            return PeriodicAtomic(mu.pq, frac(mu.y0 + Fraction(p, q)))
        return PeriodicAtomic(mu.pq, frac(mu.y0 + p / q))
    return EmpiricalMeasure(skew_map(mu.base), mu.n)


def atom_map(mu) -> dict:
    """{y: total weight} over the atoms of an atomic measure."""
    out: dict = {}
    for a in mu.atoms():
        out[a.y] = out.get(a.y, 0) + a.weight
    return out


def _coset_offset(x: Rational, y0: Fraction) -> tuple[int, int]:
    # y0 mod 1/q as a reduced (numerator, denominator) pair
    r, s = y0.numerator, y0.denominator
    L = s * x.q
    num = r * x.q % s
    g = math.gcd(num, L)
    return num // g, L // g


def law_signature(mu):
    """Canonical hashable description of an exactly representable atomic measure.

    A uniform measure on a full coset y0 + (1/q)Z is ``("coset", x, c)``
    with c the offset in [0, 1/q) as a reduced
    (numerator, denominator) pair.  Anything else is
    ``("atoms", x, L, nums, weights)`` with distinct sorted atoms at
    nums/L (L minimal) and integer weights reduced by their gcd.  The two
    forms never describe the same measure.  Returns None when the
    measure has no exact form.
    """
    if isinstance(mu, PeriodicAtomic) and isinstance(mu.y0, Fraction):
        return ("coset", mu.pq, _coset_offset(mu.pq, mu.y0))
    if isinstance(mu, EmpiricalMeasure):
        x, y = mu.base.x, mu.base.y
        # gcd(p, q) = 1, so any q consecutive indices sweep the whole coset
        if isinstance(x, Rational) and isinstance(y, Fraction) and mu.n % x.q == 0:
            return ("coset", x, _coset_offset(x, y))
    law = mu.exact_law() if hasattr(mu, "exact_law") else None
    if law is None:
        return None
    L, nums, counts = law
    merged: dict = {}
    for k, c in zip(nums, counts):
        merged[k] = merged.get(k, 0) + c
    keys = sorted(merged)
    w = [merged[k] for k in keys]
    g, h = math.gcd(L, *keys), math.gcd(*w)
    return ("atoms", mu.base.x, L // g, tuple(k // g for k in keys), tuple(c // h for c in w))


def same_atoms(mu, nu) -> bool:
    """Exact equality of two atomic measures given by rational data."""
    a, b = law_signature(mu), law_signature(nu)
    if a is None or b is None:
        raise ValueError("same_atoms needs rational x and rational y")
    return a == b


def format_measure(mu: Measure) -> str:
    if isinstance(mu, FiberLebesgue):
        return f"lebesgue({format_base_value(mu.x0)})"
    if isinstance(mu, PeriodicAtomic):
        return f"atomic({format_base_value(mu.pq)}, {format_coordinate(mu.y0)})"
    b = mu.base
    return f"empirical({format_base_value(b.x)}, {format_coordinate(b.y)}, {mu.n})"


_MEASURE_RE = re.compile(r"^\s*(lebesgue|atomic|empirical)\s*\((.*)\)\s*$", re.IGNORECASE)


def parse_measure(text: str, *, assume_irrational: bool = False) -> Measure:
    """Inverse of :func:`format_measure`.

    Float x-values inside ``lebesgue(...)`` are accepted as irrational;
    the explicit measure kind is the caller's decision.
    """
    m = _MEASURE_RE.match(text)
    if not m:
        raise ValueError(f"unrecognized measure {text!r}")
    kind = m.group(1).lower()
    args = [a.strip() for a in m.group(2).split(",")]
    if kind == "lebesgue":
        if len(args) != 1:
            raise ValueError("lebesgue(x0) takes one argument")
        x = parse_base_value(args[0])
        if isinstance(x, FloatValue):
            x = FloatValue(x.v, assume_irrational=True)
        return FiberLebesgue(x)
    if kind == "atomic":
        if len(args) != 2:
            raise ValueError("atomic(p/q, y0) takes two arguments")
        x = parse_base_value(args[0])
        if not isinstance(x, Rational):
            raise ValueError(f"atomic measure needs a rational base, got {args[0]!r}")
        return PeriodicAtomic(x, parse_coordinate(args[1]))
    if len(args) != 3:
        raise ValueError("empirical(x, y, n) takes three arguments")
    x = parse_base_value(args[0])
    if isinstance(x, FloatValue) and assume_irrational:
        x = FloatValue(x.v, assume_irrational=True)
    return EmpiricalMeasure(TorusPoint(x, parse_coordinate(args[1])), int(args[2]))
