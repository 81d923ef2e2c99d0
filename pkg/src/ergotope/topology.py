"""The space of ergodic measures as a Thomae-type set.

``psi1`` sends an ergodic measure to a point (x, xi) of the set
{|xi| = T(x)} in S^1 x C, ``psi2`` relabels the circle coordinate so
that x = 0 disappears, and ``measure_to_r3`` lands in the surface of
revolution of the Thomae graph about the x-axis.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .measures import ErgodicMeasure, FiberLebesgue, PeriodicAtomic
from .numtheory import thomae_eval
from .torus import BaseValue, QuadraticIrrational, Rational, frac

__all__ = [
    "RtildePoint",
    "R3Point",
    "psi1",
    "psi1_inv",
    "psi2",
    "measure_to_r3",
    "rtilde_distance",
    "farey_interior",
    "sample_surface",
    "thomae_graph",
]

Turns = Union[Fraction, float]


def _cis_turns(t: Turns) -> complex:
    """exp(2 pi i t), exact at quarter turns."""
    t = frac(t)
    quarter = t * 4
    if quarter == int(quarter):
        return (1, 1j, -1, -1j)[int(quarter)]
    return cmath.exp(2j * math.pi * float(t))


@dataclass(frozen=True)
class RtildePoint:
    """(x, xi) with xi = radius * exp(2 pi i turns).

    Keeping radius and angle separately makes |xi| = T(x) exact for
    points built from atomic measures.
    """

    x: BaseValue
    radius: Union[Fraction, float] = Fraction(0)
    turns: Turns = Fraction(0)

    @classmethod
    def from_complex(cls, x: BaseValue, xi: complex) -> "RtildePoint":
        r = abs(xi)
        t = cmath.phase(xi) / (2 * math.pi) if r else 0.0
        return cls(x, r, frac(t))

    @property
    def xi(self) -> complex:
        if self.radius == 0:
            return 0j
        return float(self.radius) * _cis_turns(self.turns)

    def is_consistent(self, tol: float = 1e-12) -> bool:
        target = thomae_eval(self.x).value
        if isinstance(self.radius, Fraction):
            return self.radius == target
        return abs(self.radius - float(target)) <= tol


@dataclass(frozen=True)
class R3Point:
    x: float
    y: float
    z: float


def psi1(mu: ErgodicMeasure) -> RtildePoint:
    """mu_x -> (x, 0);  mu_(p/q, y) -> (p/q, (1/q) exp(2 pi i q y))."""
    if isinstance(mu, FiberLebesgue):
        if isinstance(mu.x0, Rational):
            raise ValueError("lebesgue measure on a rational fiber is not ergodic")
        return RtildePoint(mu.x0)
    q = mu.q
    return RtildePoint(mu.pq, Fraction(1, q), frac(q * mu.y0))


def psi1_inv(r: RtildePoint, tol: float = 1e-12) -> ErgodicMeasure:
    """Inverse of psi1; y0 is returned as its representative in [0, 1/q)."""
    if not r.is_consistent(tol):
        raise ValueError(f"|xi| = {float(r.radius)} does not match T(x) for x = {r.x}")
    if not isinstance(r.x, Rational):
        return FiberLebesgue(r.x)
    q = r.x.q
    turns = frac(r.turns)
    y0 = turns / q if isinstance(turns, Fraction) else frac(turns) / q
    return PeriodicAtomic(r.x, y0)


def psi2(x: BaseValue) -> BaseValue:
    """0 -> 1/2, 1/n -> 1/(n+1) for n >= 2, identity otherwise."""
    if isinstance(x, Rational):
        if x.p == 0:
            return Rational(1, 2)
        if x.p == 1 and x.q >= 2:
            return Rational(1, x.q + 1)
    return x


def measure_to_r3(mu: ErgodicMeasure) -> R3Point:
    """psi2 applied to psi1(mu), radius rescaled to T of the new abscissa."""
    r = psi1(mu)
    x = psi2(r.x)
    radius = thomae_eval(x).value if r.radius != 0 else 0
    if radius == 0:
        return R3Point(float(x), 0.0, 0.0)
    w = float(radius) * _cis_turns(r.turns)
    return R3Point(float(x), float(w.real), float(w.imag))


def rtilde_distance(a: RtildePoint, b: RtildePoint) -> float:
    """Euclidean distance in S^1 x C, circle coordinate measured mod 1."""
    dx = abs(float(a.x) - float(b.x))
    dx = min(dx, 1.0 - dx)
    return math.hypot(dx, abs(a.xi - b.xi))


def farey_interior(qmax: int) -> list[Rational]:
    """Reduced p/q in (0, 1) with q <= qmax, sorted by value."""
    out = [
        Rational(p, q)
        for q in range(2, qmax + 1)
        for p in range(1, q)
        if math.gcd(p, q) == 1
    ]
    out.sort(key=lambda r: r.as_fraction())
    return out


def _axis_abscissas(samples: int) -> list[QuadraticIrrational]:
    # (j + golden) / samples is irrational for every j
    return [QuadraticIrrational(2 * j - 1, 1, 5, 2 * samples) for j in range(samples)]


def sample_surface(qmax: int, angles: int, axis_samples: int = 200) -> list[R3Point]:
    """Point cloud on the revolution set: circles of radius 1/q over each
    reduced p/q in (0, 1), plus points (x, 0, 0) at irrational abscissas."""
    if qmax < 1 or angles < 1:
        raise ValueError("qmax and angles must be >= 1")
    if axis_samples < 0:
        raise ValueError("axis_samples must be >= 0")
    pts = [R3Point(float(x), 0.0, 0.0) for x in _axis_abscissas(axis_samples)]
    for r in farey_interior(qmax):
        rad = 1.0 / r.q
        for j in range(angles):
            w = rad * _cis_turns(Fraction(j, angles))
            pts.append(R3Point(float(r), float(w.real), float(w.imag)))
    return pts


def thomae_graph(qmax: int, samples: int) -> list[tuple[float, float]]:
    """(x, T(x)) at every reduced p/q in (0, 1) with q <= qmax and at
    ``samples`` irrational abscissas; sorted by x."""
    if qmax < 1 or samples < 0:
        raise ValueError("need qmax >= 1 and samples >= 0")
    pts = [(float(r), float(thomae_eval(r).value)) for r in farey_interior(qmax)]
    pts += [(float(x), 0.0) for x in _axis_abscissas(samples)]
    pts.sort()
    return pts
