"""Approach sequences and distance curves for the continuity dichotomy of the
limit-measure map: bounded below at rational fibers, convergent at irrational
ones, plus Birkhoff convergence curves and the Thomae continuity scan."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .measures import FiberLebesgue, PeriodicAtomic, empirical, limit_measure
from .numtheory import continued_fraction, dist_to_integers
from .topology import psi1, rtilde_distance
from .torus import (
    BaseValue,
    QuadraticIrrational,
    Rational,
    TorusPoint,
    frac_multiples,
)
from .weakstar import MetricConfig, TrigPolynomial, dk, spectrum_of

__all__ = [
    "DistanceCurve",
    "witness_function",
    "golden_offset",
    "irrational_approach",
    "rational_approach",
    "convergence_curve",
    "paired_convergence",
    "thomae_sup_near",
]

CONVERGES = "converges-to-zero"
BOUNDED_BELOW = "bounded-below"
INCONCLUSIVE = "inconclusive"

# slack for comparing float distances against closed-form bounds
_SLACK = 1e-12


@dataclass
class DistanceCurve:
    labels: list
    values: list[float]
    verdict: str
    bound: Optional[float] = None
    envelope: Optional[list] = None
    label_name: str = "k"
    approximants: Optional[list[str]] = None

    def __post_init__(self):
        if any(v < 0 for v in self.values):
            raise ValueError("distances must be nonnegative")
        if self.verdict == BOUNDED_BELOW and not (self.bound and self.bound > 0):
            raise ValueError("a bounded-below verdict needs a positive bound")

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow([self.label_name, "distance"])
        for k, v in zip(self.labels, self.values):
            w.writerow([k, repr(float(v))])
        return buf.getvalue()

    def to_dict(self) -> dict:
        d = {
            "label_name": self.label_name,
            "labels": list(self.labels),
            "values": [float(v) for v in self.values],
            "verdict": self.verdict,
            "bound": self.bound,
            "envelope": self.envelope,
        }
        if self.approximants is not None:
            d["approximants"] = self.approximants
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def witness_function(q: int, y0) -> TrigPolynomial:
    """h(y) = 1 - cos(2 pi q (y - y0)) as a function on the torus.

    h vanishes on the q atoms frac(y0 + j/q) and integrates to 1 over
    the circle.
    """
    if q < 1:
        raise ValueError("q must be >= 1")
    t = float(q * y0 - math.floor(q * y0))
    rot = complex(math.cos(2 * math.pi * t), math.sin(2 * math.pi * t))
    return TrigPolynomial({(0, 0): 1 + 0j, (0, q): -0.5 * rot.conjugate(), (0, -q): -0.5 * rot})


def golden_offset(x: Rational, k: int) -> QuadraticIrrational:
    """p/q + golden / 10**k, reduced mod 1 (always irrational)."""
    p, q = x.p, x.q
    # p/q + (sqrt5 - 1)/(2*10^k) = (2p*10^k - q + q*sqrt5) / (2q*10^k)
    s = 10**k
    return QuadraticIrrational(2 * p * s - q, q, 5, 2 * q * s)


def irrational_approach(target: TorusPoint, steps: int, K: int) -> DistanceCurve:
    """dK between T(x_k, y0) and T(target) for irrational x_k -> p/q."""
    x = target.x
    if not isinstance(x, Rational):
        raise ValueError("irrational_approach needs a rational target")
    if steps < 1:
        raise ValueError("steps must be >= 1")
    if K < x.q:
        raise ValueError(f"K={K} < q={x.q}: the truncation cannot see the gap")
    cfg = MetricConfig(K)
    ref = spectrum_of(limit_measure(target), K)
    labels = list(range(1, steps + 1))
    xs = [golden_offset(x, k) for k in labels]
    values = [dk(spectrum_of(FiberLebesgue(xk), K), ref, cfg) for xk in xs]
    bound = 2.0 ** (1 - x.q)
    verdict = BOUNDED_BELOW if all(v >= bound - _SLACK for v in values) else INCONCLUSIVE
    return DistanceCurve(labels, values, verdict, bound=bound, approximants=[str(v) for v in xs])


def _row0_envelope(delta: float, K: int) -> float:
    # |e(m a) - e(m b)| <= 2 pi |m| |a - b| summed with weights 2^-|m|
    s = 2.0 * sum(m * 2.0**-m for m in range(1, K + 1))
    return 2.0 * math.pi * s * delta


def _offset(x0: BaseValue, r: Fraction) -> float:
    # x0 - r rounded once; hi + lo carries x0 to ~1e-32
    hi, lo = x0.hi_lo
    return float(Fraction(hi) + Fraction(lo) - r)


def _row0_distance(delta: float, K: int) -> float:
    """sum_{0<|m|<=K} 2^-|m| |e(m a) - e(m b)| for a - b = delta.

    Written as 2|sin(pi m delta)| so small offsets keep full relative
    precision instead of cancelling between two unit-modulus phases.
    """
    return 2.0 * sum(2.0**-m * 2.0 * abs(math.sin(math.pi * m * delta)) for m in range(1, K + 1))


def rational_approach(target: TorusPoint, kmax: int, K: int) -> DistanceCurve:
    """dK between T(p_k/q_k, y0) and T(target) along convergents of x0.

    Once q_k > K every fiber coefficient with 0 < |n| <= K vanishes on
    both sides, so dK reduces to the n = 0 row, which is evaluated from
    the exact offset x0 - p_k/q_k.
    """
    x0 = target.x
    if isinstance(x0, Rational):
        raise ValueError("rational_approach needs an irrational target")
    if kmax < 1:
        raise ValueError("kmax must be >= 1")
    cfg = MetricConfig(K)
    ref = spectrum_of(limit_measure(target), K)
    cf = continued_fraction(x0, kmax)
    labels, values, envelope, names = [], [], [], []
    for k, c in enumerate(cf.convergents):
        labels.append(k)
        names.append(f"{c.numerator}/{c.denominator}")
        if c.denominator > K:
            delta = _offset(x0, c)
            values.append(_row0_distance(delta, K))
            envelope.append(_row0_envelope(abs(delta), K))
        else:
            mu = PeriodicAtomic(Rational.from_fraction(c), target.y)
            values.append(dk(spectrum_of(mu, K), ref, cfg))
            envelope.append(None)
    resolved = [(v, e) for v, e in zip(values, envelope) if e is not None]
    ok = bool(resolved) and all(v <= e + _SLACK for v, e in resolved)
    return DistanceCurve(labels, values, CONVERGES if ok else INCONCLUSIVE,
                         envelope=envelope, approximants=names)


def convergence_curve(point: TorusPoint, Ns: Sequence[int], K: int) -> DistanceCurve:
    """dK(empirical(point, N), T(point)) for each N, with closed-form envelopes.

    Irrational x0: sum over rows n != 0 of row_weight(n) / (2 N ||n x0||).
    Rational p/q: 0 when q | N, else 2 (N mod q) / N times the total weight.
    """
    if any(N < 1 for N in Ns):
        raise ValueError("every N must be >= 1")
    cfg = MetricConfig(K)
    mu = limit_measure(point)
    ref = spectrum_of(mu, K)
    x = point.x
    if isinstance(x, Rational):
        total = cfg.total_weight()
        env = [2.0 * (N % x.q) / N * total for N in Ns]
    else:
        ns = np.arange(1, K + 1)
        dists = [dist_to_integers(t) for t in frac_multiples(x, ns)]
        per = 2 * sum(cfg.row_weight(int(n)) / (2.0 * d) for n, d in zip(ns, dists))
        env = [per / N for N in Ns]
    values = [dk(spectrum_of(empirical(point, N), K), ref, cfg) for N in Ns]
    ok = all(v <= e + _SLACK for v, e in zip(values, env))
    return DistanceCurve(list(Ns), values, CONVERGES if ok else INCONCLUSIVE,
                         envelope=env, label_name="n")


def paired_convergence(target: TorusPoint, kmax: int, K: int) -> tuple[DistanceCurve, list[float]]:
    """Along convergents of an irrational x0: dK of the measures and the
    distance of their psi1 images, side by side."""
    curve = rational_approach(target, kmax, K)
    image = psi1(limit_measure(target))
    cf = continued_fraction(target.x, kmax)
    rt = [
        rtilde_distance(psi1(PeriodicAtomic(Rational.from_fraction(c), target.y)), image)
        for c in cf.convergents
    ]
    return curve, rt


def thomae_sup_near(x: BaseValue, radius: Fraction, qmax: int) -> tuple[Fraction, Optional[Fraction]]:
    """sup of T(p/q) over p/q with q <= qmax and |p/q - x| < radius.

    Brute scan over every denominator; comparisons with quadratic
    irrationals are exact.  Returns (sup, maximizing p/q or None).
    """
    radius = Fraction(radius)
    best, arg = Fraction(0), None
    for q in range(1, qmax + 1):
        if best >= Fraction(1, q):
            break
        centre = math.floor(float(x) * q)
        for p in range(centre - 1, centre + 3):
            r = Fraction(p, q)
            if r.denominator != q:
                continue
            if _within(x, r, radius):
                best, arg = Fraction(1, q), r
                break
    return best, arg


def _within(x: BaseValue, r: Fraction, radius: Fraction) -> bool:
    lo, hi = r - radius, r + radius
    if isinstance(x, QuadraticIrrational):
        return x.compare(lo) > 0 and x.compare(hi) < 0
    xv = x.as_fraction() if isinstance(x, Rational) else Fraction(float(x))
    return lo < xv < hi
