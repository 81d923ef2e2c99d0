"""Weak-* probes: trigonometric test functions, truncated Fourier spectra,
the weighted coefficient distance d_K, Weyl sums and star discrepancy."""

from __future__ import annotations

import functools
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .measures import Measure, _cis
from .numtheory import dist_to_integers
from .torus import BaseValue, Rational, frac_multiples

__all__ = [
    "TrigPolynomial",
    "FourierSpectrum",
    "MetricConfig",
    "spectrum_of",
    "dk",
    "dk_report",
    "weyl_sum",
    "weyl_sum_closed",
    "weyl_bound",
    "discrepancy",
    "pushforward_spectrum",
]


@dataclass(frozen=True)
class TrigPolynomial:
    """Finite sum of c_{mn} exp(2 pi i (m x + n y)) on the torus."""

    terms: dict = field(default_factory=dict)

    @classmethod
    def character(cls, m: int, n: int, c: complex = 1.0) -> "TrigPolynomial":
        return cls({(m, n): complex(c)})

    @classmethod
    def constant(cls, c: complex = 1.0) -> "TrigPolynomial":
        return cls({(0, 0): complex(c)})

    def __add__(self, other: "TrigPolynomial") -> "TrigPolynomial":
        terms = dict(self.terms)
        for k, c in other.terms.items():
            terms[k] = terms.get(k, 0j) + c
        return TrigPolynomial(terms)

    def __mul__(self, s: complex) -> "TrigPolynomial":
        return TrigPolynomial({k: s * c for k, c in self.terms.items()})

    __rmul__ = __mul__

    def __call__(self, x, y):
        x = np.asarray(x, dtype=np.float64)
        y = np.asarray(y, dtype=np.float64)
        out = np.zeros(np.broadcast(x, y).shape, dtype=np.complex128)
        for (m, n), c in self.terms.items():
            out = out + c * np.exp(2j * np.pi * (m * x + n * y))
        return out

    @property
    def l1_norm(self) -> float:
        return sum(abs(c) for c in self.terms.values())


@dataclass(frozen=True)
class FourierSpectrum:
    """Coefficients mu^(m, n) for max(|m|, |n|) <= K; ``coeffs[m+K, n+K]``."""

    K: int
    coeffs: np.ndarray

    def __getitem__(self, mn) -> complex:
        m, n = mn
        if max(abs(m), abs(n)) > self.K:
            raise KeyError(f"({m}, {n}) outside cutoff K={self.K}")
        return complex(self.coeffs[m + self.K, n + self.K])

    def items(self):
        K = self.K
        for m in range(-K, K + 1):
            for n in range(-K, K + 1):
                yield m, n, complex(self.coeffs[m + K, n + K])

    def to_records(self) -> list[dict]:
        return [{"m": m, "n": n, "re": c.real, "im": c.imag} for m, n, c in self.items()]

    def to_json(self) -> str:
        return json.dumps(self.to_records())

    @classmethod
    def from_records(cls, records) -> "FourierSpectrum":
        K = max(max(abs(r["m"]), abs(r["n"])) for r in records)
        coeffs = np.zeros((2 * K + 1, 2 * K + 1), dtype=np.complex128)
        for r in records:
            coeffs[r["m"] + K, r["n"] + K] = complex(r["re"], r["im"])
        return cls(K, coeffs)


@dataclass(frozen=True)
class MetricConfig:
    K: int = 5

    def __post_init__(self):
        if self.K < 1:
            raise ValueError("cutoff K must be >= 1")

    def weight(self, m: int, n: int) -> float:
        return 2.0 ** -(abs(m) + abs(n))

    def weights(self) -> np.ndarray:
        return _weights(self.K).copy()

    def total_weight(self) -> float:
        """Sum of weights over the truncation box, (0, 0) excluded."""
        return float(self.weights().sum()) - 1.0

    def row_weight(self, n: int) -> float:
        """Sum over |m| <= K of weight(m, n)."""
        return 2.0 ** -abs(n) * (3.0 - 2.0 ** (1 - self.K))


@functools.lru_cache(maxsize=32)
def _weights(K: int) -> np.ndarray:
    r = np.arange(-K, K + 1)
    w1 = 2.0 ** -np.abs(r)
    return np.outer(w1, w1)


@functools.lru_cache(maxsize=32)
def _metric_weights(K: int) -> np.ndarray:
    w = _weights(K).copy()
    w[K, K] = 0.0
    w.flags.writeable = False
    return w


def spectrum_of(mu: Measure, K: int) -> FourierSpectrum:
    if K < 1:
        raise ValueError("cutoff K must be >= 1")
    r = np.arange(-K, K + 1)
    return FourierSpectrum(K, np.outer(mu.x_phase(r), mu.fiber_coefficients(r)))


def pushforward_spectrum(mu: Measure, K: int) -> FourierSpectrum:
    """Coefficients of f_* mu through (f_* mu)^(m, n) = mu^(m + n, n)."""
    r = np.arange(-K, K + 1)
    xp = mu.x_phase(np.arange(-2 * K, 2 * K + 1))
    fc = mu.fiber_coefficients(r)
    coeffs = np.empty((2 * K + 1, 2 * K + 1), dtype=np.complex128)
    for i, m in enumerate(r):
        coeffs[i, :] = xp[m + r + 2 * K] * fc
    return FourierSpectrum(K, coeffs)


def _as_spectrum(mu, K: int) -> FourierSpectrum:
    if isinstance(mu, FourierSpectrum):
        if mu.K != K:
            raise ValueError(f"spectrum has K={mu.K}, metric expects K={K}")
        return mu
    return spectrum_of(mu, K)


def dk(mu, nu, cfg: MetricConfig | None = None) -> float:
    """Weighted l1 distance between truncated spectra (a pseudometric).

    ``mu`` and ``nu`` may be measures or precomputed spectra; spectra
    must carry the same cutoff as ``cfg``.
    """
    cfg = cfg or MetricConfig()
    a = _as_spectrum(mu, cfg.K)
    b = _as_spectrum(nu, cfg.K)
    diff = np.abs(a.coeffs - b.coeffs).reshape(-1)
    return float(diff @ _metric_weights(cfg.K).reshape(-1))


def dk_report(mu, nu, cfg: MetricConfig | None = None) -> dict:
    cfg = cfg or MetricConfig()
    return {"K": cfg.K, "distance": dk(mu, nu, cfg)}


def _check_weyl_args(n: int, N: int) -> None:
    if n == 0:
        raise ValueError("frequency n must be nonzero")
    if N < 1:
        raise ValueError("N must be >= 1")


def weyl_sum(x0: BaseValue, n: int, N: int, chunk: int = 1 << 20) -> complex:
    """Direct sum of exp(2 pi i n j x0) over j = 0..N-1."""
    _check_weyl_args(n, N)
    total = 0j
    for s in range(0, N, chunk):
        j = np.arange(s, min(N, s + chunk), dtype=np.int64)
        total += complex(_cis(frac_multiples(x0, n * j)).sum())
    return total


def weyl_sum_closed(x0: BaseValue, n: int, N: int) -> complex:
    """Geometric-series form (1 - z^N) / (1 - z) with z = exp(2 pi i n x0)."""
    _check_weyl_args(n, N)
    if isinstance(x0, Rational) and (n * x0.p) % x0.q == 0:
        return complex(N)
    t1, tN = frac_multiples(x0, np.array([n, n * N], dtype=np.int64))
    z, zN = complex(_cis(t1)), complex(_cis(tN))
    return (1 - zN) / (1 - z)


def weyl_bound(x0: BaseValue, n: int, N: int) -> float:
    """min(N, 1 / (2 ||n x0||))."""
    _check_weyl_args(n, N)
    d = dist_to_integers(float(frac_multiples(x0, np.array([n]))[0]))
    return float(N) if d == 0.0 else min(float(N), 1.0 / (2.0 * d))


def discrepancy(points):
    """Star discrepancy D*_N of points in [0, 1).

    max_i max(i/N - u_(i), u_(i) - (i-1)/N) over the sorted points.
    Exact (returns a Fraction) when every point is an int or Fraction.
    """
    pts = list(points)
    N = len(pts)
    if N == 0:
        raise ValueError("discrepancy of an empty point set")
    if all(isinstance(u, (int, Fraction)) for u in pts):
        den = 1
        for u in pts:
            den = math.lcm(den, Fraction(u).denominator)
        nums = sorted(int(Fraction(u) * den) for u in pts)
        best = max(
            max(i * den - N * u, N * u - (i - 1) * den) for i, u in enumerate(nums, start=1)
        )
        return Fraction(best, N * den)
    u = np.sort(np.asarray(pts, dtype=np.float64))
    i = np.arange(1, N + 1)
    return float(np.max(np.maximum(i / N - u, u - (i - 1) / N)))
