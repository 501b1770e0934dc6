"""Refined-Sobolev-scale norms on Fourier mode sequences.

Distributions on the circle are carried by their Fourier coefficients
c_k, |k| <= K.  The norm of regularity (s, phi) weights mode k by
<k>**s * phi(<k>) with <k> = (1 + k^2)**(1/2); phi == 1 recovers the
plain Sobolev norm.  The module also realizes interpolation with a
function parameter for diagonal Hilbert couples of weighted sequence
spaces: with the parameter

    psi(t) = t**(1/2) * phi(t**(1/(2*eps)))      (t >= 1)

the couple (order s - eps, order s + eps) interpolates exactly to the
norm of regularity (s, phi), mode by mode.

Sums over modes use exact compensated summation (math.fsum), so band
limits up to about 1e6 modes accumulate no drift.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping

from .slowvar import LogPowerPhi, eval_phi

__all__ = [
    "ModeSequence",
    "HormanderSpec",
    "InterpolationParameter",
    "PsiWeight",
    "bracket",
    "hnorm",
    "make_psi",
    "interpolation_norm",
    "check_embedding_chain",
]


def bracket(k: int) -> float:
    """Smoothed modulus <k> = (1 + k^2)**(1/2)."""
    return math.hypot(1.0, float(k))


@dataclass(frozen=True)
class ModeSequence:
    """Finitely supported map k -> c_k with |k| <= band_limit."""

    coefficients: Mapping[int, complex]
    band_limit: int

    def __init__(self, coefficients: Mapping[int, complex] | Iterable[tuple[int, complex]],
                 band_limit: int | None = None):
        items = dict(coefficients)
        coeffs = {int(k): complex(c) for k, c in items.items() if c != 0}
        limit = max((abs(k) for k in coeffs), default=0)
        if band_limit is None:
            band_limit = limit
        if limit > band_limit:
            raise ValueError(f"mode {limit} exceeds band limit {band_limit}")
        object.__setattr__(self, "coefficients", coeffs)
        object.__setattr__(self, "band_limit", int(band_limit))

    def __getitem__(self, k: int) -> complex:
        return self.coefficients.get(k, 0.0 + 0.0j)

    def __add__(self, other: "ModeSequence") -> "ModeSequence":
        keys = set(self.coefficients) | set(other.coefficients)
        return ModeSequence({k: self[k] + other[k] for k in keys},
                            max(self.band_limit, other.band_limit))

    def __sub__(self, other: "ModeSequence") -> "ModeSequence":
        return self + (-1.0) * other

    def __rmul__(self, scalar: complex) -> "ModeSequence":
        return ModeSequence({k: scalar * c for k, c in self.coefficients.items()},
                            self.band_limit)

    def is_zero(self, tol: float = 0.0) -> bool:
        return all(abs(c) <= tol for c in self.coefficients.values())

    def pairs(self) -> list[tuple[int, float, float]]:
        """Serialization form: sorted (k, re, im) triples."""
        return [(k, self.coefficients[k].real, self.coefficients[k].imag)
                for k in sorted(self.coefficients)]

    @classmethod
    def from_pairs(cls, triples: Iterable[tuple[int, float, float]],
                   band_limit: int | None = None) -> "ModeSequence":
        return cls({int(k): complex(re, im) for k, re, im in triples}, band_limit)


ZERO_SEQUENCE = ModeSequence({}, 0)


@dataclass(frozen=True)
class HormanderSpec:
    """Regularity pair: principal order s and slowly varying phi."""

    s: float
    phi: LogPowerPhi = field(default_factory=LogPowerPhi)


@dataclass(frozen=True)
class InterpolationParameter:
    """Data (eps, phi) defining the interpolation weight psi."""

    eps: float
    phi: LogPowerPhi = field(default_factory=LogPowerPhi)

    def __post_init__(self):
        if self.eps <= 0:
            raise ValueError(f"eps must be positive; got {self.eps}")


@dataclass(frozen=True)
class PsiWeight:
    """psi(t) = t**(1/2) phi(t**(1/(2 eps))) on [1, oo); phi(1) below 1."""

    eps: float
    phi: LogPowerPhi

    def __call__(self, t: float) -> float:
        if t <= 0:
            raise ValueError(f"psi is defined on (0, oo); got t = {t}")
        if t < 1.0:
            return eval_phi(self.phi, 1.0)
        return math.sqrt(t) * eval_phi(self.phi, t ** (1.0 / (2.0 * self.eps)))


def make_psi(param: InterpolationParameter) -> PsiWeight:
    """Interpolation weight turning the (s-eps, s+eps) couple into (s, phi)."""
    return PsiWeight(param.eps, param.phi)


def hnorm(seq: ModeSequence, spec: HormanderSpec) -> float:
    """Norm (sum_k <k>**(2s) phi(<k>)^2 |c_k|^2)**(1/2)."""
    terms = []
    for k, c in seq.coefficients.items():
        b = bracket(k)
        w = b**spec.s * eval_phi(spec.phi, b)
        terms.append((w * abs(c)) ** 2)
    return math.sqrt(math.fsum(terms))


def interpolation_norm(seq: ModeSequence, s0: float, s1: float,
                       psi: Callable[[float], float]) -> float:
    """Interpolation norm of the diagonal couple with mode weights
    <k>**(2 s0) and <k>**(2 s1).

    The generating operator of the couple is diagonal with eigenvalue
    <k>**(s1 - s0) at mode k, so the norm is

        (sum_k <k>**(2 s0) * psi(<k>**(s1-s0))^2 |c_k|^2)**(1/2).
    """
    if s0 >= s1:
        raise ValueError(f"need s0 < s1; got s0 = {s0}, s1 = {s1}")
    terms = []
    for k, c in seq.coefficients.items():
        b = bracket(k)
        w0 = b ** (2.0 * s0)
        eigen = b ** (s1 - s0)
        terms.append(w0 * psi(eigen) ** 2 * abs(c) ** 2)
    return math.sqrt(math.fsum(terms))


def check_embedding_chain(seq: ModeSequence, s: float, eps: float,
                          phi: LogPowerPhi) -> tuple[float, float, float]:
    """Norms at (s+eps, 1), (s, phi), (s-eps, 1), in that order.

    For band-limited sequences the middle norm is sandwiched between
    constant multiples of the outer two; the relevant weight ratio
    <k>**(-eps) * phi(<k>) is bounded in k for log-power phi.
    """
    if eps <= 0:
        raise ValueError(f"eps must be positive; got {eps}")
    upper = hnorm(seq, HormanderSpec(s + eps))
    middle = hnorm(seq, HormanderSpec(s, phi))
    lower = hnorm(seq, HormanderSpec(s - eps))
    return upper, middle, lower
