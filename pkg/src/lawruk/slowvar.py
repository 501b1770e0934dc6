"""Slowly varying weight functions of iterated log-power type.

The functional regularity parameter used throughout this package is a
finite product

    phi(t) = L_1(t)**r_1 * L_2(t)**r_2 * ... * L_k(t)**r_k,

where L_1(t) = 1 + ln(t) and L_{j+1}(t) = 1 + ln(L_j(t)).  Each L_j is
positive and equals 1 at t = 1, so phi is positive on [1, oo), agrees
with the usual iterated log powers up to asymptotic equivalence for
large t, and is slowly varying at infinity in the sense of Karamata
(phi(lam*t)/phi(t) -> 1 for every fixed lam > 0).  The empty exponent
list gives phi == 1, the plain Sobolev case.

The module also decides whether the embedding integral

    I(phi) = int_1^oo dt / (t * phi(t)**2)

is finite.  This is the criterion separating the weights whose spaces
embed into spaces of continuous functions from those that do not.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from scipy.integrate import quad

__all__ = [
    "LogPowerPhi",
    "eval_phi",
    "embedding_integral_is_finite",
    "embedding_integral_partial",
]


@dataclass(frozen=True)
class LogPowerPhi:
    """A slowly varying weight given by its iterated-log exponents."""

    exponents: tuple[float, ...] = ()

    def __init__(self, exponents: Sequence[float] = ()):
        object.__setattr__(self, "exponents", tuple(float(r) for r in exponents))

    def __call__(self, t: float) -> float:
        return eval_phi(self, t)

    @property
    def is_trivial(self) -> bool:
        return all(r == 0.0 for r in self.exponents)


def _iterated_logs(u: float, depth: int) -> list[float]:
    """[L_1, ..., L_depth] evaluated via u = ln(t) (so L_1 = 1 + u)."""
    levels = []
    x = 1.0 + u
    for _ in range(depth):
        levels.append(x)
        x = 1.0 + math.log(x)
    return levels


def eval_phi(phi: LogPowerPhi, t: float) -> float:
    """Evaluate phi at t >= 1.

    Returns prod_j L_j(t)**r_j with L_1 = 1 + ln t and
    L_{j+1} = 1 + ln L_j.  Strictly positive; equals 1 at t = 1.
    """
    if t < 1.0:
        raise ValueError(f"phi is defined on [1, oo); got t = {t}")
    return _eval_phi_from_log(phi, math.log(t))


def _eval_phi_from_log(phi: LogPowerPhi, u: float) -> float:
    if not phi.exponents:
        return 1.0
    levels = _iterated_logs(u, len(phi.exponents))
    return math.prod(L**r for L, r in zip(levels, phi.exponents))


def embedding_integral_is_finite(phi: LogPowerPhi) -> bool:
    """Decide analytically whether int_1^oo dt/(t phi^2(t)) converges.

    After u = ln t the integral becomes an iterated-log (Bertrand-type)
    integral, which converges iff at the first index j with
    2*r_j != 1 one has 2*r_j > 1; if every 2*r_j equals 1 (in
    particular for the empty list) it diverges.
    """
    for r in phi.exponents:
        if 2.0 * r != 1.0:
            return 2.0 * r > 1.0
    return False


def embedding_integral_partial(phi: LogPowerPhi, cutoff: float) -> float:
    """Quadrature of int_1^cutoff dt/(t phi^2(t)).

    Used as a numeric cross-check of the analytic convergence rule;
    quadrature alone cannot prove divergence.  Computed after the exact
    substitution u = ln t, which keeps the integrand well scaled for
    cutoffs as large as 1e60.  Relative error <= 1e-8.
    """
    if cutoff <= 1.0:
        raise ValueError(f"cutoff must exceed 1; got {cutoff}")
    upper = math.log(cutoff)

    def integrand(u: float) -> float:
        return 1.0 / _eval_phi_from_log(phi, u) ** 2

    value, _err = quad(integrand, 0.0, upper, epsabs=0.0, epsrel=1e-10, limit=400)
    return value
