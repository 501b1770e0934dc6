"""Pointwise Lawruk-ellipticity verification.

Checks the three conditions defining ellipticity for a boundary-value
problem whose boundary conditions carry additional scalar unknowns:

  (i)   the interior symbol does not vanish on real directions,
  (ii)  the symbol in zeta (normal direction frozen) splits into q
        roots in each open half-plane (proper ellipticity),
  (iii) the boundary symbols restricted to the decaying solutions of
        the interior symbol ODE, augmented by the extra unknowns, form
        a nonsingular square system (the covering condition).

The decaying solution basis over a root zeta_r of multiplicity mu is
t^l exp(-i zeta_r t), l = 0..mu-1, and the boundary entry has the
closed form i^l (d/dzeta)^l B(zeta) at zeta_r: writing
t^l e^{-i zeta t} = (i d_zeta)^l e^{-i zeta t} and using
B(D_t) e^{-i zeta t} = B(zeta) e^{-i zeta t}, every derivative landing
on the exponential vanishes at t = 0.  Multiple roots are therefore
handled; note that only simple-root configurations are exercised by
the classical worked examples, so the degenerate branch is covered by
synthetic tests alone.

Roots come from the balanced companion matrix; clusters within relative
distance ``tol`` are merged into a multiple root (representative: the
cluster mean).  Double eigenvalues of a companion matrix are perturbed
at the sqrt(machine epsilon) scale, so multiplicity detection needs
tol >= ~1e-7; the default 1e-8 is meant for simple-root symbols.

The covering verdict uses a Hadamard-normalized determinant test
(rows scaled by their max norms), which makes the verdict exactly
invariant under row rescaling.  All checks are sampled on supplied
direction grids, not certified.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

__all__ = [
    "PointSymbolProblem",
    "RootSplit",
    "CoveringReport",
    "LawrukReport",
    "EllipticityViolation",
    "RealRootError",
    "ImproperRootSplitError",
    "roots_with_multiplicity",
    "check_proper_ellipticity",
    "build_lopatinskii_matrix",
    "check_covering",
    "check_interior_ellipticity",
    "check_lawruk_ellipticity",
    "circle_directions",
    "sphere_directions",
]


class EllipticityViolation(Exception):
    """One of the ellipticity conditions fails structurally."""


class RealRootError(EllipticityViolation):
    """A zeta-root sits on (or within tol of) the real axis."""

    def __init__(self, root: complex, tol: float):
        self.root = root
        self.tol = tol
        super().__init__(f"root {root} has |Im| <= {tol}; proper ellipticity fails")


class ImproperRootSplitError(EllipticityViolation):
    """Half-plane root counts differ from q."""


@dataclass(frozen=True)
class PointSymbolProblem:
    """Principal symbols frozen at one boundary point and direction.

    ``a_poly`` is the degree-2q polynomial A(zeta) (ascending
    coefficients); ``b_polys`` the q + kappa boundary polynomials
    B_j(zeta) (identically zero rows allowed); ``c_values`` the
    (q+kappa) x kappa matrix of frozen tangential symbols.
    """

    a_poly: tuple[complex, ...]
    b_polys: tuple[tuple[complex, ...], ...]
    c_values: tuple[tuple[complex, ...], ...]
    q: int
    kappa: int

    def __init__(self, a_poly: Sequence[complex], b_polys: Sequence[Sequence[complex]],
                 c_values: Sequence[Sequence[complex]], q: int, kappa: int):
        if q < 1 or kappa < 1:
            raise ValueError("q and kappa must be positive")
        a = tuple(complex(c) for c in a_poly)
        while a and a[-1] == 0:
            a = a[:-1]
        if len(a) != 2 * q + 1:
            raise ValueError(f"a_poly must have degree {2*q}; got degree {len(a)-1}")
        if abs(a[-1]) == 0:
            raise ValueError("a_poly leading coefficient must be nonzero")
        b = tuple(tuple(complex(c) for c in row) for row in b_polys)
        if len(b) != q + kappa:
            raise ValueError(f"need {q + kappa} boundary symbol rows; got {len(b)}")
        c = tuple(tuple(complex(x) for x in row) for row in c_values)
        if len(c) != q + kappa or any(len(row) != kappa for row in c):
            raise ValueError(f"c_values must be {q + kappa} x {kappa}")
        object.__setattr__(self, "a_poly", a)
        object.__setattr__(self, "b_polys", b)
        object.__setattr__(self, "c_values", c)
        object.__setattr__(self, "q", int(q))
        object.__setattr__(self, "kappa", int(kappa))


@dataclass(frozen=True)
class RootSplit:
    """Roots of the frozen interior symbol split by half-plane."""

    plus_roots: tuple[tuple[complex, int], ...]
    minus_roots: tuple[tuple[complex, int], ...]
    tol: float

    @property
    def plus_multiplicity(self) -> int:
        return sum(m for _, m in self.plus_roots)

    @property
    def minus_multiplicity(self) -> int:
        return sum(m for _, m in self.minus_roots)

    @property
    def total_multiplicity(self) -> int:
        return self.plus_multiplicity + self.minus_multiplicity


@dataclass(frozen=True)
class CoveringReport:
    """Outcome of the covering-determinant test at one frozen direction."""

    matrix: np.ndarray
    det: complex
    is_covering: bool
    condition_number: float
    normalized_det: float
    tol: float


@dataclass(frozen=True)
class LawrukReport:
    """Aggregate verdict of conditions (i)-(iii) over sampled directions."""

    is_elliptic: bool
    interior_ok: bool
    entries: tuple[dict, ...]
    first_failure: dict | None = None


def _cluster_roots(roots: np.ndarray, tol: float) -> list[tuple[complex, int]]:
    """Greedy chaining of roots within relative distance tol."""
    remaining = list(roots)
    clusters: list[list[complex]] = []
    while remaining:
        seed = remaining.pop(0)
        cluster = [seed]
        changed = True
        while changed:
            changed = False
            for z in remaining[:]:
                if any(abs(z - w) <= tol * max(1.0, abs(z), abs(w)) for w in cluster):
                    cluster.append(z)
                    remaining.remove(z)
                    changed = True
        clusters.append(cluster)
    return [(complex(np.mean(cl)), len(cl)) for cl in clusters]


def roots_with_multiplicity(poly: Sequence[complex], tol: float = 1e-8) -> RootSplit:
    """Roots of a complex polynomial, clustered and split by Im sign.

    ``poly`` holds ascending coefficients.  Roots are the balanced
    companion-matrix eigenvalues; clusters within relative distance
    ``tol`` merge into one root of higher multiplicity.  A cluster
    centroid within ``tol`` of the real axis raises ``RealRootError``.
    """
    coeffs = np.asarray(poly, dtype=complex)
    coeffs = np.trim_zeros(coeffs, trim="b")
    if coeffs.size < 2:
        raise ValueError("polynomial must have degree >= 1")
    raw = np.roots(coeffs[::-1])
    plus: list[tuple[complex, int]] = []
    minus: list[tuple[complex, int]] = []
    for root, mult in _cluster_roots(raw, tol):
        if abs(root.imag) <= tol * max(1.0, abs(root)):
            raise RealRootError(root, tol)
        (plus if root.imag > 0 else minus).append((root, mult))
    key = lambda rm: (rm[0].real, rm[0].imag)
    return RootSplit(tuple(sorted(plus, key=key)), tuple(sorted(minus, key=key)), tol)


def check_proper_ellipticity(split: RootSplit, q: int) -> bool:
    """True iff each half-plane carries total multiplicity q."""
    return split.plus_multiplicity == q and split.minus_multiplicity == q


def _poly_derivative(coeffs: Sequence[complex], order: int) -> np.ndarray:
    c = np.asarray(coeffs, dtype=complex)
    for _ in range(order):
        if c.size <= 1:
            return np.zeros(1, dtype=complex)
        c = c[1:] * np.arange(1, c.size)
    return c


def _poly_eval(coeffs: np.ndarray, z: complex) -> complex:
    result = 0.0 + 0.0j
    for c in coeffs[::-1]:
        result = result * z + c
    return result


def build_lopatinskii_matrix(problem: PointSymbolProblem, split: RootSplit) -> np.ndarray:
    """Square system of the covering condition.

    Rows j = 1..q+kappa.  The first q columns run over the decaying
    basis t^l e^{-i zeta_r t} (minus-half-plane roots, l up to
    multiplicity - 1) with entry i^l B_j^{(l)}(zeta_r); the last kappa
    columns are the frozen tangential entries multiplying the extra
    unknowns.
    """
    q, kappa = problem.q, problem.kappa
    if split.minus_multiplicity != q or split.total_multiplicity != 2 * q:
        raise ImproperRootSplitError(
            f"expected q = {q} decaying roots out of {2*q}; got "
            f"{split.minus_multiplicity} of {split.total_multiplicity}")
    columns: list[tuple[complex, int]] = []   # (root, derivative order l)
    for root, mult in split.minus_roots:
        columns += [(root, l) for l in range(mult)]
    n = q + kappa
    matrix = np.zeros((n, n), dtype=complex)
    for j in range(n):
        b = np.asarray(problem.b_polys[j], dtype=complex)
        for col, (root, l) in enumerate(columns):
            matrix[j, col] = (1j**l) * _poly_eval(_poly_derivative(b, l), root)
        for k in range(kappa):
            matrix[j, q + k] = problem.c_values[j][k]
    return matrix


def check_covering(problem: PointSymbolProblem, tol: float = 1e-10,
                   root_tol: float = 1e-8) -> CoveringReport:
    """Full pipeline: roots, proper ellipticity, matrix, determinant.

    ``is_covering`` holds iff |det| exceeds tol times the product of
    row max norms (Hadamard normalization), so the verdict is exactly
    invariant under row rescaling; a singular-to-tolerance determinant
    reports False rather than raising.  ``root_tol`` is the clustering
    and real-axis tolerance of the root split.
    """
    split = roots_with_multiplicity(problem.a_poly, tol=root_tol)
    if not check_proper_ellipticity(split, problem.q):
        raise ImproperRootSplitError(
            f"half-plane multiplicities ({split.plus_multiplicity}, "
            f"{split.minus_multiplicity}) differ from q = {problem.q}")
    matrix = build_lopatinskii_matrix(problem, split)
    det = complex(np.linalg.det(matrix))
    row_scale = math.prod(max(np.max(np.abs(row)), 1e-300) for row in matrix)
    normalized = abs(det) / row_scale
    cond = float(np.linalg.cond(matrix)) if normalized > 0 else math.inf
    return CoveringReport(matrix=matrix, det=det, is_covering=normalized > tol,
                          condition_number=cond, normalized_det=normalized, tol=tol)


def check_interior_ellipticity(a_symbol: Mapping[tuple[int, ...], complex],
                               grid: np.ndarray, tol: float = 1e-10) -> bool:
    """Sampled non-vanishing of a homogeneous symbol on unit directions.

    ``a_symbol`` maps multi-indices to coefficients; ``grid`` has one
    unit direction per row (n >= 2 columns).  True iff |A(xi)| stays
    above tol times the coefficient norm at every sampled direction.
    This is a sampled check, not a certificate.
    """
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 2 or grid.shape[0] == 0 or grid.shape[1] < 2:
        raise ValueError("grid must be a nonempty (count, n) array with n >= 2")
    scale = math.sqrt(math.fsum(abs(c) ** 2 for c in a_symbol.values()))
    for xi in grid:
        value = 0.0 + 0.0j
        for mu, c in a_symbol.items():
            value += c * math.prod(x**e for x, e in zip(xi, mu))
        if abs(value) <= tol * scale:
            return False
    return True


def circle_directions(count: int = 4096) -> np.ndarray:
    """Uniform unit directions in the plane."""
    angles = 2.0 * np.pi * np.arange(count) / count
    return np.column_stack([np.cos(angles), np.sin(angles)])


def sphere_directions(n: int, count: int = 1024, seed: int = 0) -> np.ndarray:
    """Low-discrepancy unit directions in R^n (Halton + Gaussian map)."""
    from scipy.stats import norm, qmc

    sampler = qmc.Halton(d=n, scramble=True, seed=seed)
    gauss = norm.ppf(np.clip(sampler.random(count), 1e-12, 1 - 1e-12))
    return gauss / np.linalg.norm(gauss, axis=1, keepdims=True)


def check_lawruk_ellipticity(
    interior_symbol: Mapping[tuple[int, ...], complex],
    point_problems: Iterable[tuple[str, PointSymbolProblem]],
    grid: np.ndarray | None = None,
    tol: float = 1e-10,
) -> LawrukReport:
    """Aggregate conditions (i)+(ii)+(iii) over sampled directions.

    ``point_problems`` yields (direction label, frozen problem) pairs;
    in the plane the two orientations of the unit tangent suffice by
    homogeneity.  Failures become report entries, the first one with
    its witness direction.
    """
    if grid is None:
        grid = circle_directions()
    interior_ok = check_interior_ellipticity(interior_symbol, grid, tol)
    entries: list[dict] = []
    first_failure: dict | None = None
    if not interior_ok:
        first_failure = {"condition": "interior", "witness": "direction grid"}
    for label, problem in point_problems:
        entry: dict = {"tau": label}
        try:
            report = check_covering(problem, tol)
            entry["proper"] = True
            entry["is_covering"] = report.is_covering
            entry["normalized_det"] = report.normalized_det
            if not report.is_covering and first_failure is None:
                first_failure = {"condition": "covering", "witness": label}
        except EllipticityViolation as exc:
            entry["proper"] = False
            entry["is_covering"] = False
            entry["error"] = str(exc)
            if first_failure is None:
                first_failure = {"condition": "proper-ellipticity", "witness": label}
        entries.append(entry)
    ok = interior_ok and all(e.get("is_covering", False) for e in entries)
    return LawrukReport(is_elliptic=ok, interior_ok=interior_ok,
                        entries=tuple(entries), first_failure=first_failure)
