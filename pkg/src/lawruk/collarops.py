"""Operator algebra near the circle boundary of the unit disk.

Two operator carriers live here.  ``InteriorCollarOperator`` is a
noncommutative polynomial in rho, d_rho, d_theta in polar coordinates,
kept in the normal form  rho^p d_rho^a d_theta^b  (all rho powers moved
left of all derivatives via the Leibniz relation
d_rho rho^p = rho^p d_rho + p rho^(p-1)).  ``BoundaryOperator`` is a
constant-coefficient polynomial in the normal and tangential
derivatives on the circle, stored internally in terms of
D_nu = i d_nu and D_G = i d_G so that tangential formal adjoints reduce
to coefficient conjugation; the partial-derivative rendering
(d_nu = -d/d rho on the unit circle, d_G = d/d theta) is produced only
on demand.  Confining the d/D conversion to two functions is what keeps
the i-power bookkeeping honest.

On top of the algebra the module builds, for the interior operator
fixed to the disk Laplacian (q = 1), the integration-by-parts tableau
(K_k, R_jk, Q_jk, adjoint C entries) of the special Green formula and
emits the formally adjoint problem.  Interior operators other than the
disk Laplacian are rejected rather than guessed: the general K_k
construction needs a full variable-coefficient collar calculus that is
out of scope here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

__all__ = [
    "InteriorCollarOperator",
    "BoundaryOperator",
    "GreenTableau",
    "AdjointProblem",
    "AdjointRow",
    "DISK_LAPLACIAN",
    "D_NU_INTERIOR",
    "OrderViolationError",
    "UnsupportedOperatorError",
    "compose",
    "restrict_to_boundary",
    "nu_decompose",
    "formal_adjoint_tangential",
    "build_green_tableau",
    "adjoint_problem",
]


class OrderViolationError(ValueError):
    """An operator exceeds the order bound a construction requires."""


class UnsupportedOperatorError(ValueError):
    """Interior operator outside the hardcoded disk-Laplacian case."""


_I_POW = (1 + 0j, 1j, -1 + 0j, -1j)      # i**a for integer a
_MI_POW = (1 + 0j, -1j, -1 + 0j, 1j)     # (-i)**a


def _ipow(a: int) -> complex:
    return _I_POW[a % 4]


def _mipow(a: int) -> complex:
    return _MI_POW[a % 4]


def _falling(x: float, a: int) -> float:
    """x (x-1) ... (x-a+1); empty product for a = 0."""
    out = 1.0
    for i in range(a):
        out *= x - i
    return out


# ---------------------------------------------------------------------------
# interior collar operators
# ---------------------------------------------------------------------------

class InteriorCollarOperator:
    """Noncommutative polynomial sum_c c * rho^p d_rho^a d_theta^b.

    Terms are a mapping (p, a, b) -> complex coefficient in normal form;
    the sorted key order canonicalizes equality.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[tuple[int, int, int], complex]):
        clean = {}
        for (p, a, b), c in terms.items():
            if a < 0 or b < 0:
                raise ValueError(f"derivative orders must be nonnegative: {(p, a, b)}")
            c = complex(c)
            if c != 0:
                clean[(int(p), int(a), int(b))] = c
        self.terms = clean

    def __eq__(self, other) -> bool:
        return isinstance(other, InteriorCollarOperator) and self.terms == other.terms

    def __hash__(self):
        return hash(tuple(sorted(self.terms.items(), key=lambda kv: kv[0])))

    def __add__(self, other: "InteriorCollarOperator") -> "InteriorCollarOperator":
        out = dict(self.terms)
        for key, c in other.terms.items():
            out[key] = out.get(key, 0.0 + 0.0j) + c
        return InteriorCollarOperator(out)

    def __rmul__(self, scalar: complex) -> "InteriorCollarOperator":
        return InteriorCollarOperator({k: scalar * c for k, c in self.terms.items()})

    def __matmul__(self, other: "InteriorCollarOperator") -> "InteriorCollarOperator":
        return compose(self, other)

    def apply_to_monomial(self, sigma: float, k: int) -> dict[float, complex]:
        """Action on rho^sigma e^{ik theta}: map new radial degree -> coeff.

        Term rho^p d_rho^a d_theta^b sends the monomial to
        sigma_falling(a) * (ik)^b * rho^(sigma - a + p) e^{ik theta}.
        """
        out: dict[float, complex] = {}
        for (p, a, b), c in self.terms.items():
            amp = c * _falling(sigma, a) * (1j * k) ** b
            if amp == 0:
                continue
            deg = sigma - a + p
            out[deg] = out.get(deg, 0.0 + 0.0j) + amp
        return {d: c for d, c in out.items() if c != 0}

    def __repr__(self):
        items = ", ".join(f"{key}: {c}" for key, c in sorted(self.terms.items()))
        return f"InteriorCollarOperator({{{items}}})"


def compose(left: InteriorCollarOperator,
            right: InteriorCollarOperator) -> InteriorCollarOperator:
    """Noncommutative product, result in normal form.

    d_theta commutes with everything here; d_rho^a is moved across
    rho^p by  d_rho^a rho^p = sum_i C(a,i) p_falling(i) rho^(p-i) d_rho^(a-i).
    """
    out: dict[tuple[int, int, int], complex] = {}
    for (p1, a1, b1), c1 in left.terms.items():
        for (p2, a2, b2), c2 in right.terms.items():
            for i in range(a1 + 1):
                coeff = c1 * c2 * math.comb(a1, i) * _falling(float(p2), i)
                if coeff == 0:
                    continue
                key = (p1 + p2 - i, a1 - i + a2, b1 + b2)
                out[key] = out.get(key, 0.0 + 0.0j) + coeff
    return InteriorCollarOperator(out)


#: Laplacian in polar coordinates: d_rho^2 + rho^-1 d_rho + rho^-2 d_theta^2.
DISK_LAPLACIAN = InteriorCollarOperator({(0, 2, 0): 1.0, (-1, 1, 0): 1.0, (-2, 0, 2): 1.0})

#: D_nu = i d_nu = -i d_rho as an operator near the boundary.
D_NU_INTERIOR = InteriorCollarOperator({(0, 1, 0): -1j})

_IDENTITY = InteriorCollarOperator({(0, 0, 0): 1.0})


# ---------------------------------------------------------------------------
# boundary operators
# ---------------------------------------------------------------------------

class BoundaryOperator:
    """Constant-coefficient polynomial in D_nu, D_G on the circle.

    ``coeffs`` maps (nu_order, tangential_order) to the coefficient of
    D_nu^a D_G^b.  Constructors and renderers that speak the
    partial-derivative language (d_nu^a d_G^b) convert through
    d_nu^a d_G^b = (-i)^(a+b) D_nu^a D_G^b.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Mapping[tuple[int, int], complex]):
        clean = {}
        for (a, b), c in coeffs.items():
            if a < 0 or b < 0:
                raise ValueError(f"derivative orders must be nonnegative: {(a, b)}")
            c = complex(c)
            if c != 0:
                clean[(int(a), int(b))] = c
        self.coeffs = clean

    @classmethod
    def from_partial(cls, terms: Mapping[tuple[int, int], complex]) -> "BoundaryOperator":
        """Build from coefficients of d_nu^a d_G^b."""
        return cls({(a, b): complex(c) * _mipow(a + b) for (a, b), c in terms.items()})

    @classmethod
    def zero(cls) -> "BoundaryOperator":
        return cls({})

    def partial_form(self) -> dict[tuple[int, int], complex]:
        """Coefficients of d_nu^a d_G^b."""
        return {(a, b): c * _ipow(a + b) for (a, b), c in self.coeffs.items()}

    @property
    def order(self) -> int:
        """max(a + b) over the support; -1 for the zero operator."""
        return max((a + b for a, b in self.coeffs), default=-1)

    @property
    def nu_order(self) -> int:
        return max((a for a, _ in self.coeffs), default=-1)

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def is_tangential(self) -> bool:
        return all(a == 0 for a, _ in self.coeffs)

    def __eq__(self, other) -> bool:
        return isinstance(other, BoundaryOperator) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(tuple(sorted(self.coeffs.items(), key=lambda kv: kv[0])))

    def __add__(self, other: "BoundaryOperator") -> "BoundaryOperator":
        out = dict(self.coeffs)
        for key, c in other.coeffs.items():
            out[key] = out.get(key, 0.0 + 0.0j) + c
        return BoundaryOperator(out)

    def __sub__(self, other: "BoundaryOperator") -> "BoundaryOperator":
        return self + (-1.0) * other

    def __rmul__(self, scalar: complex) -> "BoundaryOperator":
        return BoundaryOperator({k: scalar * c for k, c in self.coeffs.items()})

    def __mul__(self, other: "BoundaryOperator") -> "BoundaryOperator":
        """Composition; commutative since all coefficients are constant,
        and nu orders add formally."""
        out: dict[tuple[int, int], complex] = {}
        for (a1, b1), c1 in self.coeffs.items():
            for (a2, b2), c2 in other.coeffs.items():
                key = (a1 + a2, b1 + b2)
                out[key] = out.get(key, 0.0 + 0.0j) + c1 * c2
        return BoundaryOperator(out)

    # -- actions on disk / circle Fourier data ------------------------------

    def act_on_disk_mode(self, sigma: float, k: int) -> complex:
        """Boundary value of the operator applied to rho^sigma e^{ik theta}.

        D_nu^a contributes (-i)^a sigma(sigma-1)...(sigma-a+1) (the
        radial falling factorial at rho = 1, with d_nu = -d_rho), and
        D_G^b contributes (-k)^b.
        """
        total = 0.0 + 0.0j
        for (a, b), c in self.coeffs.items():
            total += c * _mipow(a) * _falling(sigma, a) * (-float(k)) ** b
        return total

    def act_on_boundary_mode(self, k: int) -> complex:
        """Multiplier of e^{ik theta} under a tangential operator."""
        if not self.is_tangential:
            raise OrderViolationError(
                "operator has normal derivatives; it cannot act on boundary data")
        total = 0.0 + 0.0j
        for (_a, b), c in self.coeffs.items():
            total += c * (-float(k)) ** b
        return total

    def principal_symbol(self, declared_order: int, tangent: float) -> list[complex]:
        """Coefficients (ascending in zeta) of the order-``declared_order``
        part frozen at the signed tangential covector ``tangent``.

        D_nu maps to zeta and D_G to ``tangent``.  Returns the zero
        polynomial when no term has total order ``declared_order``.
        """
        coeffs = [0.0 + 0.0j] * (declared_order + 1)
        for (a, b), c in self.coeffs.items():
            if a + b == declared_order:
                coeffs[a] += c * tangent**b
        return coeffs

    # -- serialization -------------------------------------------------------

    def to_terms(self) -> list[tuple[int, int, float, float]]:
        """(nu_order, tangential_order, re, im) quadruples in d-form."""
        pf = self.partial_form()
        return [(a, b, pf[(a, b)].real, pf[(a, b)].imag) for a, b in sorted(pf)]

    @classmethod
    def from_terms(cls, terms: Iterable[Sequence[float]]) -> "BoundaryOperator":
        partial: dict[tuple[int, int], complex] = {}
        for a, b, re, im in terms:
            key = (int(a), int(b))
            partial[key] = partial.get(key, 0.0 + 0.0j) + complex(re, im)
        return cls.from_partial(partial)

    def render(self) -> str:
        """Human-readable d-form, e.g. '-i + 2 ∂_ν ∂_Γ^2'."""
        pf = self.partial_form()
        if not pf:
            return "0"
        parts = []
        for a, b in sorted(pf, key=lambda ab: (ab[0] + ab[1], ab[0])):
            sign, body = _format_term(pf[(a, b)], _basis_string(a, b))
            parts.append((sign, body))
        first_sign, first_body = parts[0]
        text = ("-" if first_sign == "-" else "") + first_body
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text

    def __repr__(self):
        return f"BoundaryOperator({self.render()!r})"


IDENTITY_BOUNDARY = BoundaryOperator({(0, 0): 1.0})


def _basis_string(a: int, b: int) -> str:
    bits = []
    if a:
        bits.append("∂_ν" + (f"^{a}" if a > 1 else ""))
    if b:
        bits.append("∂_Γ" + (f"^{b}" if b > 1 else ""))
    return " ".join(bits)


def _format_term(coeff: complex, basis: str) -> tuple[str, str]:
    """(sign, body) with magnitude-1 real/imaginary units elided."""
    re, im = coeff.real, coeff.imag
    if im == 0:
        sign = "-" if re < 0 else "+"
        mag = abs(re)
        num = "" if mag == 1 and basis else _format_float(mag)
    elif re == 0:
        sign = "-" if im < 0 else "+"
        mag = abs(im)
        num = "i" if mag == 1 else f"{_format_float(mag)}i"
    else:
        sign = "+"
        num = f"({_format_float(re)}{'+' if im >= 0 else '-'}{_format_float(abs(im))}i)"
    body = f"{num} {basis}".strip() if basis else (num or "1")
    return sign, body


def _format_float(x: float) -> str:
    return f"{int(x)}" if float(x).is_integer() else f"{x:g}"


def restrict_to_boundary(op: InteriorCollarOperator) -> BoundaryOperator:
    """Trace of a collar operator on the unit circle.

    Substitutes rho = 1, d_rho = -d_nu, d_theta = d_G; valid because
    radii are normal geodesics of the circle and restriction to rho = 1
    commutes with d_theta.
    """
    partial: dict[tuple[int, int], complex] = {}
    for (_p, a, b), c in op.terms.items():
        key = (a, b)
        partial[key] = partial.get(key, 0.0 + 0.0j) + c * (-1.0) ** a
    return BoundaryOperator.from_partial(partial)


def nu_decompose(op: BoundaryOperator, m: int) -> list[BoundaryOperator]:
    """Tangential coefficients (Q_1, ..., Q_{m+1}) of
    op = sum_k Q_k(D_G) D_nu^(k-1); requires ord(op) <= m."""
    if op.order > m:
        raise OrderViolationError(
            f"operator of order {op.order} exceeds the stated bound {m}")
    rows: list[dict[tuple[int, int], complex]] = [{} for _ in range(m + 1)]
    for (a, b), c in op.coeffs.items():
        rows[a][(0, b)] = c
    return [BoundaryOperator(r) for r in rows]


def formal_adjoint_tangential(op: BoundaryOperator) -> BoundaryOperator:
    """Formal adjoint on the circle w.r.t. the L2(Gamma) pairing.

    In partial form (c d_G^b)+ = conj(c) (-d_G)^b; in the internal
    D_G form this is plain coefficient conjugation, which is why the
    D-form is the canonical one.
    """
    if not op.is_tangential:
        raise OrderViolationError("formal adjoint implemented for tangential operators only")
    return BoundaryOperator({key: c.conjugate() for key, c in op.coeffs.items()})


# ---------------------------------------------------------------------------
# Green tableau and the formally adjoint problem
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GreenTableau:
    """Integration-by-parts tableau of the special Green formula.

    K[k-1] is the boundary operator paired with D_nu^(k-1) u coming
    from the classical Green identity of the interior operator;
    R[j-1][k-1] and Q[j-1][k-1] are the tangential coefficients of the
    normal-order decompositions of D_nu^(j-1) A and B_j; Cplus[j-1][k-1]
    are the tangential adjoints of the C entries.
    """

    q: int
    kappa: int
    m: int
    m_orders: tuple[int, ...]
    r_orders: tuple[int, ...]
    K: tuple[BoundaryOperator, ...]
    R: tuple[tuple[BoundaryOperator, ...], ...]
    Q: tuple[tuple[BoundaryOperator, ...], ...]
    Cplus: tuple[tuple[BoundaryOperator, ...], ...]

    def validate(self) -> None:
        """Order-bound invariants of the tableau (zero entries always pass)."""
        for k1, op in enumerate(self.K, start=1):
            if not op.is_zero and op.order > 2 * self.q - k1:
                raise OrderViolationError(f"ord K_{k1} = {op.order} > {2*self.q - k1}")
        for j1, row in enumerate(self.R, start=1):
            for k1, op in enumerate(row, start=1):
                if not op.is_zero and op.order > 2 * self.q + j1 - k1:
                    raise OrderViolationError(
                        f"ord R_{j1},{k1} = {op.order} > {2*self.q + j1 - k1}")
        for j1, row in enumerate(self.Q, start=1):
            bound_m = self.m_orders[j1 - 1]
            for k1, op in enumerate(row, start=1):
                if not op.is_zero and op.order > bound_m - k1 + 1:
                    raise OrderViolationError(
                        f"ord Q_{j1},{k1} = {op.order} > {bound_m - k1 + 1}")


def build_green_tableau(problem) -> GreenTableau:
    """Tableau of the special Green formula for a disk problem.

    ``problem`` provides ``interior`` (must be the disk Laplacian),
    ``B`` (q + kappa boundary operators), ``C`` ((q+kappa) x kappa
    tangential operators), ``m_orders``, ``r_orders`` and ``kappa``.

    For the Laplacian the classical second Green identity
    (Lap u, w) - (u, Lap w) = (u, d_nu w) - (d_nu u, w) pins
    K_1 = d_nu, K_2 = -i (in the D_nu pairing template) and K_k = 0
    for k >= 3.
    """
    q = 1
    if problem.interior != DISK_LAPLACIAN:
        raise UnsupportedOperatorError(
            "the Green tableau is implemented for the disk Laplacian only")
    kappa = problem.kappa
    m_orders = tuple(problem.m_orders)
    r_orders = tuple(problem.r_orders)
    m = max(m_orders)
    if m < 2 * q:
        raise OrderViolationError(
            f"requires max boundary order m >= 2q = {2*q}; got m = {m}")

    zero = BoundaryOperator.zero()
    K = [BoundaryOperator.from_partial({(1, 0): 1.0}),
         BoundaryOperator({(0, 0): -1j})] + [zero] * (m - 1)

    R_rows = []
    dnu_power = _IDENTITY
    for _j in range(1, m - 2 * q + 2):
        R_rows.append(tuple(nu_decompose(
            restrict_to_boundary(compose(dnu_power, DISK_LAPLACIAN)), m)))
        dnu_power = compose(D_NU_INTERIOR, dnu_power)

    Q_rows = [tuple(nu_decompose(bj, m)) for bj in problem.B]
    Cplus_rows = [tuple(formal_adjoint_tangential(cjk) for cjk in row)
                  for row in problem.C]

    tableau = GreenTableau(q=q, kappa=kappa, m=m, m_orders=m_orders,
                           r_orders=r_orders, K=tuple(K), R=tuple(R_rows),
                           Q=tuple(Q_rows), Cplus=tuple(Cplus_rows))
    tableau.validate()
    return tableau


@dataclass(frozen=True)
class AdjointRow:
    """One boundary equation: sum of (unknown label, operator) = rhs label."""

    terms: tuple[tuple[str, BoundaryOperator], ...]
    rhs_label: str

    def render(self) -> str:
        parts = []
        for label, op in self.terms:
            if op.is_zero:
                continue
            for (a, b), coeff in sorted(op.partial_form().items(),
                                        key=lambda kv: (kv[0][0] + kv[0][1], kv[0][0])):
                sign, body = _format_term(coeff, _basis_string(a, b))
                parts.append((sign, f"{body} {label}".strip() if body != "1" else label))
        if not parts:
            return f"0 = {self.rhs_label}"
        first_sign, first_body = parts[0]
        text = ("-" if first_sign == "-" else "") + first_body
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return f"{text} = {self.rhs_label}"


@dataclass(frozen=True)
class AdjointProblem:
    """The formally adjoint problem emitted by the Green tableau.

    Unknowns: omega in the disk, w_1..w_{m-2q+1} and h_1..h_{q+kappa}
    on the circle; right-hand sides eta and psi_1..psi_{m+1+kappa}.
    """

    interior: InteriorCollarOperator
    boundary_rows: tuple[AdjointRow, ...]
    tangential_rows: tuple[AdjointRow, ...]
    unknown_labels: tuple[str, ...]
    rhs_labels: tuple[str, ...]

    @property
    def rows(self) -> tuple[AdjointRow, ...]:
        return self.boundary_rows + self.tangential_rows

    def render_text(self) -> str:
        lines = ["Δ ω = η"]
        lines += [row.render() for row in self.rows]
        return "\n".join(lines)

    def to_json_dict(self) -> dict:
        return {
            "interior": "laplacian",
            "unknowns": list(self.unknown_labels),
            "equations": [
                {
                    "rhs": row.rhs_label,
                    "rendered": row.render(),
                    "terms": [
                        {"unknown": label, "operator": op.to_terms()}
                        for label, op in row.terms if not op.is_zero
                    ],
                }
                for row in self.rows
            ],
        }


def adjoint_problem(tableau: GreenTableau) -> AdjointProblem:
    """Formally adjoint problem read off the Green tableau.

    Boundary rows (k = 1..m+1):
        K_k omega + sum_j R+_jk w_j + sum_j Q+_jk h_j = psi_k,
    tangential rows (k = 1..kappa):
        sum_j C+_jk h_j = psi_{m+1+k}.
    The interior operator stays the Laplacian (formally self-adjoint).
    """
    m, kappa = tableau.m, tableau.kappa
    n_w = m - 2 * tableau.q + 1
    w_labels = [f"w_{j}" for j in range(1, n_w + 1)]
    h_labels = [f"h_{j}" for j in range(1, tableau.q + kappa + 1)]

    boundary_rows = []
    for k1 in range(1, m + 2):
        terms = [("ω", tableau.K[k1 - 1])]
        terms += [(w_labels[j], formal_adjoint_tangential(tableau.R[j][k1 - 1]))
                  for j in range(n_w)]
        terms += [(h_labels[j], formal_adjoint_tangential(tableau.Q[j][k1 - 1]))
                  for j in range(tableau.q + kappa)]
        boundary_rows.append(AdjointRow(tuple(terms), f"ψ_{k1}"))

    tangential_rows = []
    for k1 in range(1, kappa + 1):
        terms = [(h_labels[j], tableau.Cplus[j][k1 - 1])
                 for j in range(tableau.q + kappa)]
        tangential_rows.append(AdjointRow(tuple(terms), f"ψ_{m + 1 + k1}"))

    return AdjointProblem(
        interior=DISK_LAPLACIAN,
        boundary_rows=tuple(boundary_rows),
        tangential_rows=tuple(tangential_rows),
        unknown_labels=("ω", *w_labels, *h_labels),
        rhs_labels=("η", *(f"ψ_{k}" for k in range(1, m + 1 + kappa + 1))),
    )
