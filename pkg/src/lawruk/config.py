"""Config file parsing for the command-line frontend.

Problems are described in a single self-describing TOML document (the
grammar is spelled out in the README).  Two kinds exist:
``point-symbol`` freezes the principal symbols at one boundary point
and tangential direction, ``disk-problem`` describes the solvable model
on the unit disk.  Boundary operators are written as term lists
[nu_order, gamma_order, re, im] in the partial-derivative convention
(the quadruple means (re + i im) * d_nu^a d_G^b); mode sequences as
[k, re, im] triples.

Validation is strict: unknown keys are rejected and the structural
invariants of the target types are enforced at parse time, with the
offending key in the message.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass
from typing import Any

if sys.version_info >= (3, 11):
    import tomllib as _toml
else:
    import tomli as _toml

from .collarops import BoundaryOperator
from .disksolver import DiskProblem, RHSData, RhsEnvelope
from .ellipticity import PointSymbolProblem
from .hormander import HormanderSpec, ModeSequence
from .slowvar import LogPowerPhi

__all__ = ["ProblemConfig", "RunParams", "ConfigError", "parse_config", "serialize_config"]


class ConfigError(ValueError):
    """Syntax error, schema violation or invariant violation in a config."""


@dataclass(frozen=True)
class RunParams:
    """Numeric run parameters shared by the subcommands."""

    modes: int = 1024
    tol: float = 1e-8
    rank_tol: float = 1e-9
    det_floor: float = 1e-6
    trials: int = 500
    lam: float = 1.0
    level: int = 2
    seed: int = 0


@dataclass(frozen=True)
class ProblemConfig:
    """Validated contents of a config document."""

    kind: str
    spec: HormanderSpec
    run: RunParams
    point: PointSymbolProblem | None = None
    disk: DiskProblem | None = None
    rhs: RHSData | None = None
    envelope: RhsEnvelope | None = None


_RUN_KEYS = {
    "modes": int, "tol": float, "rank_tol": float, "det_floor": float,
    "trials": int, "lambda": float, "level": int, "seed": int,
}


def _require_keys(table: dict, allowed: set[str], where: str) -> None:
    unknown = set(table) - allowed
    if unknown:
        raise ConfigError(f"unknown key(s) {sorted(unknown)} in [{where}]")


def _number_list(value: Any, where: str) -> list[float]:
    if not isinstance(value, list) or not all(isinstance(x, (int, float)) for x in value):
        raise ConfigError(f"{where} must be a list of numbers")
    return [float(x) for x in value]


def _complex_pair(value: Any, where: str) -> complex:
    pair = _number_list(value, where)
    if len(pair) != 2:
        raise ConfigError(f"{where} must be a [re, im] pair")
    return complex(pair[0], pair[1])


def _operator(value: Any, where: str) -> BoundaryOperator:
    if not isinstance(value, list):
        raise ConfigError(f"{where} must be a list of [nu, gamma, re, im] terms")
    terms = []
    for i, term in enumerate(value):
        quad = _number_list(term, f"{where}[{i}]")
        if len(quad) != 4:
            raise ConfigError(f"{where}[{i}] must be [nu_order, gamma_order, re, im]")
        a, b = int(quad[0]), int(quad[1])
        if a != quad[0] or b != quad[1] or a < 0 or b < 0:
            raise ConfigError(f"{where}[{i}] orders must be nonnegative integers")
        terms.append((a, b, quad[2], quad[3]))
    return BoundaryOperator.from_terms(terms)


def _mode_sequence(value: Any, band: int, where: str) -> ModeSequence:
    if not isinstance(value, list):
        raise ConfigError(f"{where} must be a list of [k, re, im] triples")
    triples = []
    for i, item in enumerate(value):
        t = _number_list(item, f"{where}[{i}]")
        if len(t) != 3 or int(t[0]) != t[0]:
            raise ConfigError(f"{where}[{i}] must be [k, re, im] with integer k")
        triples.append((int(t[0]), t[1], t[2]))
    try:
        return ModeSequence.from_pairs(triples, band)
    except ValueError as exc:
        raise ConfigError(f"{where}: {exc}") from exc


def parse_config(text: str) -> ProblemConfig:
    """Parse and validate a config document.

    Raises ``ConfigError`` with the parser's line/column diagnostic on
    syntax errors, and with the offending key on schema or invariant
    violations.
    """
    try:
        doc = _toml.loads(text)
    except _toml.TOMLDecodeError as exc:
        raise ConfigError(f"syntax error: {exc}") from exc

    _require_keys(doc, {"kind", "spec", "run", "problem", "symbols", "rhs", "envelope"},
                  "top level")
    kind = doc.get("kind")
    if kind not in ("point-symbol", "disk-problem"):
        raise ConfigError("kind must be 'point-symbol' or 'disk-problem'")

    spec_table = doc.get("spec", {})
    _require_keys(spec_table, {"s", "phi"}, "spec")
    spec = HormanderSpec(
        s=float(spec_table.get("s", 4.0)),
        phi=LogPowerPhi(_number_list(spec_table.get("phi", []), "spec.phi")),
    )

    run_table = doc.get("run", {})
    _require_keys(run_table, set(_RUN_KEYS), "run")
    run_kwargs = {}
    for key, cast in _RUN_KEYS.items():
        if key in run_table:
            run_kwargs["lam" if key == "lambda" else key] = cast(run_table[key])
    run = RunParams(**run_kwargs)

    point = disk = rhs = envelope = None
    if kind == "point-symbol":
        if "symbols" not in doc:
            raise ConfigError("point-symbol configs need a [symbols] table")
        if "problem" in doc or "rhs" in doc:
            raise ConfigError("point-symbol configs take no [problem] or [rhs] tables")
        point = _parse_symbols(doc["symbols"])
    else:
        if "problem" not in doc:
            raise ConfigError("disk-problem configs need a [problem] table")
        if "symbols" in doc:
            raise ConfigError("disk-problem configs take no [symbols] table")
        disk = _parse_disk(doc["problem"], run.modes)
        if "rhs" in doc:
            rhs = _parse_rhs(doc["rhs"], disk)
    if "envelope" in doc:
        env_table = doc["envelope"]
        _require_keys(env_table, {"order", "phi"}, "envelope")
        if "order" not in env_table:
            raise ConfigError("[envelope] needs an 'order' value")
        envelope = RhsEnvelope(
            order=float(env_table["order"]),
            phi=LogPowerPhi(_number_list(env_table.get("phi", []), "envelope.phi")),
        )
    return ProblemConfig(kind=kind, spec=spec, run=run, point=point, disk=disk,
                         rhs=rhs, envelope=envelope)


def _parse_symbols(table: dict) -> PointSymbolProblem:
    _require_keys(table, {"q", "kappa", "a", "b", "c"}, "symbols")
    for key in ("q", "kappa", "a", "b", "c"):
        if key not in table:
            raise ConfigError(f"[symbols] needs '{key}'")
    a = [_complex_pair(x, f"symbols.a[{i}]") for i, x in enumerate(table["a"])]
    b = [[_complex_pair(x, f"symbols.b[{j}][{i}]") for i, x in enumerate(row)]
         for j, row in enumerate(table["b"])]
    c = [[_complex_pair(x, f"symbols.c[{j}][{i}]") for i, x in enumerate(row)]
         for j, row in enumerate(table["c"])]
    try:
        return PointSymbolProblem(a, b, c, q=int(table["q"]), kappa=int(table["kappa"]))
    except ValueError as exc:
        raise ConfigError(f"[symbols]: {exc}") from exc


def _parse_disk(table: dict, modes: int) -> DiskProblem:
    _require_keys(table, {"kappa", "m", "r", "B", "C"}, "problem")
    for key in ("kappa", "m", "r", "B", "C"):
        if key not in table:
            raise ConfigError(f"[problem] needs '{key}'")
    kappa = int(table["kappa"])
    B = tuple(_operator(row, f"problem.B[{j}]") for j, row in enumerate(table["B"]))
    C_rows = table["C"]
    if not isinstance(C_rows, list):
        raise ConfigError("problem.C must be a list of rows")
    C = tuple(tuple(_operator(op, f"problem.C[{j}][{k}]") for k, op in enumerate(row))
              for j, row in enumerate(C_rows))
    try:
        return DiskProblem(
            kappa=kappa, B=B, C=C,
            m_orders=tuple(int(m) for m in table["m"]),
            r_orders=tuple(int(r) for r in table["r"]),
            band_limit=modes,
        )
    except ValueError as exc:
        raise ConfigError(f"[problem]: {exc}") from exc


def _parse_rhs(table: dict, disk: DiskProblem) -> RHSData:
    _require_keys(table, {"f", "g"}, "rhs")
    f_terms = []
    for i, term in enumerate(table.get("f", [])):
        quad = _number_list(term, f"rhs.f[{i}]")
        if len(quad) != 4 or int(quad[0]) != quad[0] or int(quad[1]) != quad[1]:
            raise ConfigError(f"rhs.f[{i}] must be [k, j, re, im] with integer k, j")
        f_terms.append((int(quad[0]), int(quad[1]), complex(quad[2], quad[3])))
    g_rows = table.get("g", [])
    if len(g_rows) != disk.rows:
        raise ConfigError(f"rhs.g needs {disk.rows} rows; got {len(g_rows)}")
    g = tuple(_mode_sequence(row, disk.band_limit, f"rhs.g[{j}]")
              for j, row in enumerate(g_rows))
    try:
        return RHSData(f_terms, g)
    except ValueError as exc:
        raise ConfigError(f"[rhs]: {exc}") from exc


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def _emit(value: Any) -> str:
    if isinstance(value, str):
        return '"' + value.replace("\\", "\\\\").replace('"', '\\"') + '"'
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return repr(value)
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(_emit(v) for v in value) + "]"
    raise TypeError(f"cannot serialize {type(value)!r}")


def _seq_triples(seq: ModeSequence) -> list[list[float]]:
    return [[k, re, im] for k, re, im in seq.pairs()]


def serialize_config(cfg: ProblemConfig) -> str:
    """Emit a config document that parses back to an equal value."""
    lines = [f"kind = {_emit(cfg.kind)}", ""]
    lines += ["[spec]", f"s = {_emit(cfg.spec.s)}",
              f"phi = {_emit(list(cfg.spec.phi.exponents))}", ""]
    lines += ["[run]"]
    run = cfg.run
    for key in _RUN_KEYS:
        attr = "lam" if key == "lambda" else key
        lines.append(f"{key} = {_emit(getattr(run, attr))}")
    lines.append("")
    if cfg.point is not None:
        p = cfg.point
        lines += ["[symbols]", f"q = {_emit(p.q)}", f"kappa = {_emit(p.kappa)}",
                  f"a = {_emit([[z.real, z.imag] for z in p.a_poly])}",
                  f"b = {_emit([[[z.real, z.imag] for z in row] for row in p.b_polys])}",
                  f"c = {_emit([[[z.real, z.imag] for z in row] for row in p.c_values])}",
                  ""]
    if cfg.disk is not None:
        d = cfg.disk
        lines += ["[problem]", f"kappa = {_emit(d.kappa)}",
                  f"m = {_emit(list(d.m_orders))}", f"r = {_emit(list(d.r_orders))}",
                  f"B = {_emit([[list(t) for t in op.to_terms()] for op in d.B])}",
                  f"C = {_emit([[[list(t) for t in op.to_terms()] for op in row] for row in d.C])}",
                  ""]
    if cfg.rhs is not None:
        r = cfg.rhs
        lines += ["[rhs]",
                  f"f = {_emit([[k, j, c.real, c.imag] for k, j, c in r.f_terms])}",
                  f"g = {_emit([_seq_triples(seq) for seq in r.g])}", ""]
    if cfg.envelope is not None:
        lines += ["[envelope]", f"order = {_emit(cfg.envelope.order)}",
                  f"phi = {_emit(list(cfg.envelope.phi.exponents))}", ""]
    return "\n".join(lines)
