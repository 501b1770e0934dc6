"""Command-line frontend.

Each subcommand maps one-to-one onto a library operation, prints a
human summary and, with ``--json PATH``, writes a versioned JSON
report.  Exit codes: 0 when the computed verdict is positive, 2 when
it is negative, 1 on errors (bad config, unsupported input).

The frontend also performs the symbol freezing that turns a disk
problem into point-symbol data: by homogeneity it suffices to freeze
at the two orientations of the unit tangent covector, with the
interior symbol of the Laplacian frozen to zeta^2 + |tau|^2.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

from . import disksolver
from .collarops import adjoint_problem, build_green_tableau
from .config import ConfigError, ProblemConfig, parse_config
from .disksolver import DiskProblem, UnsolvableError
from .ellipticity import (EllipticityViolation, PointSymbolProblem, check_covering,
                          check_lawruk_ellipticity)
from .hormander import HormanderSpec
from .slowvar import (LogPowerPhi, embedding_integral_is_finite,
                      embedding_integral_partial)

__all__ = ["main", "freeze_point_symbols"]

SCHEMA_VERSION = 1


def freeze_point_symbols(problem: DiskProblem, orientation: int = 1,
                         magnitude: float = 1.0) -> PointSymbolProblem:
    """Principal symbols of a disk problem frozen at one tangent direction.

    The tangential covector is ``orientation * magnitude`` in the signed
    arc-length coordinate; the normal-direction symbol variable is zeta.
    Declared orders decide which entries survive: a boundary or
    tangential operator whose actual order falls short of its declared
    one freezes to zero.
    """
    if orientation not in (1, -1):
        raise ValueError("orientation must be +1 or -1")
    t = orientation * magnitude
    a_poly = [magnitude**2, 0.0, 1.0]
    b_polys = [op.principal_symbol(mj, t)
               for op, mj in zip(problem.B, problem.m_orders)]
    c_values = []
    for j, row in enumerate(problem.C):
        out_row = []
        for k, op in enumerate(row):
            declared = problem.m_orders[j] + problem.r_orders[k]
            out_row.append(op.principal_symbol(declared, t)[0] if declared >= 0 else 0.0)
        c_values.append(out_row)
    return PointSymbolProblem(a_poly, b_polys, c_values, q=1, kappa=problem.kappa)


# ---------------------------------------------------------------------------
# subcommand implementations: each returns (exit code, lines, payload)
# ---------------------------------------------------------------------------

def _cmd_check_ellipticity(cfg: ProblemConfig):
    tol = cfg.run.tol
    if cfg.kind == "point-symbol":
        try:
            report = check_covering(cfg.point, tol=tol)
        except EllipticityViolation as exc:
            return 2, [f"not elliptic (Lawruk): {exc}"], {
                "verdict": False, "reason": str(exc)}
        lines = []
        verdict = report.is_covering
        if verdict:
            lines.append("elliptic (Lawruk)")
        else:
            lines.append("not elliptic (Lawruk): covering determinant vanishes")
        lines.append(f"normalized covering determinant: {report.normalized_det:.6e}")
        payload = {"verdict": verdict,
                   "det": [report.det.real, report.det.imag],
                   "normalizedDet": report.normalized_det,
                   "conditionNumber": report.condition_number}
        return (0 if verdict else 2), lines, payload

    problem = cfg.disk
    interior = {(2, 0): 1.0 + 0j, (0, 2): 1.0 + 0j}
    frozen = [(label, freeze_point_symbols(problem, orientation))
              for label, orientation in (("tau=+1", 1), ("tau=-1", -1))]
    report = check_lawruk_ellipticity(interior, frozen, tol=tol)
    lines = ["elliptic (Lawruk)" if report.is_elliptic
             else f"not elliptic (Lawruk): first failure {report.first_failure}"]
    for entry in report.entries:
        lines.append(f"  {entry['tau']}: proper={entry.get('proper')} "
                     f"covering={entry.get('is_covering')}")
    payload = {"verdict": report.is_elliptic, "interiorOk": report.interior_ok,
               "entries": list(report.entries),
               "firstFailure": report.first_failure}
    return (0 if report.is_elliptic else 2), lines, payload


def _cmd_adjoint(cfg: ProblemConfig):
    _need_disk(cfg)
    tableau = build_green_tableau(cfg.disk)
    adjoint = adjoint_problem(tableau)
    lines = ["formally adjoint problem:"] + adjoint.render_text().splitlines()
    return 0, lines, {"verdict": True, "adjoint": adjoint.to_json_dict()}


def _cmd_solve(cfg: ProblemConfig):
    _need_disk(cfg)
    if cfg.rhs is None:
        raise ConfigError("solve needs an [rhs] table")
    try:
        solution = disksolver.solve(cfg.disk, cfg.rhs, tol=cfg.run.tol,
                                    rank_tol=cfg.run.rank_tol)
    except UnsolvableError as exc:
        lines = ["unsolvable: rhs violates compatibility conditions"]
        payload_violations = []
        for v in exc.violations:
            lines.append(f"  mode {v.k}: equation(s) {list(v.dominant_rows)}, "
                         f"residual {v.residual:.3e}")
            payload_violations.append({
                "k": v.k, "rows": list(v.dominant_rows),
                "pairings": [[p.real, p.imag] for _y, p in v.pairings],
            })
        return 2, lines, {"verdict": False, "violations": payload_violations}
    s, phi = cfg.spec.s, cfg.spec.phi
    d = disksolver.dnorm(cfg.disk, solution, s, phi, enforce_order=False)
    e = disksolver.enorm(cfg.disk, cfg.rhs, s, phi)
    lines = [
        "solved",
        f"harmonic modes: {len(solution.harmonic.coefficients)}, "
        f"radial profiles: {len(solution.particular)}",
        f"boundary residual: {solution.boundary_residual:.3e}",
        f"dnorm(solution; s={s}, phi={list(phi.exponents)}) = {d:.9e}",
        f"enorm(rhs) = {e:.9e}",
    ]
    payload = {
        "verdict": True,
        "harmonic": [[k, c.real, c.imag] for k, c in sorted(solution.harmonic.coefficients.items())],
        "profiles": [[k, sigma, amp.real, amp.imag] for k, sigma, amp in solution.particular],
        "v": [[[k, c.real, c.imag] for k, c in sorted(seq.coefficients.items())]
              for seq in solution.v],
        "boundaryResidual": solution.boundary_residual,
        "dnorm": d, "enorm": e,
    }
    return 0, lines, payload


def _cmd_fredholm(cfg: ProblemConfig):
    _need_disk(cfg)
    report = disksolver.fredholm_report(cfg.disk, K=cfg.run.modes,
                                        rank_tol=cfg.run.rank_tol,
                                        det_floor=cfg.run.det_floor)
    lines = [f"dimN={report.dimN} dimNstar={report.dimNstar} index={report.index}"]
    if report.flags:
        lines.append(f"flags: {', '.join(report.flags)}")
    kernel_modes = sorted({k for k, _ in report.kernel_basis})
    if kernel_modes:
        lines.append(f"kernel modes: {kernel_modes}")
    verdict = not report.flags
    return (0 if verdict else 2), lines, {"verdict": verdict, **report.to_json_dict()}


def _cmd_apriori(cfg: ProblemConfig):
    _need_disk(cfg)
    constant = disksolver.apriori_probe(cfg.disk, cfg.spec.s, cfg.spec.phi,
                                        cfg.run.lam, cfg.run.trials,
                                        K=cfg.run.modes, seed=cfg.run.seed)
    verdict = constant > 0 and constant < float("inf")
    lines = [f"empirical a priori constant: {constant:.6f} "
             f"(s={cfg.spec.s}, lambda={cfg.run.lam}, trials={cfg.run.trials}, "
             f"K={cfg.run.modes})"]
    return (0 if verdict else 2), lines, {"verdict": verdict, "constant": constant}


def _cmd_regularity(cfg: ProblemConfig):
    _need_disk(cfg)
    rhs = cfg.rhs
    if rhs is None:
        rhs = disksolver.borderline_rhs(cfg.disk, cfg.spec.s, cfg.spec.phi,
                                        K=cfg.run.modes)
    verdict = disksolver.regularity_check(cfg.disk, rhs, cfg.spec.s, cfg.spec.phi)
    lines = [f"regularity envelope {'matches' if verdict.ok else 'MISMATCH'} "
             f"(tolerance {verdict.tol} on exponents)"]
    for name in sorted(verdict.fitted):
        lines.append(f"  {name}: fitted {verdict.fitted[name]:+.4f}, "
                     f"predicted {verdict.predicted[name]:+.4f}, "
                     f"phi-factor spread {verdict.phi_factor_spread[name]:.3f}")
    payload = {"verdict": verdict.ok, "fitted": verdict.fitted,
               "predicted": verdict.predicted, "deviations": verdict.deviations,
               "phiFactorSpread": verdict.phi_factor_spread}
    return (0 if verdict.ok else 2), lines, payload


def _cmd_smoothness(cfg: ProblemConfig):
    _need_disk(cfg)
    data = cfg.envelope if cfg.envelope is not None else cfg.rhs
    if data is None:
        raise ConfigError("smoothness needs an [envelope] or [rhs] table")
    verdict = disksolver.classify_smoothness(cfg.disk, data, cfg.run.level,
                                             cfg.spec.phi)
    lines = [f"continuity at derivative order l={cfg.run.level}: "
             f"{'holds' if verdict.ok else 'not established'}"]
    for comp in verdict.components:
        lines.append(f"  {comp.component}: C^{comp.level} "
                     f"{'yes' if comp.ok else 'no'} [{comp.route}] "
                     f"(needs data order {comp.required_order:g}) - {comp.reason}")
    lines.append(f"classical solution: {'yes' if verdict.is_classical else 'not established'}")
    for comp in verdict.classical:
        lines.append(f"  classical {comp.component}: C^{comp.level} "
                     f"{'yes' if comp.ok else 'no'} [{comp.route}]")

    def comp_dict(c):
        return {"component": c.component, "level": c.level,
                "requiredOrder": c.required_order, "ok": c.ok,
                "route": c.route, "reason": c.reason, "evidence": c.evidence}

    payload = {"verdict": verdict.ok,
               "components": [comp_dict(c) for c in verdict.components],
               "classical": [comp_dict(c) for c in verdict.classical],
               "isClassical": verdict.is_classical}
    return (0 if verdict.ok else 2), lines, payload


def _cmd_embedding(cfg: ProblemConfig):
    phi = cfg.spec.phi
    finite = embedding_integral_is_finite(phi)
    partial_30 = embedding_integral_partial(phi, 1e30)
    partial_60 = embedding_integral_partial(phi, 1e60)
    growth = (partial_60 - partial_30) / partial_30 if partial_30 > 0 else float("inf")
    lines = [
        f"phi exponents: {list(phi.exponents)}",
        f"embedding integral finite: {'yes' if finite else 'no'}",
        f"partial value at 1e30: {partial_30:.9f}",
        f"partial value at 1e60: {partial_60:.9f} (growth {100*growth:.3f}%)",
    ]
    payload = {"verdict": finite, "finite": finite,
               "partial1e30": partial_30, "partial1e60": partial_60,
               "relativeGrowth": growth}
    return (0 if finite else 2), lines, payload


_COMMANDS = {
    "check-ellipticity": _cmd_check_ellipticity,
    "adjoint": _cmd_adjoint,
    "solve": _cmd_solve,
    "fredholm": _cmd_fredholm,
    "apriori": _cmd_apriori,
    "regularity": _cmd_regularity,
    "smoothness": _cmd_smoothness,
    "embedding": _cmd_embedding,
}


def _need_disk(cfg: ProblemConfig) -> None:
    if cfg.disk is None:
        raise ConfigError("this command needs a disk-problem config")


def _parse_phi_list(text: str) -> LogPowerPhi:
    text = text.strip()
    if not text:
        return LogPowerPhi()
    try:
        return LogPowerPhi([float(x) for x in text.split(",")])
    except ValueError as exc:
        raise ConfigError(f"--phi expects comma-separated numbers: {exc}") from exc


def _apply_overrides(cfg: ProblemConfig, args: argparse.Namespace) -> ProblemConfig:
    spec = cfg.spec
    if args.s is not None:
        spec = HormanderSpec(s=args.s, phi=spec.phi)
    if args.phi is not None:
        spec = HormanderSpec(s=spec.s, phi=_parse_phi_list(args.phi))
    run = cfg.run
    for attr, value in (("modes", args.modes), ("tol", args.tol),
                        ("trials", args.trials), ("lam", args.lam),
                        ("level", args.level)):
        if value is not None:
            run = replace(run, **{attr: value})
    disk = cfg.disk
    if disk is not None and args.modes is not None:
        disk = replace(disk, band_limit=args.modes)
    return replace(cfg, spec=spec, run=run, disk=disk)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lawruk",
        description="Ellipticity checks, adjoint problems and per-mode "
                    "verification on the unit disk model.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("config", type=Path, help="path to a config file")
        p.add_argument("--json", type=Path, default=None,
                       help="write the JSON report to this path")
        p.add_argument("--modes", type=int, default=None, help="band limit K")
        p.add_argument("--tol", type=float, default=None, help="verdict tolerance")
        p.add_argument("--trials", type=int, default=None, help="probe trial count")
        p.add_argument("--s", type=float, default=None, help="principal order s")
        p.add_argument("--phi", type=str, default=None,
                       help="comma-separated phi exponents, e.g. 1.0,-0.5")
        p.add_argument("--lambda", dest="lam", type=float, default=None,
                       help="order drop in the a priori estimate")
        p.add_argument("--level", type=int, default=None,
                       help="derivative order l for smoothness")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        text = args.config.read_text(encoding="utf-8")
    except OSError as exc:
        print(f"error: cannot read {args.config}: {exc}", file=sys.stderr)
        return 1
    try:
        cfg = _apply_overrides(parse_config(text), args)
        code, lines, payload = _COMMANDS[args.command](cfg)
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc} (config: {args.config})", file=sys.stderr)
        return 1
    for line in lines:
        print(line)
    if args.json is not None:
        doc = {"schemaVersion": SCHEMA_VERSION, "command": args.command,
               "config": str(args.config), **payload}
        args.json.write_text(json.dumps(doc, indent=2, default=_json_default) + "\n",
                             encoding="utf-8")
    return code


def _json_default(value):
    if isinstance(value, complex):
        return [value.real, value.imag]
    if isinstance(value, tuple):
        return list(value)
    raise TypeError(f"not JSON serializable: {type(value)!r}")


if __name__ == "__main__":
    sys.exit(main())
