"""Elliptic boundary-value problems with additional unknown boundary
functions: ellipticity verification, special Green formulas, and exact
per-mode analysis of the disk model in the refined Sobolev scale."""

from .collarops import (AdjointProblem, BoundaryOperator, DISK_LAPLACIAN,
                        GreenTableau, InteriorCollarOperator, OrderViolationError,
                        UnsupportedOperatorError, adjoint_problem,
                        build_green_tableau, compose, formal_adjoint_tangential,
                        nu_decompose, restrict_to_boundary)
from .config import ConfigError, ProblemConfig, RunParams, parse_config, serialize_config
from .disksolver import (DiskProblem, FredholmReport, ModeSystem, RHSData,
                         RhsEnvelope, Solution, UnsolvableError, apply_operator,
                         apriori_probe, assemble_mode_system, borderline_rhs,
                         classify_smoothness, dnorm, enorm, fredholm_report,
                         isomorphism_probe, mode_matrix, particular_coefficient,
                         regularity_check, solve, verify_solvability_criterion)
from .ellipticity import (CoveringReport, EllipticityViolation,
                          ImproperRootSplitError, LawrukReport,
                          PointSymbolProblem, RealRootError, RootSplit,
                          build_lopatinskii_matrix, check_covering,
                          check_interior_ellipticity, check_lawruk_ellipticity,
                          check_proper_ellipticity, roots_with_multiplicity)
from .hormander import (HormanderSpec, InterpolationParameter, ModeSequence,
                        PsiWeight, bracket, check_embedding_chain, hnorm,
                        interpolation_norm, make_psi)
from .slowvar import (LogPowerPhi, embedding_integral_is_finite,
                      embedding_integral_partial, eval_phi)

__version__ = "0.1.0"
