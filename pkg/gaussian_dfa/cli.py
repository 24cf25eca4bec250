"""Command line entry point: gaussian-dfa <subcommand> MODEL [options]."""
import argparse
import json
import sys
from collections.abc import Sequence
from typing import Any, Callable, Optional

import numpy as np

from gaussian_dfa.config import Config, load_config
from gaussian_dfa.dfa_core import (StructureReport, classify_single_kraus,
                                   structure_report)
from gaussian_dfa.errors import (ModelParseError, SelfAdjointnessViolated,
                                 Unsupported, ValidationFailed)
from gaussian_dfa.fock_oracle import (default_sector, multiplicativity_residual,
                                      verify_generator_on_ladder,
                                      verify_weyl_formula)
from gaussian_dfa.logger import init_logger
from gaussian_dfa.model import GaussianModel, load_model, validate
from gaussian_dfa.symplectic import bogoliubov_matrix, reduce_kraus
from gaussian_dfa.weyl_flow import crosscheck_complement, evolve_weyl_grid

logger = init_logger(__name__)

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_INPUT = 2
EXIT_UNSUPPORTED = 3
EXIT_NUMERICAL = 4


class CommandFailed(Exception):

    def __init__(self, code: int, kind: str, message: str):
        self.code = code
        self.kind = kind
        super().__init__(message)


def parse_complex_list(text: str) -> np.ndarray:
    """Comma separated Python complex literals, e.g. "0.5,0.5j,1+2j"."""
    try:
        return np.array([complex(x.strip()) for x in text.split(",")])
    except ValueError as e:
        raise argparse.ArgumentTypeError(
            f"invalid complex vector {text!r}") from e


def parse_float_list(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",")]
    except ValueError as e:
        raise argparse.ArgumentTypeError(
            f"invalid number list {text!r}") from e


def parse_int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",")]
    except ValueError as e:
        raise argparse.ArgumentTypeError(
            f"invalid integer list {text!r}") from e


def quadrature_label(z: np.ndarray, precision: int = 4) -> str:
    """W(z) = exp(i sqrt(2) sum_j (Im z_j q_j - Re z_j p_j)); render the
    quadrature combination in the exponent."""
    terms = []
    for j, zj in enumerate(np.asarray(z, dtype=complex), start=1):
        for coeff, name in ((zj.imag, f"q{j}"), (-zj.real, f"p{j}")):
            if abs(coeff) > 10**-precision:
                terms.append(f"{coeff:+.{precision}f} {name}")
    return " ".join(terms) if terms else "0"


def _load(path: str, config: Config) -> GaussianModel:
    try:
        return load_model(path)
    except FileNotFoundError as e:
        raise CommandFailed(EXIT_INPUT, "FileNotFound",
                            f"no such model file: {path}") from e
    except (ModelParseError, SelfAdjointnessViolated) as e:
        raise CommandFailed(EXIT_INPUT, "ParseError", str(e)) from e


def _validated(path: str, config: Config) -> GaussianModel:
    model = _load(path, config)
    report = validate(model, config.tolerances.sym)
    if not report.passed:
        raise CommandFailed(EXIT_VALIDATION, "ValidationFailed",
                            "; ".join(report.failure_messages()))
    return model


def _analysis(model: GaussianModel, config: Config) -> StructureReport:
    tols = config.tolerances
    report = structure_report(model,
                              tol=tols.span,
                              tol_sym=tols.sym,
                              tol_rank=tols.rank or None)
    bmap = bogoliubov_matrix(report.decomposition, tols.span)
    report.bogoliubov = bmap.B
    reduced = reduce_kraus(model, bmap, tols.span)
    leading = report.decomposition.d_r + report.decomposition.d_c
    leak = float(
        np.abs(np.vstack([reduced.V, reduced.U])[:, leading:]).max(
            initial=0.0))
    report.extras["normal_form"] = {
        "modes": bmap.mode_labels,
        "symplectic_defect": bmap.symplectic_defect(),
        "leading_modes": leading,
        "reduced_kraus_leak": leak,
        "reduced_model": reduced.to_dict(),
    }
    return report


def cmd_validate(args: argparse.Namespace, config: Config) -> tuple[int, Any]:
    model = _load(args.model, config)
    report = validate(model, config.tolerances.sym)
    return (EXIT_OK if report.passed else EXIT_VALIDATION), report.to_dict()


def cmd_analyze(args: argparse.Namespace, config: Config) -> tuple[int, Any]:
    model = _validated(args.model, config)
    return EXIT_OK, _analysis(model, config).to_dict()


def cmd_classify(args: argparse.Namespace, config: Config) -> tuple[int, Any]:
    model = _validated(args.model, config)
    try:
        result = classify_single_kraus(model, config.tolerances.span)
    except Unsupported as e:
        raise CommandFailed(EXIT_UNSUPPORTED, "Unsupported", str(e)) from e
    return EXIT_OK, {**result.to_dict(), "description": result.describe()}


def cmd_evolve(args: argparse.Namespace, config: Config) -> tuple[int, Any]:
    model = _validated(args.model, config)
    z = _vector_arg(args.z, model)
    times = _times_arg(args.t)
    records = evolve_weyl_grid(model, z, times, config.tolerances.quad,
                               config.quad_limit)
    return EXIT_OK, [r.to_dict() for r in records]


def cmd_crosscheck(args: argparse.Namespace,
                   config: Config) -> tuple[int, Any]:
    model = _validated(args.model, config)
    agree = crosscheck_complement(model, config.tolerances.subspace,
                                  config.tolerances.span)
    return (EXIT_OK if agree else EXIT_NUMERICAL), {"agree": agree}


def cmd_oracle(args: argparse.Namespace, config: Config) -> tuple[int, Any]:
    model = _validated(args.model, config)
    if model.d > 2:
        raise CommandFailed(EXIT_UNSUPPORTED, "Unsupported",
                            "the Fock oracle runs for d <= 2 only")
    z = _vector_arg(args.z, model)
    _times_arg([args.t])
    cutoffs = args.cutoffs if args.cutoffs else [20] * model.d
    if len(cutoffs) == 1:
        cutoffs = cutoffs * model.d
    if len(cutoffs) != model.d:
        raise CommandFailed(
            EXIT_INPUT, "ParseError",
            f"--cutoffs has {len(cutoffs)} entries but the model has "
            f"d={model.d}")
    if min(cutoffs) < 2 or (args.sector is not None and args.sector < 0):
        raise CommandFailed(EXIT_INPUT, "ParseError",
                            "cutoffs must be at least 2 and the sector "
                            "non-negative")
    sector = default_sector(cutoffs) if args.sector is None else args.sector
    ode_tol = config.tolerances.ode
    method = config.ode_method
    result = {
        "z": [[float(c.real), float(c.imag)] for c in z],
        "t": args.t,
        "cutoffs": cutoffs,
        "sector": sector,
        "multiplicativity_residual":
        multiplicativity_residual(model, z, args.t, cutoffs, sector, ode_tol,
                                  method),
        "weyl_formula_residual":
        verify_weyl_formula(model, z, args.t, cutoffs, sector, ode_tol, method),
        "generator_identity_residual":
        verify_generator_on_ladder(model, cutoffs, sector, seed=config.seed),
    }
    return EXIT_OK, result


def _vector_arg(z: np.ndarray, model: GaussianModel) -> np.ndarray:
    if z.shape[0] != model.d:
        raise CommandFailed(
            EXIT_INPUT, "ParseError",
            f"--z has {z.shape[0]} entries but the model has d={model.d}")
    return z


def _times_arg(times: list[float]) -> list[float]:
    if any(t < 0 for t in times):
        raise CommandFailed(EXIT_INPUT, "ParseError",
                            f"times must be non-negative, got {times}")
    return times


def _render_text(command: str, payload: Any) -> str:
    if command == "validate":
        lines = ["PASS" if payload["passed"] else "FAIL"]
        for check in payload["checks"]:
            mark = "ok  " if check["passed"] else "FAIL"
            lines.append(f"  [{mark}] {check['name']} {check['message']}")
        return "\n".join(lines).rstrip()
    if command == "analyze":
        lines = [
            f"𝒩(𝒯) ≅ {payload['algebra']}",
            f"d_c={payload['d_c']}, d_r={payload['d_r']}, "
            f"d_f={payload['d_f']}",
            f"minimal: {str(payload['minimal']).lower()}",
            f"commutator orders used: {payload['iterations_used']}",
        ]
        d = payload["model"]["d"]
        mc = payload["subspaces"]["Mc"]
        if mc:
            lines.append("classical quadratures (basis of Mc):")
            for row in mc:
                z = np.array(row[:d]) + 1j * np.array(row[d:])
                lines.append(f"  {quadrature_label(z)}")
        nf = payload.get("normal_form")
        if nf is not None:
            lines.append(f"normal form modes: {' '.join(nf['modes'])} "
                         f"(Kraus support on the first "
                         f"{nf['leading_modes']})")
        return "\n".join(lines)
    if command == "classify":
        return payload["description"]
    if command == "evolve":
        lines = ["t damping phase z_out"]
        for rec in payload:
            z_out = ", ".join(f"{re:+.6g}{im:+.6g}j"
                              for re, im in rec["z_out"])
            lines.append(f"{rec['t']:g} {rec['damping']:.10g} "
                         f"{rec['phase']:.10g} ({z_out})")
        return "\n".join(lines)
    if command == "crosscheck":
        return str(payload["agree"]).lower()
    return "\n".join(f"{k}: {v}" for k, v in payload.items())


COMMANDS: dict[str, Callable[[argparse.Namespace, Config], tuple[int, Any]]]
COMMANDS = {
    "validate": cmd_validate,
    "analyze": cmd_analyze,
    "classify": cmd_classify,
    "evolve": cmd_evolve,
    "crosscheck": cmd_crosscheck,
    "oracle": cmd_oracle,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config",
                        help="JSON file with config overrides")
    common.add_argument("--format",
                        choices=("text", "json"),
                        help="report format (default: "
                        "$GAUSS_DFA_OUTPUT_FORMAT or text)")
    common.add_argument("--tol-rank",
                        type=float,
                        help="rank tolerance of the minimality check")
    common.add_argument("--seed",
                        type=int,
                        help="seed for randomized checks")
    common.add_argument("-v",
                        "--verbose",
                        action="store_true",
                        help="log debug output")

    parser = argparse.ArgumentParser(
        prog="gaussian-dfa",
        description="Decoherence-free subalgebras of Gaussian quantum Markov "
        "semigroups.")
    subparsers = parser.add_subparsers(dest="command", required=True)

    helps = {
        "validate": "check the standing assumptions of a model",
        "analyze": "compute (d_c, d_r, d_f), subspaces and normal form",
        "classify": "classify a single Kraus operator model with H = 0",
        "evolve": "evolve a Weyl operator over a time grid",
        "crosscheck": "compare the commutator and ker C characterizations",
        "oracle": "truncated Fock space residuals (d <= 2)",
    }
    subs = {}
    for name, text in helps.items():
        sub = subparsers.add_parser(name, parents=[common], help=text)
        sub.add_argument("model", help="model JSON file")
        subs[name] = sub

    for name in ("evolve", "oracle"):
        subs[name].add_argument("--z",
                                type=parse_complex_list,
                                required=True,
                                help="Weyl argument, comma separated "
                                "complex numbers")
    subs["evolve"].add_argument("--t",
                                type=parse_float_list,
                                default=[1.0],
                                help="comma separated time grid")
    subs["oracle"].add_argument("--t", type=float, default=0.5, help="time")
    subs["oracle"].add_argument("--cutoffs",
                                type=parse_int_list,
                                help="per-mode Fock cutoffs (default 20)")
    subs["oracle"].add_argument("--sector",
                                type=int,
                                help="largest occupation of the checked "
                                "sector (default cutoff // 3)")
    return parser


def _emit(payload: Any, command: str, output_format: str) -> None:
    if output_format == "json":
        print(json.dumps(payload, indent=2))
    else:
        print(_render_text(command, payload))


def _enable_debug_logging() -> None:
    package_logger = init_logger("gaussian_dfa")
    package_logger.setLevel("DEBUG")
    for handler in package_logger.handlers:
        handler.setLevel("DEBUG")


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.verbose:
        _enable_debug_logging()

    try:
        config = load_config(args.config,
                             overrides={
                                 "output_format": args.format,
                                 "seed": args.seed,
                                 "tolerances": {
                                     "rank": args.tol_rank
                                 },
                             })
    except FileNotFoundError:
        print(f"error: no such config file: {args.config}", file=sys.stderr)
        return EXIT_INPUT
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT

    output_format = config.output_format
    try:
        code, payload = COMMANDS[args.command](args, config)
    except CommandFailed as e:
        code, payload = e.code, {"error": e.kind, "message": str(e)}
    except ValidationFailed as e:
        code, payload = EXIT_VALIDATION, {
            "error": "ValidationFailed",
            "message": str(e)
        }
    except Unsupported as e:
        code, payload = EXIT_UNSUPPORTED, {
            "error": "Unsupported",
            "message": str(e)
        }
    except (ArithmeticError, RuntimeError, ValueError) as e:
        logger.exception("Command %s failed", args.command)
        code, payload = EXIT_NUMERICAL, {
            "error": type(e).__name__,
            "message": str(e)
        }

    if isinstance(payload, dict) and "error" in payload:
        if output_format == "json":
            print(json.dumps(payload, indent=2))
        else:
            print(f"error: {payload['error']}: {payload['message']}",
                  file=sys.stderr)
        return code

    _emit(payload, args.command, output_format)
    return code


if __name__ == "__main__":
    sys.exit(main())
