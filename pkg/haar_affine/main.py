"""Command-line entry point: ``haar-affine <command> ...``."""
import argparse
import inspect
import math
import sys
from typing import List, Optional

from loguru import logger
from pydantic import ValidationError

from haar_affine.chaos.affine import apply_Tf, apply_Tf_adjoint
from haar_affine.chaos.chaos1 import dual_coeffs, values_from_coeffs
from haar_affine.chaos.reconstruct import reconstruct_in_chaoses
from haar_affine.classify.spectrum import (
    spectral_radius_bounds,
    spectral_radius_estimate,
    spectrum_cloud,
)
from haar_affine.classify.verdicts import (
    classify_polynomial,
    endpoint_verdict,
    minimality_profile,
    theorem_verdict,
)
from haar_affine.config import RunConfig, settings
from haar_affine.dyadic.norms import bmo_norm, bmo_prime_norm, h1_norm, lp_norm, paley_lp_norm
from haar_affine.dyadic.scalars import format_scalar
from haar_affine.exceptions import HaarAffineError
from haar_affine.models import ScalarMode
from haar_affine.services.input_service import InputService
from haar_affine.services.output_service import OutputService
from haar_affine.suites import SUITES, run_all, run_suite
from haar_affine.symbol.norms import (
    ap_norm,
    equivalence_radius,
    hinf_boundary,
    multiplier_norm,
    multiplier_trend,
)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_ERROR = 2


def configure_logging(level: Optional[str] = None, log_file: Optional[str] = None) -> None:
    logger.remove()
    logger.add(sys.stderr, level=level or settings.log_level)
    log_file = log_file or settings.log_file
    if log_file:
        logger.add(log_file, level="DEBUG", rotation="10 MB")


def _p_list(text: Optional[str]) -> Optional[List[float]]:
    if text is None:
        return None
    try:
        return [float(item) for item in text.split(",") if item.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"--p expects comma-separated numbers, got '{text}'")


def _int_list(text: str) -> List[int]:
    try:
        return [int(item) for item in text.split(",") if item.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got '{text}'")


def _p_value(text: str) -> float:
    return math.inf if text.lower() in ("inf", "infinity") else float(text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="haar-affine", description="Affine Haar systems and their symbols")
    parser.add_argument("--mode", choices=["exact", "float"])
    parser.add_argument("--depth", type=int, help="chaos truncation depth")
    parser.add_argument(
        "--trunc", type=int,
        help="symbol truncation N; counterexample symbols overflow float64 unless N/p + 4.1 sqrt(N) < 1024",
    )
    parser.add_argument("--samples", type=int, help="boundary samples")
    parser.add_argument("--p", type=_p_list, dest="p_list", help="comma-separated exponents")
    parser.add_argument("--seed", type=int)
    parser.add_argument("--out", help="write the report here instead of stdout")
    parser.add_argument("--log-level")
    sub = parser.add_subparsers(dest="command", required=True)

    expand = sub.add_parser("expand", help="coefficients c_k and values f(1/2^k)")
    expand.add_argument("symbol")
    expand.add_argument("-K", type=int, default=8)
    expand.add_argument("--format", choices=["table", "json", "csv"], default="table")

    dual = sub.add_parser("dual", help="coefficients of the dual function")
    dual.add_argument("symbol")
    dual.add_argument("-N", type=int, default=8)
    dual.add_argument("--format", choices=["table", "json", "csv"], default="table")

    verify = sub.add_parser("verify", help="run one verification suite")
    verify.add_argument("suite")
    verify.add_argument("--symbol")
    verify.add_argument("--max-len", type=int)
    verify.add_argument("-n", type=int)
    verify.add_argument("--count", type=int)

    norm = sub.add_parser("norm", help="norms of a step function, or of a symbol at radius 2^(-1/p)")
    target = norm.add_mutually_exclusive_group(required=True)
    target.add_argument("--step")
    target.add_argument("--symbol")
    norm.add_argument("--kind", choices=["lp", "bmo", "bmo-prime", "h1", "paley", "ap", "hinf"], default="lp")

    opnorm = sub.add_parser("opnorm", help="Toeplitz section norms of the symbol at radius 2^(-1/p)")
    opnorm.add_argument("symbol")
    opnorm.add_argument("--trend", type=_int_list, help="section sizes, comma-separated")

    spectrum = sub.add_parser("spectrum", help="spectrum cloud or spectral radius")
    spectrum.add_argument("symbol")
    spectrum.add_argument("--at", type=_p_value, default=2.0, help="exponent p, or inf for BMO")
    spectrum.add_argument("--radius-trace", action="store_true")
    spectrum.add_argument("--bounds", action="store_true")
    spectrum.add_argument("--n-max", type=int, default=32)

    classify = sub.add_parser("classify", help="basis and equivalence verdicts")
    classify.add_argument("symbol")
    classify.add_argument("--theorem", action="store_true", help="theorem-level verdict per p")
    classify.add_argument("--endpoint", choices=["bmo", "h1"])
    classify.add_argument("--minimality", action="store_true")

    apply = sub.add_parser("apply", help="apply T_f or its adjoint to a step function")
    apply.add_argument("symbol")
    apply.add_argument("step")
    apply.add_argument("--adjoint", action="store_true")
    apply.add_argument("--pairing", choices=["sesquilinear", "bilinear"], default="sesquilinear")

    reconstruct = sub.add_parser("reconstruct", help="partial expansion in the affine system")
    reconstruct.add_argument("symbol")
    reconstruct.add_argument("step")
    reconstruct.add_argument("--n-max", type=int, required=True)

    sub.add_parser("selftest", help="run every verification suite")
    return parser


class Runner:
    """Dispatches one parsed command line."""

    def __init__(self, args: argparse.Namespace, config: RunConfig):
        self.args = args
        self.config = config
        self.inputs = InputService(ScalarMode(config.mode))
        self.output = OutputService(config.out)

    def symbol(self, N: Optional[int] = None):
        chaos, _ = self.inputs.parse_symbol(self.args.symbol, self.config.trunc if N is None else N)
        return chaos

    def emit_rows(self, header, rows, fmt: str) -> None:
        if fmt == "json":
            self.output.emit(self.output.to_json([dict(zip(header, row)) for row in rows]))
        elif fmt == "csv":
            self.output.emit(self.output.to_csv(header, rows))
        else:
            self.output.emit(self.output.table(header, rows))

    def run(self) -> int:
        return getattr(self, "cmd_" + self.args.command.replace("-", "_"))()

    def cmd_expand(self) -> int:
        K = self.args.K
        c = self.symbol(max(K, 0))
        values = values_from_coeffs(c, K)
        rows = [(k, format_scalar(c.coeff(k)), format_scalar(values[k])) for k in range(K + 1)]
        self.emit_rows(("k", "c_k", "f(1/2^k)"), rows, self.args.format)
        return EXIT_OK

    def cmd_dual(self) -> int:
        N = self.args.N
        d = dual_coeffs(self.symbol(N), N)
        rows = [(j, format_scalar(d.coeff(j))) for j in range(N + 1)]
        self.emit_rows(("j", "d_j"), rows, self.args.format)
        return EXIT_OK

    def cmd_verify(self) -> int:
        name = self.args.suite
        params = {}
        if self.args.symbol is not None:
            params["c"] = self.symbol()
        for option, key in (("max_len", "max_len"), ("n", "n"), ("count", "count")):
            value = getattr(self.args, option)
            if value is not None:
                params[key] = value
        if name in SUITES and "seed" in inspect.signature(SUITES[name]).parameters:
            params["seed"] = self.config.seed
        report = run_suite(name, **params)
        self.output.emit(self.output.to_json(report))
        return EXIT_OK if report.passed else EXIT_FAILED

    def cmd_norm(self) -> int:
        kind = self.args.kind
        reports = []
        if self.args.step is not None:
            x = self.inputs.parse_step(self.args.step)
            if kind == "bmo":
                reports.append(bmo_norm(x))
            elif kind == "bmo-prime":
                reports.append(bmo_prime_norm(x))
            elif kind == "h1":
                reports.append(h1_norm(x))
            elif kind == "paley":
                reports.extend(paley_lp_norm(x, p) for p in self.config.p_list)
            elif kind == "lp":
                reports.extend(lp_norm(x, p) for p in self.config.p_list)
            else:
                raise HaarAffineError(f"--kind {kind} needs --symbol")
        else:
            u = self.symbol().symbol()
            N = min(self.config.trunc, u.degree) if not u.is_polynomial else None
            for p in self.config.p_list:
                R = equivalence_radius(p)
                if kind == "ap":
                    reports.append(ap_norm(u, p, R, N))
                elif kind == "hinf":
                    reports.append(hinf_boundary(u, R, self.config.samples, N))
                else:
                    raise HaarAffineError(f"--kind {kind} needs --step")
        self.output.emit(self.output.to_json(reports))
        return EXIT_OK

    def cmd_opnorm(self) -> int:
        u = self.symbol().symbol()
        reports = []
        for p in self.config.p_list:
            R = equivalence_radius(p)
            if self.args.trend:
                reports.append(multiplier_trend(u, p, R, self.args.trend))
            else:
                reports.append(multiplier_norm(u, p, R, self.config.trunc))
        self.output.emit(self.output.to_json(reports))
        return EXIT_OK

    def cmd_spectrum(self) -> int:
        c = self.symbol()
        N = None if c.is_polynomial else min(self.config.trunc, c.depth - 1)
        if self.args.radius_trace:
            trace = spectral_radius_estimate(c, self.config.trunc, self.args.n_max, self.config.samples)
            self.output.emit(self.output.to_json(trace))
        elif self.args.bounds:
            bounds = [spectral_radius_bounds(c, p, N, self.config.samples) for p in self.config.p_list]
            self.output.emit(self.output.to_json(bounds))
        else:
            cloud = spectrum_cloud(c, self.args.at, N=N)
            self.output.emit(self.output.cloud_csv(cloud))
        return EXIT_OK

    def cmd_classify(self) -> int:
        c = self.symbol()
        N = min(self.config.trunc, c.depth - 1) if not c.is_polynomial else None
        if self.args.endpoint:
            report = endpoint_verdict(c, self.args.endpoint, N, self.config.samples)
        elif self.args.minimality:
            report = [minimality_profile(c, p, N) for p in self.config.p_list if p > 1]
        elif self.args.theorem or not c.is_polynomial:
            report = [theorem_verdict(c, p, N, self.config.samples) for p in self.config.p_list]
        else:
            report = classify_polynomial(c, self.config.p_list)
        self.output.emit(self.output.to_json(report))
        return EXIT_OK

    def _step_document(self, step) -> dict:
        return {"level": step.level, "values": [format_scalar(v) for v in step.values]}

    def cmd_apply(self) -> int:
        c = self.symbol(self.config.depth)
        x = self.inputs.parse_step(self.args.step)
        depth = self.config.depth if not c.is_polynomial else max(c.depth, 1)
        if self.args.adjoint:
            result = apply_Tf_adjoint(c, x, depth, self.args.pairing).to_step(x.level)
        else:
            result = apply_Tf(c, x, depth)
        self.output.emit(self.output.to_json(self._step_document(result)))
        return EXIT_OK

    def cmd_reconstruct(self) -> int:
        c = self.symbol(max(self.config.depth, self.args.n_max.bit_length()))
        x = self.inputs.parse_step(self.args.step)
        _, report = reconstruct_in_chaoses(c, x, self.args.n_max, self.config.depth, self.config.p_list)
        self.output.emit(self.output.to_json(report))
        return EXIT_OK

    def cmd_selftest(self) -> int:
        reports = run_all(self.config.seed)
        self.output.emit(self.output.to_json(reports))
        return EXIT_OK if all(r.passed for r in reports) else EXIT_FAILED


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_ERROR if e.code else EXIT_OK
    configure_logging(args.log_level)
    try:
        config = RunConfig.from_settings(
            mode=args.mode, depth=args.depth, trunc=args.trunc, samples=args.samples,
            p_list=args.p_list, seed=args.seed, out=args.out,
        )
        logger.debug(f"Run configuration: {config.model_dump()}")
        return Runner(args, config).run()
    except (HaarAffineError, ValidationError) as e:
        logger.error(f"{args.command} failed: {str(e)}")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
