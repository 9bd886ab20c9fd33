import argparse
import logging
import re
import sys
from typing import Any, Dict, Optional, Sequence, Tuple

from pydantic import ValidationError
from sympy.polys.domains import QQ

from . import bpz, category, fusion, verma
from .config import get_settings
from .exceptions import ContractViolation, DomainError, UsageError
from .scalars import parse_rational
from .schemas import CommandResult
from .utils.formatting import dump_json, render_latex, render_text, to_jsonable, to_latex
from .utils.suite import run_suite

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DOMAIN = 2
EXIT_SUITE = 3


class ArgumentParser(argparse.ArgumentParser):
    """argparse that raises instead of exiting, so run() can report the failure."""

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        # negative rationals such as -5/4 are values, not options
        self._negative_number_matcher = re.compile(r"^-\d+(/\d+)?$|^-\d*\.\d+$")

    def error(self, message):
        raise UsageError(message)


def _positive(text: str) -> int:
    try:
        value = int(text)
    except ValueError as e:
        raise UsageError(f"expected a positive integer, got {text!r}") from e
    if value < 1:
        raise UsageError(f"expected a positive integer, got {text!r}")
    return value


def _non_negative(text: str) -> int:
    try:
        value = int(text)
    except ValueError as e:
        raise UsageError(f"expected a non-negative integer, got {text!r}") from e
    if value < 0:
        raise UsageError(f"expected a non-negative integer, got {text!r}")
    return value


def _triple(text: str) -> Tuple[int, int, int]:
    parts = text.split(",")
    if len(parts) != 3:
        raise UsageError(f"expected three labels r,r',s, got {text!r}")
    return tuple(_positive(p) for p in parts)


def _add_module_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--c", type=parse_rational, help="central charge")
    parser.add_argument("--h", type=parse_rational, help="highest weight")
    parser.add_argument("--quotient-level", type=_positive, help="quotient by the singular vector at this level")
    parser.add_argument("--t", type=parse_rational, help="parameter t with c = 13 - 6t - 6/t")
    parser.add_argument("--r", type=_positive)
    parser.add_argument("--s", type=_positive)
    parser.add_argument("--simple", action="store_true", help="use the simple quotient L(r,s)")


def _module(args) -> verma.HWModuleDescriptor:
    if args.c is not None and args.h is not None:
        if args.quotient_level:
            return verma.HWModuleDescriptor.quotient(args.c, args.h, args.quotient_level)
        return verma.HWModuleDescriptor.verma(args.c, args.h)
    if args.t is not None and args.r and args.s:
        if args.simple:
            return verma.simple_module(args.t, args.r, args.s)
        return verma.HWModuleDescriptor.verma(verma.central_charge_from_t(args.t), verma.h_rs(args.t, args.r, args.s))
    raise UsageError("specify a module with --c C --h H or with --t T --r R --s S")


def cmd_weight(args, order: int) -> Any:
    return {"h": verma.h_rs(args.t, args.r, args.s)}


def cmd_gram(args, order: int) -> Any:
    return verma.gram_matrix(_module(args), args.level)


def cmd_singular(args, order: int) -> Any:
    return {"vectors": verma.singular_vector(_module(args), args.level)}


def cmd_dual_basis(args, order: int) -> Any:
    m = _module(args)
    return {"basis": [verma.PBWVector.monomial(m, p) for p in m.basis(args.level)], "dual": verma.dual_basis(m, args.level)}


def cmd_character(args, order: int) -> Any:
    if args.algebra:
        return fusion.algebra_character(args.algebra, args.weight_floor, args.summands, order)
    return verma.character(_module(args), order)


def cmd_fuse(args, order: int) -> Any:
    if args.by_induction:
        return fusion.fuse_by_induction(args.r, args.rp)
    return fusion.fuse(args.r, args.rp)


def cmd_induce(args, order: int) -> Any:
    if args.s is not None or args.sp is not None:
        if args.s is None or args.sp is None or args.rp is None:
            raise UsageError("generic induction needs --r, --s, --rp and --sp")
        return fusion.generic_induce((args.r, args.s), (args.rp, args.sp))
    if args.rp is not None:
        return fusion.induce_centralizer(args.r, args.rp)
    module, multiplicity = fusion.induce_W(args.r)
    return {"module": module, "multiplicity": multiplicity}


def cmd_decompose(args, order: int) -> Any:
    return {"summands": fusion.decompose_algebra(args.algebra).take(args.bound)}


def cmd_centralizer_fusion(args, order: int) -> Any:
    result = {"fusion": fusion.centralizer_fusion(args.r, args.rp)}
    if args.identity_cutoff is not None:
        result["identity_check"] = fusion.algebra_fusion_identity_check(args.r, args.rp, args.identity_cutoff)
    return result


def cmd_generic_fusion(args, order: int) -> Any:
    return fusion.generic_centralizer_fusion(args.first, args.second)


def cmd_bpz(args, order: int) -> Any:
    ode = bpz.derive_bpz(args.c, args.h_deg, args.h_other)
    result: Dict[str, Any] = {
        "ode": ode,
        "indicial_exponents": {str(point): bpz.indicial_exponents(ode, point) for point in (0, 1)},
    }
    if args.exponent is not None:
        result["solution"] = bpz.frobenius_solve(ode, args.point, args.exponent, order)
    return result


def cmd_rigidity(args, order: int) -> Any:
    report = bpz.rigidity_scalar(order, args.scale)
    return {
        "c0": report.c0,
        "c3": report.c3,
        "a": report.a,
        "b": report.b,
        "R": report.rigidity_scalar,
        "pairings": report.pairings,
        "pi3": report.pi3,
        "coefficients": list(report.coefficients),
    }


def cmd_braiding(args, order: int) -> Any:
    constraints = category.hexagon_constraints()
    solutions = category.braiding_solutions()
    first, second = category.rigidity_compositions(True)
    return {
        "constraints": [str(p) for p in constraints.polynomials],
        "solutions": solutions,
        "hexagon": [category.hexagon_check(R) for R in solutions],
        "rigidity": [first.is_identity(), second.is_identity()],
        "untwisted_rigidity_is_minus_identity": (-category.rigidity_compositions(False)[0]).is_identity(),
        "dimension": category.intrinsic_dimension(),
        "q": category.q_from_dimension(2),
        "O25": category.select_braiding("O25"),
        "O1": category.select_braiding("O1"),
        "mutual_inverses": (category.select_braiding("O25") * category.select_braiding("O1")).is_identity(),
    }


def cmd_twist(args, order: int) -> Any:
    return {"twist": category.twist_scalar(args.c, args.r)}


def cmd_parity_check(args, order: int) -> Any:
    witness = category.monodromy_parity_witness(args.r, args.range)
    result: Dict[str, Any] = {"local": witness is None}
    if witness is not None:
        rp, k, value = witness
        result["witness"] = {"rp": rp, "k": k, "value": value}
    return result


def build_parser() -> ArgumentParser:
    parser = ArgumentParser(prog="vir25", description="Exact computations for the Virasoro algebra at c = 25")
    parser.add_argument("--format", choices=("json", "text", "latex"))
    parser.add_argument("--order", type=_non_negative, help="series truncation order")
    parser.add_argument("--log-level", choices=("CRITICAL", "ERROR", "WARNING", "INFO", "DEBUG"))
    sub = parser.add_subparsers(dest="command", parser_class=ArgumentParser)

    p = sub.add_parser("weight", help="lowest conformal weight h_{r,s}(t)")
    p.add_argument("--t", type=parse_rational, required=True)
    p.add_argument("--r", type=_positive, required=True)
    p.add_argument("--s", type=_positive, required=True)
    p.set_defaults(handler=cmd_weight)

    for name, handler in (("gram", cmd_gram), ("singular", cmd_singular), ("dual-basis", cmd_dual_basis)):
        p = sub.add_parser(name)
        _add_module_arguments(p)
        p.add_argument("--level", type=_non_negative, required=True)
        p.set_defaults(handler=handler)

    p = sub.add_parser("character")
    _add_module_arguments(p)
    p.add_argument("--algebra", choices=fusion.ALGEBRA_NAMES)
    p.add_argument("--summands", type=_positive, default=1)
    p.add_argument("--weight-floor", type=parse_rational)
    p.set_defaults(handler=cmd_character)

    p = sub.add_parser("fuse")
    p.add_argument("--r", type=_positive, required=True)
    p.add_argument("--rp", type=_positive, required=True)
    p.add_argument("--by-induction", action="store_true")
    p.set_defaults(handler=cmd_fuse)

    p = sub.add_parser("induce")
    p.add_argument("--r", type=_positive, required=True)
    p.add_argument("--rp", type=_positive)
    p.add_argument("--s", type=_positive)
    p.add_argument("--sp", type=_positive)
    p.set_defaults(handler=cmd_induce)

    p = sub.add_parser("decompose")
    p.add_argument("--algebra", required=True)
    p.add_argument("--bound", type=_positive, default=3)
    p.set_defaults(handler=cmd_decompose)

    p = sub.add_parser("centralizer-fusion")
    p.add_argument("--r", type=_positive, required=True)
    p.add_argument("--rp", type=_positive, required=True)
    p.add_argument("--identity-cutoff", type=_positive)
    p.set_defaults(handler=cmd_centralizer_fusion)

    p = sub.add_parser("generic-fusion")
    p.add_argument("--first", type=_triple, required=True, help="r,r',s")
    p.add_argument("--second", type=_triple, required=True, help="r,r',s")
    p.set_defaults(handler=cmd_generic_fusion)

    p = sub.add_parser("bpz")
    p.add_argument("--c", type=parse_rational, default=QQ(25))
    p.add_argument("--h-deg", type=parse_rational, default=QQ(-5, 4))
    p.add_argument("--h-other", type=parse_rational, default=QQ(-5, 4))
    p.add_argument("--exponent", type=parse_rational)
    p.add_argument("--point", type=int, choices=(0, 1), default=0)
    p.set_defaults(handler=cmd_bpz)

    p = sub.add_parser("rigidity")
    p.add_argument("--scale", type=parse_rational, default=QQ(1))
    p.set_defaults(handler=cmd_rigidity)

    p = sub.add_parser("braiding")
    p.set_defaults(handler=cmd_braiding)

    p = sub.add_parser("twist")
    p.add_argument("--c", type=int, choices=(1, 25), required=True)
    p.add_argument("--r", type=_positive, required=True)
    p.set_defaults(handler=cmd_twist)

    p = sub.add_parser("parity-check")
    p.add_argument("--r", type=_positive, required=True)
    p.add_argument("--range", type=_positive, default=15)
    p.set_defaults(handler=cmd_parity_check)

    p = sub.add_parser("golden-suite", aliases=["paper-suite"], help="recompute every golden value")
    p.set_defaults(handler=None)
    return parser


def _inputs(args) -> Dict[str, Any]:
    skipped = {"handler", "format", "order", "log_level"}
    return {k: to_jsonable(v) for k, v in vars(args).items() if k not in skipped and v is not None}


def _render(result: CommandResult, raw: Any, fmt: str) -> str:
    if fmt == "text":
        return render_text(result.model_dump())
    if fmt == "latex" and result.status == "ok":
        return render_latex(raw) if isinstance(raw, dict) else to_latex(raw)
    return dump_json(result.model_dump())


def _configure_logging(level: str) -> None:
    logging.basicConfig(level=getattr(logging, level), stream=sys.stderr, force=True)


def run(argv: Optional[Sequence[str]] = None) -> Tuple[CommandResult, int, str]:
    """
    Parse argv, dispatch to the library and return (result, exit status, rendered output).
    """
    argv = list(sys.argv[1:] if argv is None else argv)
    command = argv[0] if argv else ""
    fmt = "json"
    try:
        settings = get_settings()
        fmt = settings.output_format
        args = build_parser().parse_args(argv)
        command = args.command or ""
        if not command:
            raise UsageError("missing subcommand")
        fmt = args.format or settings.output_format
        _configure_logging(args.log_level or settings.log_level)
        order = settings.series_order if args.order is None else args.order
        logger.info(f"Running {command} with order {order}")

        if args.handler is None:
            report = run_suite(max(order, 3))
            result = CommandResult(command=command, inputs={}, output=report.model_dump())
            code = EXIT_OK if report.ok else EXIT_SUITE
            if not report.ok:
                result.status = "error"
                result.message = f"{report.failed} golden check(s) failed"
            return result, code, _render(result, report.model_dump(), fmt)

        raw = args.handler(args, order)
        result = CommandResult(command=command, inputs=_inputs(args), output=to_jsonable(raw))
        return result, EXIT_OK, _render(result, raw, fmt)
    except (UsageError, ContractViolation, ValidationError) as e:
        logger.error(f"Usage error in {command!r}: {str(e)}")
        result = CommandResult(command=command, status="error", message=str(e))
        return result, EXIT_USAGE, _render(result, None, fmt)
    except DomainError as e:
        logger.error(f"Domain error in {command!r}: {str(e)}")
        result = CommandResult(command=command, status="error", message=str(e))
        return result, EXIT_DOMAIN, _render(result, None, fmt)


def main(argv: Optional[Sequence[str]] = None) -> None:
    result, code, rendered = run(argv)
    print(rendered)
    sys.exit(code)


if __name__ == "__main__":
    main()
