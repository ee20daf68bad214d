"""Command-line front end: ``pointed-mobius <command> [options]``.

Commands: ``mu``, ``beta``, ``knapsack``, ``vset``, ``verify`` and
``export``. Results go to stdout in the format chosen with ``--format``;
logs go to stderr. Exit codes: 0 success, 2 invalid input, 3 size bound
exceeded, 4 methods disagree or a verification check failed.
"""

import argparse
import csv
import io
import json
import logging
import sys
from typing import Any, Callable, Dict, List, Literal, Optional, Sequence, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from .config import Bounds, set_bounds
from .exceptions import Disagreement, InvalidInput, ParseError, PointedMobiusError
from .knapsack import KnapsackCensus, KnapsackCertificate, VSet, build_V, census, is_knapsack
from .perm_stats import beta, permutations_with_descent_set
from .permutahedron import build_Q, build_R, face_colors
from .pointed_structures import (
    build_C,
    build_I,
    build_Pi,
    filter_by_max_parts,
    parse_partition,
    parse_pointed_composition,
    parse_pointed_partition,
    r_divisible_generator,
    restrict_by_type,
    type_filter,
)
from .poset_core import FinitePoset, PosetFilter
from .text_formatting import (
    format_certificate,
    format_composition_list,
    format_header,
    format_mobius_report,
    format_notices,
    format_summary_table,
    render_table,
)
from .theorems import MobiusReport, compare_methods, mu_max_parts, mu_r_divisible
from .verification import SUITES, VerificationSummary, run_verification

logger = logging.getLogger(__name__)

Command = Literal["mu", "beta", "knapsack", "vset", "verify", "export"]
OutputFormat = Literal["text", "json", "csv", "dot"]

WITNESS_MAX_N = 6


class RunConfig(BaseModel):
    """Validated options of one invocation."""

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    command: Command
    n: Optional[int] = None
    r: Optional[int] = None
    m: Optional[int] = None
    k: Optional[int] = None
    p: Optional[int] = None
    generators: List[str] = []
    lambda_: Optional[str] = Field(None, alias="lambda")
    composition: Optional[str] = None
    witnesses: bool = False
    census: Optional[int] = None
    only: List[str] = []
    n_max: Optional[int] = None
    poset: Optional[str] = None
    output_format: OutputFormat = "text"
    bounds: Optional[str] = None
    seed: int = 0

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        values = {key: value for key, value in vars(args).items() if value is not None}
        values.pop("log_level", None)
        values["generators"] = [part.strip() for item in values.pop("generators", []) for part in item.split(";")]
        if "max_parts" in values:
            values["k"] = values.pop("max_parts")
        if "lambda_text" in values:
            values["lambda"] = values.pop("lambda_text")
        try:
            return cls.model_validate(values)
        except ValidationError as e:
            raise ParseError(f"invalid options: {e}") from e

    def require(self, name: str) -> Any:
        value = getattr(self, name)
        if value is None:
            flag = "--lambda" if name == "lambda_" else f"--{name.replace('_', '-')}"
            raise InvalidInput(f"{self.command} needs {flag}")
        return value


class BetaResult(BaseModel):
    composition: str
    n: int
    beta: int
    witnesses: Optional[List[str]] = None


# -- commands ---------------------------------------------------------------


def _filter_for(config: RunConfig, n: int) -> PosetFilter:
    if config.generators:
        return type_filter(n, [parse_pointed_partition(text) for text in config.generators])
    if config.k is not None:
        return filter_by_max_parts(n, config.k)
    if config.r is not None and config.m is not None:
        return type_filter(n, [r_divisible_generator(n, config.r, config.m)])
    raise InvalidInput("choose a filter with --generators, --max-parts or --r/--m")


def cmd_mu(config: RunConfig) -> MobiusReport:
    """Möbius value of a filter by every applicable method."""
    n = config.require("n")
    type_filter_ = _filter_for(config, n)
    closed_form: Optional[int] = None
    if not config.generators and config.k is not None:
        closed_form = mu_max_parts(n, config.k)
    elif not config.generators and config.r is not None and config.m is not None:
        closed_form = mu_r_divisible(n, config.r, config.m)
    return compare_methods(n, type_filter_, closed_form=closed_form)


def cmd_beta(config: RunConfig) -> BetaResult:
    composition = parse_pointed_composition(config.require("composition"))
    witnesses = None
    if config.witnesses:
        if composition.n > WITNESS_MAX_N:
            logger.warning(f"Witnesses are listed only for n <= {WITNESS_MAX_N}")
        elif composition.pointed or composition.is_zero():
            positions = set(composition.partial_sums())
            witnesses = [str(tau) for tau in permutations_with_descent_set(composition.n, positions)]
        else:
            witnesses = []
    return BetaResult(
        composition=composition.key, n=composition.n, beta=beta(composition), witnesses=witnesses
    )


def cmd_knapsack(config: RunConfig) -> Union[KnapsackCertificate, KnapsackCensus]:
    if config.census is not None:
        return census(config.census)
    return is_knapsack(parse_partition(config.require("lambda_")), config.m)


def cmd_vset(config: RunConfig) -> VSet:
    return build_V(parse_partition(config.require("lambda_")), config.require("m"))


def cmd_verify(config: RunConfig) -> VerificationSummary:
    return run_verification(config.only or None, config.n_max, config.seed)


def _export_poset(config: RunConfig) -> FinitePoset:
    kind = config.require("poset")
    if kind == "I":
        return build_I(config.require("n"))
    if kind in ("Pi", "C"):
        n = config.require("n")
        poset = build_Pi(n) if kind == "Pi" else build_C(n)
        if config.generators or config.k is not None or config.r is not None:
            poset = restrict_by_type(poset, _filter_for(config, n))
        return poset
    if kind == "Q":
        return build_Q(config.require("p"))
    if kind == "R":
        region = build_R(parse_partition(config.require("lambda_")))
        return region.parent.induced(region.members, name=f"R({config.lambda_})")
    raise InvalidInput(f"unknown poset kind '{kind}'")


def cmd_export(config: RunConfig) -> str:
    """DOT, JSON, CSV or a text summary of one of the posets."""
    poset = _export_poset(config)
    if config.output_format == "dot":
        colors = face_colors(parse_partition(config.lambda_)) if config.lambda_ and config.poset in ("Q", "R") else {}
        return poset.to_dot({label: color for label, color in colors.items() if label in poset})
    if config.output_format == "json":
        return poset.to_json() + "\n"
    if config.output_format == "csv":
        return _csv(["lower", "upper"], poset.covers)
    response = format_header(f"Poset {poset.name}")
    response += format_summary_table(
        {
            "elements": len(poset),
            "covers": len(poset.covers),
            "graded": poset.is_graded(),
            "maximal elements": ", ".join(poset.maximal_elements()),
        }
    )
    return response + "\n"


COMMANDS: Dict[str, Callable[[RunConfig], Any]] = {
    "mu": cmd_mu,
    "beta": cmd_beta,
    "knapsack": cmd_knapsack,
    "vset": cmd_vset,
    "verify": cmd_verify,
    "export": cmd_export,
}


# -- rendering --------------------------------------------------------------


def _csv(header: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()


def _render_verification(summary: VerificationSummary, output_format: str) -> str:
    if output_format == "json":
        return summary.model_dump_json(indent=2) + "\n"
    rows = [
        (suite.name, suite.n_max, suite.checks, len(suite.failures), "pass" if suite.passed else "FAIL")
        for suite in summary.suites
    ]
    if output_format == "csv":
        return _csv(["suite", "n_max", "checks", "failures", "status"], rows)
    response = render_table(
        f"Verification (seed {summary.seed})", ["suite", "n_max", "checks", "failures", "status"], rows
    )
    for suite in summary.suites:
        if suite.failures or suite.notes:
            response += format_header(suite.name, level=2)
            response += "\n".join(suite.failures + suite.notes) + "\n"
    if summary.notices:
        response += format_notices(summary.notices) + "\n"
    return response


def render(result: Any, output_format: str) -> str:
    """Serialize a command result in the requested format."""
    if isinstance(result, str):
        return result
    if output_format == "dot":
        raise InvalidInput("the dot format is only available for export")
    if isinstance(result, MobiusReport):
        data = result.to_dict()
        if output_format == "json":
            return result.to_json() + "\n"
        if output_format == "csv":
            header = [key for key in data if key != "generators"]
            return _csv(["generators"] + header, [[";".join(data["generators"])] + [data[key] for key in header]])
        return format_mobius_report(data)
    if isinstance(result, BetaResult):
        if output_format == "json":
            return result.model_dump_json(indent=2, exclude_none=True) + "\n"
        if output_format == "csv":
            return _csv(["composition", "beta"], [(result.composition, result.beta)])
        response = f"beta({result.composition}) = {result.beta}\n"
        if result.witnesses is not None:
            response += "\n".join(result.witnesses) + ("\n" if result.witnesses else "")
        return response
    if isinstance(result, KnapsackCertificate):
        if output_format == "json":
            return result.model_dump_json(indent=2) + "\n"
        if output_format == "csv":
            return _csv(
                ["partition", "distinct_sums", "capacity", "is_knapsack"],
                [(result.partition, result.distinct_sums, result.capacity, result.is_knapsack)],
            )
        return format_certificate(result.model_dump())
    if isinstance(result, KnapsackCensus):
        if output_format == "json":
            return result.model_dump_json(indent=2) + "\n"
        rows = [(row.partition, row.distinct_sums, row.capacity, row.is_knapsack) for row in result.rows]
        if output_format == "csv":
            return _csv(["partition", "distinct_sums", "capacity", "is_knapsack"], rows)
        table = render_table(
            f"Partitions of {result.n}", ["partition", "distinct sums", "capacity", "knapsack"], rows
        )
        return table + f"{result.count} knapsack partition(s) of {result.n}\n"
    if isinstance(result, VSet):
        keys = result.keys()
        if output_format == "json":
            document = {"lambda": list(result.parts), "m": result.pointed, "members": keys}
            return json.dumps(document, indent=2) + "\n"
        if output_format == "csv":
            return _csv(["composition"], [(key,) for key in keys])
        label = ",".join(map(str, result.parts))
        return format_composition_list(f"V({label} | {result.pointed})", keys)
    if isinstance(result, VerificationSummary):
        return _render_verification(result, output_format)
    raise InvalidInput(f"cannot render {type(result).__name__}")


def _exit_status(result: Any) -> int:
    if isinstance(result, MobiusReport) and not result.agree:
        return Disagreement.exit_code
    if isinstance(result, VerificationSummary) and not result.passed:
        return Disagreement.exit_code
    return 0


# -- argument parsing -------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--log-level",
        choices=["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"],
        default="WARNING",
        help="Logging level (default: WARNING)",
    )
    common.add_argument("--bounds", help="Size bound overrides, e.g. 'pi_max=8,c_max=12'")
    common.add_argument(
        "--format",
        dest="output_format",
        choices=["text", "json", "csv", "dot"],
        default="text",
        help="Output format (default: text)",
    )
    common.add_argument("--seed", type=int, default=0, help="Seed for randomized checks (default: 0)")

    parser = argparse.ArgumentParser(
        prog="pointed-mobius",
        description="Möbius functions of type-restricted pointed set partition posets",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    mu = commands.add_parser("mu", parents=[common], help="Möbius value of a filter")
    mu.add_argument("--n", type=int, required=True, help="Ground size n")
    mu.add_argument(
        "--generators",
        action="append",
        help="Pointed partition 'a,b|m' generating the filter (repeat or separate with ';')",
    )
    mu.add_argument("--max-parts", type=int, help="Filter of pointed partitions with at most K parts")
    mu.add_argument("--r", type=int, help="Block size r of the r-divisible filter")
    mu.add_argument("--m", type=int, help="Pointed part m of the r-divisible filter")

    beta_parser = commands.add_parser("beta", parents=[common], help="Descent statistic beta")
    beta_parser.add_argument("--composition", required=True, help="Pointed composition 'c1,c2|ck'")
    beta_parser.add_argument(
        "--witnesses", action="store_true", help=f"List the permutations (n <= {WITNESS_MAX_N})"
    )

    knapsack = commands.add_parser("knapsack", parents=[common], help="Knapsack recognition or census")
    group = knapsack.add_mutually_exclusive_group(required=True)
    group.add_argument("--lambda", dest="lambda_text", help="Partition literal 'a,b,c'")
    group.add_argument("--census", type=int, help="Recognize every partition of N")
    knapsack.add_argument("--m", type=int, help="Pointed part carried into the certificate")

    vset = commands.add_parser("vset", parents=[common], help="Distinct-summand compositions V")
    vset.add_argument("--lambda", dest="lambda_text", required=True, help="Knapsack partition 'a,b,c'")
    vset.add_argument("--m", type=int, required=True, help="Pointed part")

    verify = commands.add_parser("verify", parents=[common], help="Run verification suites")
    verify.add_argument("--only", action="append", choices=sorted(SUITES), help="Suite to run (repeatable)")
    verify.add_argument("--n-max", type=int, help="Size ceiling for every selected suite")

    export = commands.add_parser("export", parents=[common], help="Export a poset")
    export.add_argument("--poset", choices=["I", "Pi", "C", "Q", "R"], required=True, help="Poset kind")
    export.add_argument("--n", type=int, help="Ground size for I, Pi and C")
    export.add_argument("--p", type=int, help="Number of points for Q")
    export.add_argument("--lambda", dest="lambda_text", help="Partition for R (and face colors)")
    export.add_argument("--generators", action="append", help="Restrict Pi or C to this filter")
    export.add_argument("--max-parts", type=int, help="Restrict Pi or C to at most K parts")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> None:
    """Main entry point with command-line argument support."""
    parser = build_parser()
    args = parser.parse_args(argv)

    logging.basicConfig(
        level=getattr(logging, args.log_level),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        stream=sys.stderr,
    )

    try:
        config = RunConfig.from_args(args)
        if config.bounds:
            set_bounds(Bounds.from_env().with_overrides(config.bounds))
        result = COMMANDS[config.command](config)
        sys.stdout.write(render(result, config.output_format))
    except PointedMobiusError as e:
        logging.error(f"{type(e).__name__}: {e}")
        sys.exit(e.exit_code)

    status = _exit_status(result)
    if status:
        logging.error(f"{config.command} finished with disagreements")
        sys.exit(status)


if __name__ == "__main__":
    main()
