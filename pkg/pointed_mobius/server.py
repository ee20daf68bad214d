"""MCP server exposing the Möbius computations as conversational tools.

Each tool returns human-readable text built with ``text_formatting``; input
or bound errors come back as an error report instead of an exception.
"""

import logging
from typing import List

from fastmcp import FastMCP

from .exceptions import PointedMobiusError
from .knapsack import build_V, census, is_knapsack
from .perm_stats import beta
from .pointed_structures import (
    parse_partition,
    parse_pointed_composition,
    parse_pointed_partition,
    type_filter,
)
from .text_formatting import (
    format_bullet_list,
    format_certificate,
    format_composition_list,
    format_header,
    format_mobius_report,
    render_table,
)
from .theorems import compare_methods
from .verification import run_verification

# Initialize FastMCP server
mcp = FastMCP("Pointed Partition Mobius")


def _error_report(title: str, error: Exception, hints: List[str]) -> str:
    response = format_header(title)
    response += "❌ Error: computation failed\n"
    response += f"Details: {error}\n\n"
    response += "Troubleshooting:\n"
    response += format_bullet_list(hints) + "\n"
    return response


@mcp.tool()
def mobius_of_filter(n: int, generators: List[str]) -> str:
    """Möbius value of the filter of pointed integer partitions of n generated by ``generators``.

    Generators use the form ``"a,b,c|m"``. The value is computed by brute
    force, by the descent formula and, for a single knapsack generator, by
    the knapsack closed form.
    """
    try:
        generated = type_filter(n, [parse_pointed_partition(text) for text in generators])
        return format_mobius_report(compare_methods(n, generated).to_dict())
    except PointedMobiusError as e:
        logging.error(f"Failed to compute the Möbius value for n={n}, {generators}: {e}")
        return _error_report(
            f"Möbius function of the filter (n = {n})",
            e,
            [
                "Write generators as 'a,b,c|m' with parts summing to n together with m",
                "Use at least one generator",
                "Lower n if a size bound was exceeded",
            ],
        )


@mcp.tool()
def descent_beta(composition: str) -> str:
    """Number of permutations whose descent set is the partial-sum set of a pointed composition ``"c1,c2|ck"``."""
    try:
        c = parse_pointed_composition(composition)
        return f"beta({c.key}) = {beta(c)}\n"
    except PointedMobiusError as e:
        logging.error(f"Failed to compute beta({composition}): {e}")
        return _error_report(
            f"beta({composition})", e, ["Write the composition as 'c1,c2|ck' with positive c1..c(k-1)"]
        )


@mcp.tool()
def knapsack_certificate(partition: str) -> str:
    """Decide whether a partition ``"a,b,c"`` is a knapsack partition, with a collision witness if not."""
    try:
        return format_certificate(is_knapsack(parse_partition(partition)).model_dump())
    except PointedMobiusError as e:
        logging.error(f"Failed knapsack recognition for {partition}: {e}")
        return _error_report(
            f"Knapsack recognition for {{{partition}}}", e, ["Write the partition as 'a,b,c' with positive parts"]
        )


@mcp.tool()
def knapsack_census(n: int) -> str:
    """List the knapsack partitions of n."""
    try:
        result = census(n)
        rows = [(row.partition, row.distinct_sums) for row in result.knapsack_rows]
        return render_table(f"Knapsack partitions of {n}", ["partition", "distinct sums"], rows)
    except PointedMobiusError as e:
        logging.error(f"Failed knapsack census for n={n}: {e}")
        return _error_report(f"Knapsack partitions of {n}", e, ["Use a non-negative n within census_max"])


@mcp.tool()
def knapsack_vset(partition: str, pointed: int) -> str:
    """Compositions with last entry ``pointed`` whose other entries split a knapsack partition into distinct-valued blocks."""
    try:
        vset = build_V(parse_partition(partition), pointed)
        return format_composition_list(f"V({partition} | {pointed})", vset.keys())
    except PointedMobiusError as e:
        logging.error(f"Failed to build V({partition}, {pointed}): {e}")
        return _error_report(
            f"V({partition} | {pointed})",
            e,
            ["The partition must be a knapsack partition", "The pointed part must be non-negative"],
        )


@mcp.tool()
def verify_suites(n_max: int = 5) -> str:
    """Run every verification suite up to ``n_max`` and summarize the outcome."""
    try:
        summary = run_verification(None, n_max, 0)
    except PointedMobiusError as e:
        logging.error(f"Verification failed to run: {e}")
        return _error_report("Verification", e, ["Use a positive n_max"])
    rows = [
        (suite.name, suite.n_max, suite.checks, len(suite.failures), "pass" if suite.passed else "FAIL")
        for suite in summary.suites
    ]
    response = render_table("Verification", ["suite", "n_max", "checks", "failures", "status"], rows)
    response += "✅ all suites passed\n" if summary.passed else "❌ some suites failed\n"
    return response


def main() -> None:
    """Main entry point for the MCP server."""
    # Configure logging
    logging.basicConfig(level=logging.INFO)

    # Run the FastMCP server
    mcp.run()


if __name__ == "__main__":
    main()
