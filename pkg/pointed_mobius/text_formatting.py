"""Text formatting utilities for human-readable reports.

Centralized helpers that turn computed records (Möbius reports, knapsack
certificates, verification summaries) into plain text for the command line
and the tool server. Tables go through ``rich`` with colors disabled so the
rendered text is identical between runs.
"""

import io
from typing import Any, Dict, List, Mapping, Sequence, Tuple

from rich.console import Console
from rich.table import Table

TABLE_WIDTH = 100


def format_header(title: str, level: int = 1) -> str:
    """Format a section header.

    Args:
        title: The header title
        level: Header level (1-3)

    Returns:
        Formatted header string
    """
    if level == 1:
        return f"{title}\n{'=' * len(title)}\n"
    elif level == 2:
        return f"{title}\n{'-' * len(title)}\n"
    else:
        return f"### {title}\n"


def format_bullet_list(items: Sequence[str], bullet: str = "•") -> str:
    if not items:
        return ""
    return "\n".join(f"{bullet} {item}" for item in items)


def format_summary_table(data: Mapping[str, Any]) -> str:
    """Format key/value pairs with the keys padded to a common width."""
    if not data:
        return ""
    width = max(len(str(key)) for key in data)
    return "\n".join(f"{str(key).ljust(width)}: {value}" for key, value in data.items())


def format_notices(notices: Sequence[str]) -> str:
    if not notices:
        return ""
    return format_header("Notices", level=2) + format_bullet_list(notices, bullet="!")


def format_agreement(agree: bool) -> str:
    return "✅ all methods agree" if agree else "❌ methods disagree"


def render_table(title: str, columns: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    """Render rows as a ``rich`` table and return the text.

    Args:
        title: Caption printed above the table
        columns: Column headers
        rows: Cell values, converted with ``str``

    Returns:
        The rendered table without color codes
    """
    table = Table(title=title)
    for column in columns:
        table.add_column(column)
    for row in rows:
        table.add_row(*(str(value) for value in row))
    console = Console(
        file=io.StringIO(), width=TABLE_WIDTH, color_system=None, force_terminal=False
    )
    with console.capture() as capture:
        console.print(table)
    return capture.get()


def _dot_quote(label: str) -> str:
    escaped = label.replace("\\", "\\\\").replace('"', '\\"')
    return f'"{escaped}"'


def format_dot(
    name: str,
    layers: Sequence[Sequence[str]],
    edges: Sequence[Tuple[str, str]],
    colors: Mapping[str, str],
) -> str:
    """Render a Hasse diagram in DOT, one ``rank=same`` group per layer.

    Edges point from the covered element to the covering one; ``rankdir=BT``
    puts minimal elements at the bottom.
    """
    lines = [f"digraph {_dot_quote(name)} {{", "  rankdir=BT;", "  node [shape=box];"]
    for layer in layers:
        for label in layer:
            attributes = f' [style=filled, fillcolor="{colors[label]}"]' if label in colors else ""
            lines.append(f"  {_dot_quote(label)}{attributes};")
    for layer in layers:
        members = " ".join(_dot_quote(label) for label in layer)
        lines.append(f"  {{ rank=same; {members} }}")
    for lower, upper in edges:
        lines.append(f"  {_dot_quote(lower)} -> {_dot_quote(upper)};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def format_mobius_report(report: Dict[str, Any]) -> str:
    """Format a serialized Möbius report (see ``theorems.MobiusReport``)."""
    response = format_header(f"Möbius function of the filter (n = {report['n']})")
    response += f"Generators: {', '.join(report['generators']) or '(none)'}\n\n"
    values = {
        "brute force": report.get("bruteforce"),
        "descent formula": report.get("theorem1"),
        "knapsack closed form": report.get("knapsack"),
    }
    if "closed_form" in report:
        values["closed form"] = report["closed_form"]
    response += format_summary_table(
        {key: ("n/a" if value is None else value) for key, value in values.items()}
    )
    response += f"\n\n{format_agreement(report['agree'])}\n"
    return response


def format_certificate(certificate: Dict[str, Any]) -> str:
    """Format a serialized knapsack certificate."""
    verdict = "knapsack" if certificate["is_knapsack"] else "not knapsack"
    response = format_header(f"Knapsack recognition for {{{certificate['partition']}}}")
    response += format_summary_table(
        {
            "distinct sums": certificate["distinct_sums"],
            "capacity": certificate["capacity"],
            "verdict": verdict,
        }
    )
    collision = certificate.get("collision")
    if collision:
        left, right = collision
        response += f"\ncollision: {'+'.join(map(str, left))} = {'+'.join(map(str, right))}"
    return response + "\n"


def format_composition_list(title: str, compositions: List[str]) -> str:
    response = format_header(title, level=2)
    response += f"{len(compositions)} composition(s)\n"
    if compositions:
        response += format_bullet_list([f"({c})" for c in compositions]) + "\n"
    return response
