# app/render.py
"""
app/render.py

Terminal rendering utilities using rich.

This module keeps all CLI presentation concerns in one place.

We render:
- header panel
- experiment parameters
- pandas result tables
- pass/fail verdicts

All printing is done via Rich's Console. Artifacts on disk never depend on what is rendered here.
"""

from __future__ import annotations

import logging
from typing import Any, Mapping

import pandas as pd
from rich.console import Console
from rich.panel import Panel
from rich.table import Table
from rich.text import Text

logger = logging.getLogger(__name__)
console = Console()


def render_header(title: str) -> None:
    """
    Prints a simple header panel at startup.
    """
    panel = Panel.fit(Text(title, style="bold"), title="Lab", border_style="cyan")
    console.print(panel)
    logger.info("Rendered header: %s", title)


def render_params_panel(command: str, params: Mapping[str, Any], output_dir: str) -> None:
    """
    Prints the validated parameters of the experiment about to run.
    """
    lines = [f"[bold]{command}[/bold]"]
    lines.extend(f"- {key}: {value}" for key, value in sorted(params.items()))
    lines.append(f"\n[bold]Output[/bold]\n- {output_dir}")
    console.print(Panel("\n".join(lines), title="Experiment", border_style="green"))
    logger.info("Rendered params panel for %s (%d params)", command, len(params))


def _format_cell(value: Any) -> str:
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)


def _df_to_rich_table(df: pd.DataFrame, *, title: str, max_rows: int = 20) -> Table:
    """
    Convert a pandas DataFrame into a Rich Table.

    - Limits rows to avoid flooding the terminal.
    - Floats are shown with 6 significant digits; the CSV keeps full precision.
    """
    table = Table(title=title, show_lines=False)
    for col in df.columns:
        table.add_column(str(col))

    safe_df = df.head(max_rows)
    for _, row in safe_df.iterrows():
        table.add_row(*[_format_cell(v) for v in row.values])

    if len(df) > max_rows:
        table.caption = f"Showing first {max_rows} of {len(df)} rows"
    return table


def render_dataframe_table(df: pd.DataFrame, *, title: str = "Result table", max_rows: int = 20) -> None:
    """
    Renders a result table to the terminal.
    Falls back to a message if the dataframe is empty.
    """
    if df is None or len(df) == 0:
        console.print(Panel("No rows to display.", title=title, border_style="yellow"))
        logger.info("Rendered empty dataframe table: %s", title)
        return

    console.print(_df_to_rich_table(df, title=title, max_rows=max_rows))
    logger.info("Rendered dataframe table: %s (rows=%d, cols=%d)", title, len(df), len(df.columns))


def render_verdicts(criteria: Mapping[str, bool], *, title: str = "Verdicts") -> None:
    table = Table(title=title)
    table.add_column("criterion")
    table.add_column("result")
    for name, ok in criteria.items():
        table.add_row(name, "[green]pass[/green]" if ok else "[red]FAIL[/red]")
    console.print(table)
    logger.info("Rendered %d verdicts (%d failing)", len(criteria), sum(not ok for ok in criteria.values()))


def render_error(message: str) -> None:
    console.print(Panel(message, title="Error", border_style="red"))
