"""Leaderboard rendering.

Tables carry three columns per system: I (isochrony error, lower is better),
Q (quality estimate, higher is better) and A (combined, higher is better).
Values round half-up to two decimals and trim trailing zeros for display
("2.90" prints as "2.9", "3.00" as "3"). Missing submissions render as "-".

Bolding marks every value within a margin of the column's best. The margin
rule is a reverse-engineered heuristic; explicit per-column bold overrides are
supported for reproducing externally transcribed tables whose bolding does not
follow any margin of the printed values.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from decimal import ROUND_HALF_UP, Decimal

from .errors import InvalidInputError
from .evaluation import SystemReport

COLUMNS = ("I", "Q", "A")


def round_half_up(value: float, places: int = 2) -> float:
    """Decimal half-up rounding (ties away from zero in the printed digits)."""
    quantum = Decimal(1).scaleb(-places)
    return float(Decimal(str(value)).quantize(quantum, rounding=ROUND_HALF_UP))


def display_number(value: float) -> str:
    """Round to two decimals, then trim trailing zeros ("3.00" -> "3")."""
    text = f"{round_half_up(value):.2f}"
    return text.rstrip("0").rstrip(".") or "0"


@dataclass
class TableSpec:
    language_pair: tuple[str, str]
    bold_margin_icm: float = 0.03
    bold_margin_q_a: float = 0.02
    sort: str = "alphabetical"  # or "by_aicm"
    # Explicit bold sets per column ({"I": {...system names...}}); when a
    # column is present here, the margin rule is bypassed for it.
    bold_overrides: dict[str, set[str]] = field(default_factory=dict)

    def __post_init__(self):
        if self.bold_margin_icm < 0 or self.bold_margin_q_a < 0:
            raise InvalidInputError("bold margins must be >= 0")
        if self.sort not in ("alphabetical", "by_aicm"):
            raise InvalidInputError("sort must be 'alphabetical' or 'by_aicm'")


def _values(report: SystemReport) -> tuple[float, float, float] | None:
    if report.aggregate is None:
        return None
    agg = report.aggregate
    return (round_half_up(agg.mean_icm), round_half_up(agg.mean_qe),
            round_half_up(agg.aicm_from_means))


def _bold_sets(reports: list[SystemReport], spec: TableSpec) -> dict[str, set[str]]:
    """Which system names get bolded per column, on rounded display values."""
    scored = [(r.system_name, _values(r)) for r in reports if r.aggregate is not None]
    sets: dict[str, set[str]] = {}
    for idx, column in enumerate(COLUMNS):
        if column in spec.bold_overrides:
            sets[column] = set(spec.bold_overrides[column])
            continue
        if not scored:
            sets[column] = set()
            continue
        margin = spec.bold_margin_icm if column == "I" else spec.bold_margin_q_a
        column_values = [vals[idx] for _, vals in scored]
        if column == "I":
            best = min(column_values)
            sets[column] = {name for name, vals in scored
                            if vals[idx] <= best + margin + 1e-9}
        else:
            best = max(column_values)
            sets[column] = {name for name, vals in scored
                            if vals[idx] >= best - margin - 1e-9}
    return sets


def _sorted_reports(reports: list[SystemReport], spec: TableSpec) -> list[SystemReport]:
    if spec.sort == "alphabetical":
        return sorted(reports, key=lambda r: r.system_name)
    from .evaluation import rank_systems

    return rank_systems(reports)


def _cells(report: SystemReport, bold: dict[str, set[str]], embolden) -> list[str]:
    vals = _values(report)
    if vals is None:
        return ["-", "-", "-"]
    cells = []
    for column, value in zip(COLUMNS, vals):
        text = display_number(value)
        if report.system_name in bold[column]:
            text = embolden(text)
        cells.append(text)
    return cells


def render_table(reports: list[SystemReport], spec: TableSpec,
                 format: str = "markdown") -> str:
    """Render one language pair's leaderboard as markdown or LaTeX."""
    pairs = {r.language_pair for r in reports}
    if pairs - {spec.language_pair}:
        raise InvalidInputError(
            f"mixed language pairs: expected {spec.language_pair}, got {sorted(pairs)}"
        )
    _, tgt = spec.language_pair
    ordered = _sorted_reports(reports, spec)
    bold = _bold_sets(reports, spec)

    if format == "markdown":
        lines = [f"| Model | {tgt}-I | {tgt}-Q | {tgt}-A |",
                 "|---|---|---|---|"]
        for report in ordered:
            cells = _cells(report, bold, lambda s: f"**{s}**")
            lines.append("| " + " | ".join([report.system_name] + cells) + " |")
        return "\n".join(lines) + "\n"
    if format == "latex":
        lines = [
            r"\begin{tabular}{|l|c|c|c|}",
            r"\hline",
            rf"Model & {tgt}-I & {tgt}-Q & {tgt}-A \\",
            r"\hline",
        ]
        for report in ordered:
            cells = _cells(report, bold, lambda s: rf"\textbf{{{s}}}")
            name = report.system_name.replace("_", r"\_")
            lines.append(" & ".join([name] + cells) + r"\\")
        lines += [r"\hline", r"\end{tabular}"]
        return "\n".join(lines) + "\n"
    raise InvalidInputError(f"unknown format {format!r}")


def render_ranking(reports: list[SystemReport], format: str = "markdown") -> str:
    """Descending-A ranking with coverage and flags."""
    from .evaluation import rank_systems

    ordered = rank_systems(reports)
    rows = []
    for rank, report in enumerate(ordered, start=1):
        vals = _values(report)
        cells = ["-", "-", "-"] if vals is None else [display_number(v) for v in vals]
        flags = ",".join(sorted(f.value for f in report.flags)) or "-"
        rows.append([str(rank), report.system_name, *cells,
                     f"{report.coverage:.2f}", flags])
    header = ["Rank", "Model", "I", "Q", "A", "Coverage", "Flags"]
    if format == "markdown":
        lines = ["| " + " | ".join(header) + " |",
                 "|" + "---|" * len(header)]
        lines += ["| " + " | ".join(row) + " |" for row in rows]
        return "\n".join(lines) + "\n"
    if format == "latex":
        lines = [
            r"\begin{tabular}{|r|l|c|c|c|c|l|}",
            r"\hline",
            " & ".join(header) + r" \\",
            r"\hline",
        ]
        lines += [" & ".join(c.replace("_", r"\_") for c in row) + r"\\" for row in rows]
        lines += [r"\hline", r"\end{tabular}"]
        return "\n".join(lines) + "\n"
    raise InvalidInputError(f"unknown format {format!r}")
