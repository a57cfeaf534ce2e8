import json
from pathlib import Path

import pytest

from isochrono.evaluation import Flag, SystemReport
from isochrono.metrics import AggregateMetrics, compute_aicm

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def leaderboard_tables() -> dict:
    data = json.loads((FIXTURES / "leaderboard_tables.json").read_text(encoding="utf-8"))
    data.pop("_comment", None)
    return data


def report_from_row(row: dict, target: str) -> SystemReport:
    """Build a SystemReport from a transcribed leaderboard row. The combined
    score is recomputed from the printed I and Q; dash rows become
    NO_SUBMISSION reports."""
    pair = ("en", target)
    if "i" not in row:
        return SystemReport(system_name=row["system"], language_pair=pair,
                            aggregate=None, coverage=0.0,
                            flags={Flag.NO_SUBMISSION})
    agg = AggregateMetrics(
        mean_icm=row["i"],
        mean_qe=row["q"],
        aicm_from_means=compute_aicm(row["i"], row["q"]),
        mean_segment_aicm=compute_aicm(row["i"], row["q"]),
        n_segments=1,
    )
    return SystemReport(system_name=row["system"], language_pair=pair,
                        aggregate=agg, coverage=1.0)


def reports_from_table(rows: list[dict], target: str) -> list[SystemReport]:
    return [report_from_row(row, target) for row in rows]
