"""Table rendering tests, including reproduction of the published tables."""

import re

import pytest

from isochrono.errors import InvalidInputError
from isochrono.evaluation import Flag, SystemReport
from isochrono.report import (
    TableSpec,
    display_number,
    render_ranking,
    render_table,
    round_half_up,
)

from conftest import report_from_row, reports_from_table


class TestRounding:
    @pytest.mark.parametrize("value,expected", [
        (3.2636, 3.26), (2.7956, 2.80), (2.295, 2.30), (2.5425, 2.54),
        (3.0016, 3.00), (-1.005, -1.01),
    ])
    def test_half_up(self, value, expected):
        assert round_half_up(value) == pytest.approx(expected)

    @pytest.mark.parametrize("value,expected", [
        (2.9, "2.9"), (2.90, "2.9"), (3.0016, "3"), (3.26, "3.26"),
        (4.0, "4"), (0.18, "0.18"), (0.4, "0.4"), (0.0, "0"),
    ])
    def test_display_trims_zeros(self, value, expected):
        assert display_number(value) == expected


def spec_for(target: str, **kwargs) -> TableSpec:
    return TableSpec(language_pair=("en", target), **kwargs)


def bold_cells(markdown: str) -> dict[str, list[int]]:
    """Map system name -> column indexes (0=I,1=Q,2=A) that are bolded."""
    out = {}
    for line in markdown.splitlines()[2:]:
        cells = [c.strip() for c in line.strip("|").split("|")]
        name, values = cells[0], cells[1:]
        out[name] = [i for i, v in enumerate(values) if v.startswith("**")]
    return out


class TestRenderTable:
    def test_single_report_all_bold(self, leaderboard_tables):
        report = report_from_row(leaderboard_tables["zh"][1], "zh")  # Aya23
        table = render_table([report], spec_for("zh"))
        assert bold_cells(table)["Aya23"] == [0, 1, 2]

    def test_dash_row(self):
        report = SystemReport(system_name="CUNI-DS", language_pair=("en", "de"),
                              aggregate=None, coverage=0.0,
                              flags={Flag.NO_SUBMISSION})
        table = render_table([report], spec_for("de"))
        assert "| CUNI-DS | - | - | - |" in table

    def test_dash_count_matches_absent_reports(self, leaderboard_tables):
        reports = reports_from_table(leaderboard_tables["de"], "de")
        table = render_table(reports, spec_for("de"))
        n_absent = sum(1 for r in reports if r.aggregate is None)
        dash_cells = sum(line.count("| - ") for line in table.splitlines())
        assert dash_cells == 3 * n_absent

    def test_mixed_pairs_rejected(self, leaderboard_tables):
        de = report_from_row(leaderboard_tables["de"][1], "de")
        with pytest.raises(InvalidInputError, match="mixed"):
            render_table([de], spec_for("zh"))

    def test_margin_rule_reproduces_published_de_icm_bolding(self, leaderboard_tables):
        reports = reports_from_table(leaderboard_tables["de"], "de")
        table = render_table(reports, spec_for("de", bold_margin_icm=0.03))
        bolded_i = {name for name, cols in bold_cells(table).items() if 0 in cols}
        expected = {row["system"] for row in leaderboard_tables["de"]
                    if "I" in row.get("bold", [])}
        # the published table leaves TSU-HITs (I=0.34, degenerate quality)
        # unbolded even though it sits inside the margin; the margin rule is
        # a heuristic and does not encode that editorial exception
        assert bolded_i == expected | {"TSU-HITs"}

    def test_published_values_reproduced(self, leaderboard_tables):
        # the printed I and Q match exactly; A re-derives within the
        # rounding tolerance of the printed value
        for target, rows in leaderboard_tables.items():
            reports = reports_from_table(rows, target)
            table = render_table(reports, spec_for(target))
            lines = {line.split("|")[1].strip(): line
                     for line in table.splitlines()[2:]}
            for row in rows:
                if "i" not in row:
                    continue
                cells = [c.strip().strip("*")
                         for c in lines[row["system"]].strip("|").split("|")[1:]]
                assert float(cells[0]) == pytest.approx(row["i"])
                assert float(cells[1]) == pytest.approx(row["q"])
                assert float(cells[2]) == pytest.approx(row["a"], abs=0.011)

    def test_printed_numbers_reparse_close(self, leaderboard_tables):
        reports = reports_from_table(leaderboard_tables["ru"], "ru")
        table = render_table(reports, spec_for("ru"))
        by_name = {r.system_name: r for r in reports}
        for line in table.splitlines()[2:]:
            cells = [c.strip().strip("*") for c in line.strip("|").split("|")]
            report = by_name[cells[0]]
            if report.aggregate is None:
                continue
            assert abs(float(cells[1]) - report.aggregate.mean_icm) <= 0.005 + 1e-9
            assert abs(float(cells[2]) - report.aggregate.mean_qe) <= 0.005 + 1e-9
            assert abs(float(cells[3]) - report.aggregate.aicm_from_means) <= 0.005 + 1e-9

    def test_latex_format(self, leaderboard_tables):
        reports = reports_from_table(leaderboard_tables["zh"][:4], "zh")
        table = render_table(reports, spec_for("zh"), format="latex")
        assert table.startswith("\\begin{tabular}{|l|c|c|c|}")
        assert "\\textbf{" in table
        assert table.rstrip().endswith("\\end{tabular}")

    def test_byte_identical_across_runs(self, leaderboard_tables):
        reports = reports_from_table(leaderboard_tables["es"], "es")
        a = render_table(reports, spec_for("es"))
        b = render_table(list(reports), spec_for("es"))
        assert a == b

    def test_explicit_bold_override(self, leaderboard_tables):
        reports = reports_from_table(leaderboard_tables["zh"], "zh")
        override = {"I": {"GPT-4"}}
        table = render_table(reports, spec_for("zh", bold_overrides=override))
        bolded_i = {name for name, cols in bold_cells(table).items() if 0 in cols}
        assert bolded_i == {"GPT-4"}


class TestRenderRanking:
    def test_order_matches_rank_systems(self, leaderboard_tables):
        from isochrono.evaluation import rank_systems

        reports = reports_from_table(leaderboard_tables["zh"], "zh")
        ranking = render_ranking(reports)
        names = [line.strip("|").split("|")[1].strip()
                 for line in ranking.splitlines()[2:]]
        assert names == [r.system_name for r in rank_systems(reports)]

    def test_empty_list_header_only(self):
        ranking = render_ranking([])
        assert len(ranking.splitlines()) == 2

    def test_flags_column(self, leaderboard_tables):
        reports = reports_from_table(leaderboard_tables["es"], "es")
        by_name = {r.system_name: r for r in reports}
        by_name["TSU-HITs"].flags |= {Flag.LOW_QUALITY, Flag.SUSPECT_TRUNCATION}
        ranking = render_ranking(reports)
        row = next(line for line in ranking.splitlines() if "TSU-HITs" in line)
        assert "LOW_QUALITY,SUSPECT_TRUNCATION" in row
