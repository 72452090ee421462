import pytest

from polarfuse.report import (
    CSV_HEADER,
    ExperimentReport,
    ReportRow,
    format_rate,
    rate_percent,
    report_from_counts,
)

# Frozen results-table fixtures the report arithmetic must reproduce exactly.
INCREMENTAL_COUNTS = [
    (13, 14), (25, 28), (38, 42), (51, 56), (65, 70), (80, 84),
    (93, 98), (105, 112), (118, 126), (132, 140), (142, 154),
]
INCREMENTAL_RATES = [
    "92.86", "89.29", "90.48", "91.07", "92.86", "95.24",
    "94.90", "93.75", "93.65", "94.29", "92.21",
]
KFOLD_COUNTS = [(67, 70), (67, 70), (63, 70)]
KFOLD_RATES = ["95.71", "95.71", "90.00"]


class TestRateFormatting:
    def test_half_up_rounding(self):
        assert format_rate(93, 98) == "94.90"  # 94.898 rounds up
        assert format_rate(13, 14) == "92.86"  # 92.857 rounds up
        assert format_rate(142, 154) == "92.21"  # 92.2078 rounds down

    def test_exact_values(self):
        assert format_rate(1, 2) == "50.00"
        assert format_rate(0, 7) == "0.00"
        assert format_rate(7, 7) == "100.00"

    def test_rate_percent_validation(self):
        with pytest.raises(ValueError):
            rate_percent(1, 0)
        with pytest.raises(ValueError):
            rate_percent(5, 4)


class TestIncrementalTableArithmetic:
    def test_rows(self):
        report = report_from_counts(INCREMENTAL_COUNTS)
        assert report.formatted_rates() == INCREMENTAL_RATES

    def test_average(self):
        report = report_from_counts(INCREMENTAL_COUNTS)
        assert report.formatted_average() == "92.77"

    def test_max(self):
        report = report_from_counts(INCREMENTAL_COUNTS)
        assert report.formatted_max() == "95.23"


class TestKfoldTableArithmetic:
    def test_rows(self):
        report = report_from_counts(KFOLD_COUNTS)
        assert report.formatted_rates() == KFOLD_RATES

    def test_average(self):
        report = report_from_counts(KFOLD_COUNTS)
        assert report.formatted_average() == "93.81"

    def test_max(self):
        report = report_from_counts(KFOLD_COUNTS)
        assert report.formatted_max() == "95.71"


class TestReportInvariants:
    def test_row_rate_consistency(self):
        report = report_from_counts(INCREMENTAL_COUNTS)
        for row, printed in zip(report.rows, report.formatted_rates()):
            assert abs(row.rate - float(printed)) <= 0.005

    def test_average_close_to_plain_mean(self):
        # summary stats use 2-decimal-truncated rates, so the deviation
        # from the plain mean is bounded by the truncation step
        report = report_from_counts(INCREMENTAL_COUNTS)
        plain_mean = sum(r.rate for r in report.rows) / len(report.rows)
        assert abs(report.average_rate - plain_mean) <= 0.01

    def test_single_row(self):
        report = report_from_counts([(10, 10)])
        assert report.formatted_rates() == ["100.00"]
        assert report.formatted_average() == "100.00"


class TestCsv:
    def test_layout(self, tmp_path):
        report = report_from_counts(
            KFOLD_COUNTS, per_class=[140, 140, 140], config_echo=[("method", "x")]
        )
        text = report.to_csv()
        lines = text.strip().split("\n")
        assert lines[0] == "# method=x"
        assert lines[1] == CSV_HEADER
        assert lines[2] == "1,70,140,67,95.71"
        assert lines[-2] == "#average,93.81"
        assert lines[-1] == "#max,95.71"

        path = tmp_path / "report.csv"
        report.write_csv(path)
        assert path.read_text() == text

    def test_table_mirror(self):
        report = report_from_counts(KFOLD_COUNTS)
        table = report.to_table()
        assert "95.71" in table and "average rate: 93.81" in table

    def test_empty_report_rejected(self):
        with pytest.raises(ValueError):
            ExperimentReport(())

    def test_row_validation(self):
        row = ReportRow(test_case=1, total=4, per_class=1, correct=3)
        assert row.rate == 75.0
