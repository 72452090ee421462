"""Recognition-rate reports.

Rate per row: 100 * correct / total. Display rounds to 2 decimals, halves
away from zero. The summary statistics (average, max) are computed over the
row rates truncated at 2 decimals: that is the only arithmetic that
reproduces the published-table averages this code is checked against, and
it never differs from the plain mean by more than 0.01.

All display arithmetic is integer-exact (cents of a percent), so formatting
never suffers float representation artifacts.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import IoFailure

CSV_HEADER = "test_case,total,per_class,correct,rate_percent"


def rate_percent(correct: int, total: int) -> float:
    """Exact recognition rate 100*correct/total."""
    if total <= 0:
        raise ValueError(f"total must be positive, got {total}")
    if not (0 <= correct <= total):
        raise ValueError(f"correct={correct} outside [0, {total}]")
    return 100.0 * correct / total


def _halfup_cents(correct: int, total: int) -> int:
    """100*correct/total rounded half-up at 2 decimals, in integer cents."""
    return (2 * 10_000 * correct + total) // (2 * total)


def _trunc_cents(correct: int, total: int) -> int:
    """100*correct/total truncated at 2 decimals, in integer cents."""
    return (10_000 * correct) // total


def format_rate(correct: int, total: int) -> str:
    """Row rate with exactly 2 decimals, halves rounded away from zero."""
    cents = _halfup_cents(correct, total)
    return f"{cents // 100}.{cents % 100:02d}"


def _format_cents(cents: int) -> str:
    return f"{cents // 100}.{cents % 100:02d}"


@dataclass(frozen=True)
class ReportRow:
    test_case: int
    total: int
    per_class: int
    correct: int

    @property
    def rate(self) -> float:
        return rate_percent(self.correct, self.total)


@dataclass(frozen=True)
class ExperimentReport:
    rows: tuple[ReportRow, ...]
    config_echo: tuple[tuple[str, str], ...] = field(default_factory=tuple)

    def __post_init__(self):
        if not self.rows:
            raise ValueError("report needs at least one row")

    @property
    def average_rate(self) -> float:
        """Mean of the 2-decimal-truncated row rates."""
        cents = [_trunc_cents(r.correct, r.total) for r in self.rows]
        return sum(cents) / len(cents) / 100.0

    @property
    def max_rate(self) -> float:
        """Largest 2-decimal-truncated row rate."""
        return max(_trunc_cents(r.correct, r.total) for r in self.rows) / 100.0

    def _average_cents(self) -> int:
        s = sum(_trunc_cents(r.correct, r.total) for r in self.rows)
        n = len(self.rows)
        return (2 * s + n) // (2 * n)

    def _max_cents(self) -> int:
        return max(_trunc_cents(r.correct, r.total) for r in self.rows)

    def formatted_rates(self) -> list[str]:
        return [format_rate(r.correct, r.total) for r in self.rows]

    def formatted_average(self) -> str:
        return _format_cents(self._average_cents())

    def formatted_max(self) -> str:
        return _format_cents(self._max_cents())

    def to_csv(self) -> str:
        lines = [f"# {key}={value}" for key, value in self.config_echo]
        lines.append(CSV_HEADER)
        for r in self.rows:
            lines.append(
                f"{r.test_case},{r.total},{r.per_class},{r.correct},"
                f"{format_rate(r.correct, r.total)}"
            )
        lines.append(f"#average,{self.formatted_average()}")
        lines.append(f"#max,{self.formatted_max()}")
        return "\n".join(lines) + "\n"

    def to_table(self) -> str:
        """Human-readable mirror of the CSV."""
        widths = (9, 8, 9, 8, 8)
        header = ("test_case", "total", "per_class", "correct", "rate")
        lines = [" ".join(h.rjust(w) for h, w in zip(header, widths))]
        for r in self.rows:
            cells = (
                str(r.test_case),
                str(r.total),
                str(r.per_class),
                str(r.correct),
                format_rate(r.correct, r.total),
            )
            lines.append(" ".join(c.rjust(w) for c, w in zip(cells, widths)))
        lines.append(f"average rate: {self.formatted_average()}")
        lines.append(f"max rate:     {self.formatted_max()}")
        return "\n".join(lines)

    def write_csv(self, path) -> None:
        try:
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(self.to_csv())
        except OSError as exc:
            raise IoFailure(f"cannot write {path}: {exc}") from exc


def report_from_counts(counts, per_class=None, config_echo=()) -> ExperimentReport:
    """Build a report from a list of (correct, total) count pairs."""
    rows = []
    for i, (correct, total) in enumerate(counts, start=1):
        pc = per_class[i - 1] if per_class is not None else 0
        rows.append(ReportRow(test_case=i, total=total, per_class=pc, correct=correct))
    return ExperimentReport(tuple(rows), tuple(config_echo))
