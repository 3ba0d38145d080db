"""Comparison-report assembly: one table of scaling-exponent values.

Each row carries a label, a value of the scaling exponent, a source tag and
provenance metadata (seed/config hash for computed rows, a citation tag for
literature constants), so every number in the final table is replayable or
attributable.
"""

import hashlib
import json
from dataclasses import dataclass, field

from .golden import GoldenConstants, ReferenceConstants

__all__ = ["ReportRow", "ComparisonReport", "constant_rows", "merge_reports"]

SOURCES = (
    "analytic",
    "percolation_numeric",
    "polarization_iteration",
    "polarization_mc",
    "blocklength_fit",
    "bound_lower",
    "bound_upper",
    "bound_closed_form",
    "optimal",
)


@dataclass(frozen=True)
class ReportRow:
    label: str
    mu_value: float
    source: str
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.source not in SOURCES:
            raise ValueError(f"unknown source {self.source!r}")

    def as_dict(self):
        return {
            "label": self.label,
            "mu_value": self.mu_value,
            "source": self.source,
            "provenance": self.provenance,
        }


@dataclass
class ComparisonReport:
    rows: list

    @property
    def penalty(self):
        """Excess of the analytic exponent over the optimal value of 2."""
        analytic = [r for r in self.rows if r.source == "analytic"]
        optimal = [r for r in self.rows if r.source == "optimal"]
        if not analytic or not optimal:
            raise ValueError("report needs both an analytic and an optimal row")
        return analytic[0].mu_value - optimal[0].mu_value

    def as_dict(self):
        return {
            "rows": [r.as_dict() for r in self.rows],
            "penalty": self.penalty,
        }

    def to_json(self, path):
        with open(path, "w") as fh:
            json.dump(self.as_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")


def config_hash(config):
    """Stable hash of a configuration mapping, for provenance stamps."""
    blob = json.dumps(config, sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


def constant_rows():
    """Literature and closed-form rows of the comparison table."""
    g = GoldenConstants()
    r = ReferenceConstants()
    cite = {"citation": "literature"}
    return [
        ReportRow("mu_analytic", g.mu_analytic, "analytic", {"citation": "closed-form"}),
        ReportRow("mu_optimal", r.mu_optimal, "optimal", cite),
        ReportRow("mu_numeric_percolation", 1.0 / r.beta_num, "percolation_numeric", cite),
        ReportRow("mu_lower_bound", r.mu_lower, "bound_lower", cite),
        ReportRow("mu_upper_bound", r.mu_upper, "bound_upper", cite),
        ReportRow("mu_closed_form_lower_bound", r.mu_closed_lower, "bound_closed_form", cite),
        ReportRow("mu_bmsc_upper_bound", r.mu_bmsc_upper, "bound_upper", cite),
    ]


def merge_reports(fragments):
    """Merge row fragments (lists of row dicts) with the constant rows.

    Raises
    ------
    ValueError
        On conflicting duplicate labels (same label, different value).
    """
    rows = {r.label: r for r in constant_rows()}
    for fragment in fragments:
        for d in fragment:
            row = ReportRow(d["label"], d["mu_value"], d["source"], d.get("provenance", {}))
            existing = rows.get(row.label)
            if existing is not None and existing.mu_value != row.mu_value:
                raise ValueError(f"conflicting duplicate label {row.label!r}")
            rows[row.label] = row
    return ComparisonReport(sorted(rows.values(), key=lambda r: r.label))
