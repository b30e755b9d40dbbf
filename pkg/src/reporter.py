"""Rendering of command results and verification certificates as tables, JSON, markdown or CSV."""

import json
from dataclasses import dataclass, field
from typing import Optional

import pandas as pd
from tabulate import tabulate

from .certificates import VerificationCertificate, render_value

FORMATS = ("table", "json", "markdown", "csv")

WIDTH = 100


@dataclass
class Report:
    """Output of one CLI command: scalar fields, named tables and verification certificates."""
    title: str
    seed: Optional[int] = None
    fields: dict = field(default_factory=dict)
    tables: dict = field(default_factory=dict)
    certificates: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(cert.overall for cert in self.certificates)

    def to_dict(self) -> dict:
        data = {
            "title": self.title,
            "seed": self.seed,
            "fields": {key: render_value(value) for key, value in self.fields.items()},
            "tables": {
                name: [{key: render_value(value) for key, value in row.items()} for row in rows]
                for name, rows in self.tables.items()
            },
            "notes": list(self.notes),
        }
        if self.certificates:
            data["certificates"] = [cert.to_dict() for cert in self.certificates]
            data["overall"] = "pass" if self.passed else "fail"
        return data


def checks_frame(certificates: list[VerificationCertificate]) -> pd.DataFrame:
    """One row per check across all certificates."""
    rows = []
    for cert in certificates:
        for check in cert.checks:
            row = check.to_dict()
            rows.append({
                "example": cert.example_id,
                "check": row["description"],
                "expected": _cell(row["expected"]),
                "computed": _cell(row["computed"]),
                "provenance": row["provenance"],
                "result": "PASS" if check.passed else "FAIL",
            })
    return pd.DataFrame(rows, columns=["example", "check", "expected", "computed", "provenance", "result"])


def _cell(value) -> str:
    if isinstance(value, dict):
        return ", ".join(f"{k}: {v}" for k, v in value.items()) or "{}"
    if isinstance(value, list):
        return ", ".join(str(v) for v in value)
    return str(value)


def _frame(rows: list[dict]) -> pd.DataFrame:
    return pd.DataFrame([{key: _cell(render_value(value)) for key, value in row.items()} for row in rows])


def _fields_frame(report: Report) -> pd.DataFrame:
    items = [("seed", report.seed)] if report.seed is not None else []
    items += list(report.fields.items())
    return pd.DataFrame([{"field": key, "value": _cell(render_value(value))} for key, value in items])


def render_table(report: Report) -> str:
    lines = ["=" * WIDTH, report.title.upper(), "=" * WIDTH]
    if report.seed is not None:
        lines.append(f"Seed: {report.seed}")
    if report.fields:
        rows = [[key, _cell(render_value(value))] for key, value in report.fields.items()]
        lines.append(tabulate(rows, tablefmt="grid"))
    for name, rows in report.tables.items():
        lines += ["", name.upper(), "-" * WIDTH, tabulate(_frame(rows), headers="keys", tablefmt="grid",
                                                          showindex=False)]
    for cert in report.certificates:
        frame = checks_frame([cert]).drop(columns=["example"])
        lines += ["", f"{cert.example_id}: {'PASS' if cert.overall else 'FAIL'}", "-" * WIDTH,
                  tabulate(frame, headers="keys", tablefmt="grid", showindex=False)]
        for name, rows in cert.tables.items():
            lines += ["", name, tabulate(_frame(rows), headers="keys", tablefmt="grid", showindex=False)]
        lines += [f"Note: {note}" for note in cert.notes]
    lines += [f"Note: {note}" for note in report.notes]
    if report.certificates:
        lines += ["", "=" * WIDTH, f"Overall: {'PASS' if report.passed else 'FAIL'}", "=" * WIDTH]
    return "\n".join(lines) + "\n"


def render_markdown(report: Report) -> str:
    parts = [f"# {report.title}", ""]
    if report.seed is not None or report.fields:
        parts += [_fields_frame(report).to_markdown(index=False), ""]
    for name, rows in report.tables.items():
        parts += [f"## {name}", "", _frame(rows).to_markdown(index=False), ""]
    for cert in report.certificates:
        parts += [f"## {cert.example_id}: {'PASS' if cert.overall else 'FAIL'}", "",
                  checks_frame([cert]).drop(columns=["example"]).to_markdown(index=False), ""]
        for name, rows in cert.tables.items():
            parts += [f"### {name}", "", _frame(rows).to_markdown(index=False), ""]
        parts += [f"> {note}" for note in cert.notes]
    parts += [f"> {note}" for note in report.notes]
    if report.certificates:
        parts += ["", f"**Overall: {'PASS' if report.passed else 'FAIL'}**"]
    return "\n".join(parts).rstrip() + "\n"


def render_csv(report: Report) -> str:
    """Checks when the report carries certificates; otherwise fields followed by each table."""
    if report.certificates:
        return checks_frame(report.certificates).to_csv(index=False)
    sections = []
    if report.seed is not None or report.fields:
        sections.append(_fields_frame(report).to_csv(index=False))
    for rows in report.tables.values():
        sections.append(_frame(rows).to_csv(index=False))
    return "\n".join(sections)


def render_json(report: Report) -> str:
    return json.dumps(report.to_dict(), indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def render(report: Report, fmt: str = "table") -> str:
    """
    Render a report in one of FORMATS.

    Args:
        report: Fields, tables and certificates to render
        fmt: "table" (tabulate grid), "json", "markdown" or "csv"

    Returns:
        Rendered text ending in a newline
    """
    renderers = {
        "table": render_table,
        "json": render_json,
        "markdown": render_markdown,
        "csv": render_csv,
    }
    if fmt not in renderers:
        raise ValueError(f"Unknown format {fmt!r}; expected one of {', '.join(FORMATS)}")
    return renderers[fmt](report)
