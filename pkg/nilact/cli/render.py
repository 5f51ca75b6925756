"""
Text output. Reports render as

    check=<id> instance=<name> outcome=<pass|fail|na> label="<label>" key=value ... digest=<hex>
      witness key=value

with the witness block present only on failures; --json emits the same
records as JSON lines instead.
"""
import json
import re
from typing import Any, Iterable, Iterator

from ..models.group import GroupTable, Subgroup
from ..models.series import SeriesReport
from ..schemas.report import VerificationReport

_BARE = re.compile(r"[^\s\"'=]+")


def format_value(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, float)):
        return str(value)
    if value is None:
        return "none"
    if isinstance(value, (list, dict)):
        return json.dumps(value, separators=(",", ":"), sort_keys=isinstance(value, dict))
    text = str(value)
    return text if _BARE.fullmatch(text) else json.dumps(text)


def pairs(values: dict[str, Any]) -> str:
    return " ".join(f"{k}={format_value(v)}" for k, v in values.items())


def render_report(report: VerificationReport, timings: bool = False) -> list[str]:
    head = f"check={report.check} instance={format_value(report.instance)} outcome={report.outcome.value}"
    if report.label:
        head += f" label={format_value(report.label)}"
    if report.details:
        head += " " + pairs(report.details)
    if timings and report.wall_time is not None:
        head += f" time={report.wall_time:.4f}"
    head += f" digest={report.entry_hash_hex[:16]}"
    lines = [head]
    for key, value in (report.witness or {}).items():
        lines.append(f"  witness {key}={format_value(value)}")
    return lines


def render_reports(reports: Iterable[VerificationReport], as_json: bool = False, timings: bool = False) -> Iterator[str]:
    for report in reports:
        if as_json:
            yield report.model_dump_json(exclude=None if timings else {"wall_time"})
        else:
            yield from render_report(report, timings)


def subgroup_line(H: Subgroup) -> str:
    return f"order={H.order} elements={format_value(H.labels())}"


def render_series(name: str, series: SeriesReport) -> list[str]:
    lines = [f"series={name} verdict={format_value(str(series.verdict))} orders={format_value(series.orders())}"]
    for n, term in enumerate(series.terms):
        lines.append(f"  term={n} {subgroup_line(term)}")
    return lines


def render_group(G: GroupTable) -> str:
    return f"group={format_value(G.name or 'G')} order={G.order} abelian={format_value(G.is_abelian)}"
