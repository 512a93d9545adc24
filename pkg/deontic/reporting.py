"""Human-readable rendering of verdicts, F tables and search reports."""

from __future__ import annotations

from typing import Iterable

from models.reports import SearchReport, Violation
from models.verdict import Verdict
from deontic.ideality import IdealFun


def _braced(labels: Iterable[str]) -> str:
    return "{" + ",".join(labels) + "}"


def format_verdicts(verdicts: Iterable[tuple[str, Verdict]]) -> list[str]:
    return [verdict.describe() for _, verdict in verdicts]


def format_ideal(f: IdealFun) -> list[str]:
    return [f"F({x}) = {fx}" for x, fx in f.rows()]


def format_violation(v: Violation) -> list[str]:
    witness = ", ".join(f"{name}={_braced(labels)}" for name, labels in v.witness.items())
    flag = "" if v.revalidated else "  [NOT re-validated]"
    lines = [f"{v.condition} fails ({v.source} #{v.candidate}) at {witness}{flag}"]
    if v.ideal is not None:
        lines.extend(
            f"    F({_braced(key.split(',') if key else [])}) = {_braced(labels)}"
            for key, labels in v.ideal.items()
        )
    return lines


def format_report(report: SearchReport) -> list[str]:
    setting = [report.mode]
    if report.seed is not None:
        setting.append(f"seed {report.seed}")
    if report.construction:
        setting.append(f"construction {report.construction}")
    if report.constraints:
        setting.append("constraints " + "+".join(report.constraints))

    counted = f"{report.candidates_examined} candidates"
    if report.targeted_examined:
        counted += f" + {report.targeted_examined} weak orders"
    lines = [
        f"{report.kind} at n={report.n} ({', '.join(setting)}): "
        f"{counted}, {report.violation_count} violations"
    ]
    if report.mode != "pairs":
        lines.append(f"  {report.candidates_satisfying} candidate(s) met the constraints")
    if report.kind.startswith("counterexample:"):
        smallest = report.smallest_witness_size
        lines.append(
            f"  smallest witnessing size: {smallest}" if smallest
            else f"  no counterexample up to n={report.n}"
        )
    if report.details:
        d = report.details
        lines.append(
            f"  {d['unordered_pairs']} generic pair(s), {d['closures']} closure(s), "
            f"largest closure {d['largest_closure']} facts"
        )
    for v in report.violations:
        lines.extend("  " + line for line in format_violation(v))
    if report.violation_count > len(report.violations):
        lines.append(f"  ... {report.violation_count - len(report.violations)} more not shown")
    if report.elapsed_ms is not None:
        lines.append(f"  elapsed {report.elapsed_ms} ms")
    return lines
