"""
Human-readable summaries printed next to the result files
"""
from perimeter_app.commands.verification import FAIL, SKIPPED, PatternRecord, VerificationReport
from perimeter_app.lib.calibration import CalibrationReport
from perimeter_app.lib.tables import PerimeterTable, TableMode


def render_table_summary(table: PerimeterTable, wall_time: float | None = None) -> str:
    kind = "G" if table.mode is TableMode.PROPER else "g"
    label = "i" if table.mode is TableMode.PROPER else "d"
    support = table.support
    span = f"t in [{support[0]}, {support[1]}]" if support else "empty support"
    line = f"{kind}(n={table.n}, {label}={table.dimension}) [{table.provenance.value}]: total {table.total}, {span}"
    if wall_time is not None:
        line += f" ({wall_time:.3f}s)"
    return line


def render_verification(report: VerificationReport) -> str:
    lines = [f"verify n={report.n}: {'PASS' if report.passed else 'FAIL'}"]
    for check in report.checks:
        marker = {FAIL: "x", SKIPPED: "-"}.get(check.status, "+")
        lines.append(f"  [{marker}] {check.name}: {check.detail}")
        if check.counterexample:
            lines.append(f"      counterexample: {check.counterexample}")
        for name, tally in sorted(check.diagnostics.items()):
            lines.append(f"      recorded {name}: {tally}")
    return "\n".join(lines)


def render_pattern_records(n: int, records: list[PatternRecord]) -> str:
    asserted = [r for r in records if r.asserted]
    failed = [r for r in asserted if not r.match]
    recorded = [r for r in records if not r.asserted]
    lines = [
        f"verify-patterns n={n}: {len(asserted) - len(failed)}/{len(asserted)} asserted comparisons match",
        f"  recorded diagnostics: {sum(r.match for r in recorded)}/{len(recorded)} match",
    ]
    for record in failed[:10]:
        lines.append(f"  mismatch {record.check} {record.delta} {record.key}: "
                     f"formula {record.formula} vs census {record.oracle}")
    return "\n".join(lines)


def render_calibration(report: CalibrationReport) -> str:
    lines = [f"calibrate n={report.n}: oracle DX = {report.oracle.total}"]
    lines.append(f"  {len(report.survivors)} surviving coefficient set(s):")
    lines.extend(f"    {candidate.label}" for candidate in report.survivors)
    lines.append(f"  frozen set {'survives' if report.frozen_survives else 'REJECTED'}")
    return "\n".join(lines)
