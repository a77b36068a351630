"""
Formula-versus-enumeration checks.

Every check reports pass, fail or skipped (when its enumeration is refused by the budget) and,
on failure, the smallest counterexample it met.
"""
import random
from collections.abc import Callable
from dataclasses import asdict, dataclass, field
from fractions import Fraction

from perimeter_app.commands.views.constants import (
    CHECK_BIJECTION,
    CHECK_EXPANSION,
    CHECK_G1_TOTAL,
    CHECK_G2,
    CHECK_GOLDEN,
    CHECK_PATTERNS,
    CHECK_PERIMETER_LAWS,
    CHECK_TREE_CENSUS,
    EXPANSION_MAX_D,
)
from perimeter_app.lib.assembler import ProperFamily, expand, invert, invert_family
from perimeter_app.lib.core_math import degree_sequences
from perimeter_app.lib.enumerator import enumerate_g, enumerate_proper, iter_polycubes
from perimeter_app.lib.errors import BudgetExceededError, PerimeterAppError
from perimeter_app.lib.labeled_trees import (
    PatternKind,
    count_trees,
    decode,
    encode,
    iter_codes,
    merged_census,
    outgoing_labels,
    random_code,
)
from perimeter_app.lib.logger import get_logger
from perimeter_app.lib.pattern_counts import (
    count_free,
    count_xx,
    count_xyx_total,
    count_xyzx,
    xx_classes,
    xyx_printed_groups,
    xyx_unordered_slices,
    xyzx_printed_groups,
    xyzx_printed_total,
)
from perimeter_app.lib.perimeter_laws import tree_perimeters
from perimeter_app.lib.proper_counts import G2_MIN_N, g1, g2, proper_tree_total
from perimeter_app.lib.settings import merged_tree_limit

logger = get_logger()

PASS, FAIL, SKIPPED = "pass", "fail", "skipped"
EXHAUSTIVE_CODE_LIMIT = 7
RANDOM_CODES = 2_000


@dataclass
class CheckResult:
    name: str
    status: str
    detail: str
    counterexample: dict | None = None
    diagnostics: dict = field(default_factory=dict)


@dataclass
class VerificationReport:
    n: int
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(check.status != FAIL for check in self.checks)

    def to_dict(self) -> dict:
        return {"n": self.n, "passed": self.passed, "checks": [asdict(check) for check in self.checks]}


@dataclass(frozen=True)
class PatternRecord:
    check: str
    delta: str
    key: str
    formula: str
    oracle: str
    match: bool
    asserted: bool = True


def _passed(name: str, detail: str, **diagnostics) -> CheckResult:
    return CheckResult(name, PASS, detail, diagnostics=diagnostics)


def _failed(name: str, detail: str, counterexample: dict) -> CheckResult:
    return CheckResult(name, FAIL, detail, counterexample)


def _run(name: str, check: Callable[[], CheckResult]) -> CheckResult:
    try:
        result = check()
    except BudgetExceededError as e:
        logger.warning("Check %s skipped: %s", name, e)
        return CheckResult(name, SKIPPED, str(e))
    except PerimeterAppError as e:
        return _failed(name, f"{type(e).__name__}: {e}", {})
    logger.info("Check %s: %s", name, result.status)
    return result


def _table_check(name: str, label: str, got: dict, expected: dict) -> CheckResult:
    if got == expected:
        return _passed(name, f"{label} matches")
    first = min(set(got) ^ set(expected) | {t for t in got if got.get(t) != expected.get(t)})
    return _failed(name, f"{label} differs", {"t": first, "got": str(got.get(first, 0)),
                                               "expected": str(expected.get(first, 0))})


def check_golden() -> CheckResult:
    expected = {
        "g1(4)": ({15: 8, 16: 24}, g1(4).counts),
        "G(4)^(2)": ({8: 9, 9: 8}, enumerate_proper(4, 2).proper_table(4, 2).counts),
        "G(4)^(1)": ({2: 1}, enumerate_proper(4, 1).proper_table(4, 1).counts),
    }
    for label, (want, got) in expected.items():
        if got != want:
            return _failed(CHECK_GOLDEN, f"{label} is {got}", {"table": label, "expected": str(want)})
    family = ProperFamily(4, {1: enumerate_proper(4, 1).proper_table(4, 1),
                              2: enumerate_proper(4, 2).proper_table(4, 2), 3: g1(4)})
    a3 = expand(family, 3).total
    if a3 != 86:
        return _failed(CHECK_GOLDEN, f"A_3(4) from the n=4 family is {a3}", {"d": 3, "expected": "86"})
    return _passed(CHECK_GOLDEN, "n=4 proper tables and A_3(4) = 86 reproduced")


def check_g1_total(n: int) -> CheckResult:
    got, want = g1(n).total, proper_tree_total(n)
    if got != want:
        return _failed(CHECK_G1_TOTAL, "sum of g1 differs from 2^(n-1) n^(n-3)", {"n": n, "got": str(got)})
    return _passed(CHECK_G1_TOTAL, f"sum_t g1({n}) = {want}")


def check_bijection(n: int) -> CheckResult:
    if n < 3:
        return CheckResult(CHECK_BIJECTION, SKIPPED, "codes exist for n >= 3")
    if n <= EXHAUSTIVE_CODE_LIMIT:
        codes = list(iter_codes(n))
        mode = "exhaustive"
    else:
        rng = random.Random(n)
        codes = [random_code(n, rng) for _ in range(RANDOM_CODES)]
        mode = f"{RANDOM_CODES} random"
    seen = set()
    for code in codes:
        tree = decode(code)
        if encode(tree) != code:
            return _failed(CHECK_BIJECTION, "encode(decode(C)) != C", {"code": list(code.entries)})
        if decode(encode(tree)).fingerprint() != tree.fingerprint():
            return _failed(CHECK_BIJECTION, "decode(encode(T)) != T", {"code": list(code.entries)})
        multiplicity = code.sequence
        for v, label in outgoing_labels(tree).items():
            if multiplicity.count(label) != tree.degree(v) - 1:
                return _failed(CHECK_BIJECTION, "label multiplicity differs from degree - 1",
                               {"code": list(code.entries), "vertex_degree": tree.degree(v), "label": label})
        seen.add(tree.fingerprint())
    if len(seen) != len(codes):
        return _failed(CHECK_BIJECTION, "two codes decode to the same tree", {"n": n})
    return _passed(CHECK_BIJECTION, f"{mode} round trips over {len(codes)} codes")


def check_tree_census(n: int) -> CheckResult:
    if not 3 <= n <= merged_tree_limit():
        return CheckResult(CHECK_TREE_CENSUS, SKIPPED, f"exhaustive census runs for 3 <= n <= {merged_tree_limit()}")
    census = merged_census(n)
    for delta in degree_sequences(n):
        if census.tree_counts[delta] != count_trees(delta):
            return _failed(CHECK_TREE_CENSUS, "T(delta) differs from the decoded census",
                           {"delta": str(delta), "formula": str(count_trees(delta)),
                            "oracle": str(census.tree_counts[delta])})
    return _passed(CHECK_TREE_CENSUS, f"T(delta) matches for every delta; sum = {n ** (n - 3)}")


def _record(records: list[PatternRecord], check: str, delta, key, formula, oracle, asserted: bool = True) -> None:
    records.append(PatternRecord(check, str(delta), str(key), str(formula), str(oracle),
                                 Fraction(formula) == Fraction(oracle), asserted))


def pattern_records(n: int) -> list[PatternRecord]:
    """Formula-versus-census comparison per (check, delta, key); unasserted rows are diagnostics."""
    census = merged_census(n)
    records: list[PatternRecord] = []
    for delta in degree_sequences(n):
        if n >= 4:
            oracle_classes = census.xx_class_weights.get(delta, {})
            for number, value in enumerate(xx_classes(delta), start=1):
                _record(records, "xx-class", delta, number, value, oracle_classes.get(number, 0))
            _record(records, "xx", delta, "total", count_xx(delta), census.weight(delta, PatternKind.XX))
        _record(records, "xyx", delta, "total", count_xyx_total(delta), census.weight(delta, PatternKind.XYX))
        if n >= 5:
            formula_slices = xyx_unordered_slices(delta)
            oracle_slices = census.xyx_end_weights(delta)
            for ends in sorted(set(formula_slices) | set(oracle_slices)):
                _record(records, "xyx-slice", delta, ends, formula_slices.get(ends, 0), oracle_slices.get(ends, 0))
            oracle_groups = census.xyx_group_weights.get(delta, {})
            for group, value in xyx_printed_groups(delta).items():
                _record(records, "xyx-printed-group", delta, group, value, oracle_groups.get(group, 0), False)
        if n >= 4:
            _record(records, "xyzx-printed-total", delta, "total", xyzx_printed_total(delta),
                    census.weight(delta, PatternKind.XYZX), False)
        if n >= 6:
            _record(records, "xyzx", delta, "total", count_xyzx(delta), census.weight(delta, PatternKind.XYZX))
            _record(records, "free", delta, "total", count_free(delta), census.weight(delta, PatternKind.FREE))
            oracle_groups = census.xyzx_group_weights.get(delta, {})
            for group, value in xyzx_printed_groups(delta).items():
                _record(records, "xyzx-printed-group", delta, group, value, oracle_groups.get(group, 0), False)
    return records


def summarize_diagnostics(records: list[PatternRecord]) -> dict[str, dict[str, int]]:
    summary: dict[str, dict[str, int]] = {}
    for record in records:
        if record.asserted:
            continue
        bucket = summary.setdefault(record.check, {"match": 0, "mismatch": 0})
        bucket["match" if record.match else "mismatch"] += 1
    return summary


def check_patterns(n: int) -> CheckResult:
    if not 4 <= n <= merged_tree_limit():
        return CheckResult(CHECK_PATTERNS, SKIPPED, f"pattern census runs for 4 <= n <= {merged_tree_limit()}")
    records = pattern_records(n)
    failures = [r for r in records if r.asserted and not r.match]
    diagnostics = summarize_diagnostics(records)
    if failures:
        first = failures[0]
        return CheckResult(CHECK_PATTERNS, FAIL, f"{len(failures)} pattern comparison(s) failed",
                           asdict(first), diagnostics)
    asserted = sum(1 for r in records if r.asserted)
    return _passed(CHECK_PATTERNS, f"{asserted} pattern comparisons match the census", **diagnostics)


def check_g2(n: int, **enumeration) -> CheckResult:
    if n < 4:
        return CheckResult(CHECK_G2, SKIPPED, "G^(n-2) is compared for n >= 4")
    oracle = enumerate_proper(n, n - 2, **enumeration).proper_table(n, n - 2)
    if n < G2_MIN_N:
        return _passed(CHECK_G2, f"n={n} is served by enumeration: DX({n},{n - 2}) = {oracle.total}")
    return _table_check(CHECK_G2, f"g2({n})", g2(n).counts, oracle.counts)


def check_perimeter_laws(n: int) -> CheckResult:
    if n < 3:
        return CheckResult(CHECK_PERIMETER_LAWS, SKIPPED, "perimeter laws are checked for n >= 3")
    checked = 0
    dimensions = [n - 1] + ([n - 2] if n >= 4 else [])
    for i in dimensions:
        for cells, perimeter, spanned in iter_polycubes(n, i):
            if spanned != i:
                continue
            predicted = tree_perimeters(cells)
            if predicted != {perimeter}:
                return _failed(CHECK_PERIMETER_LAWS, "measured perimeter differs from the tree prediction",
                               {"i": i, "cells": [list(c) for c in cells], "measured": perimeter,
                                "predicted": sorted(predicted)})
            checked += 1
    return _passed(CHECK_PERIMETER_LAWS, f"{checked} proper polycubes in dimensions {dimensions} agree")


def check_expansion(n: int, **enumeration) -> CheckResult:
    if n < 2:
        return CheckResult(CHECK_EXPANSION, SKIPPED, "expansion is checked for n >= 2")
    top = min(EXPANSION_MAX_D, n - 1)
    runs = {d: enumerate_g(n, d, **enumeration) for d in range(1, top + 1)}
    lattice = {d: run.lattice_table(n) for d, run in runs.items()}
    tables = {i: runs[top].proper_table(n, i) for i in range(1, top + 1)}
    tables[n - 1] = g1(n)
    family = ProperFamily(n, {i: t for i, t in tables.items() if t.counts})

    for d, table in lattice.items():
        got = expand(family, d)
        if not got.same_counts(table):
            return _table_check(CHECK_EXPANSION, f"expand(family, {d})", got.counts, table.counts)
    for i in range(1, top + 1):
        inverted = invert(lattice, i).counts
        expected = family.tables[i].counts if i in family.tables else {}
        if inverted != expected:
            return _table_check(CHECK_EXPANSION, f"invert(lattice, {i})", inverted, expected)
    expanded = {d: expand(family, d) for d in range(1, n)}
    roundtrip = invert_family(expanded)
    for i, table in family.tables.items():
        if roundtrip.tables[i].counts != table.counts:
            return _table_check(CHECK_EXPANSION, f"invert(expand(family))^{i}",
                                roundtrip.tables[i].counts, table.counts)
    return _passed(CHECK_EXPANSION, f"expansion matches enumeration for d <= {top}; inversion round trips")


def verify(n: int, **enumeration) -> VerificationReport:
    report = VerificationReport(n)
    checks: list[tuple[str, Callable[[], CheckResult]]] = [
        (CHECK_GOLDEN, check_golden),
        (CHECK_G1_TOTAL, lambda: check_g1_total(n)),
        (CHECK_BIJECTION, lambda: check_bijection(n)),
        (CHECK_TREE_CENSUS, lambda: check_tree_census(n)),
        (CHECK_PATTERNS, lambda: check_patterns(n)),
        (CHECK_G2, lambda: check_g2(n, **enumeration)),
        (CHECK_PERIMETER_LAWS, lambda: check_perimeter_laws(n)),
        (CHECK_EXPANSION, lambda: check_expansion(n, **enumeration)),
    ]
    for name, check in checks:
        report.checks.append(_run(name, check))
    return report
