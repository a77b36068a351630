from dataclasses import dataclass, field

from perimeter_app.lib.enumerator import enumerate_proper
from perimeter_app.lib.errors import FormulaMisuseError, VerificationError
from perimeter_app.lib.logger import get_logger
from perimeter_app.lib.proper_counts import FROZEN_COEFFICIENTS, G2_MIN_N, CoefficientSet, candidate_sets, g2
from perimeter_app.lib.tables import PerimeterTable

logger = get_logger()


@dataclass
class CalibrationReport:
    n: int
    oracle: PerimeterTable
    survivors: list[CoefficientSet] = field(default_factory=list)
    rejected: dict[str, dict[int, tuple[int, int]]] = field(default_factory=dict)

    @property
    def frozen_survives(self) -> bool:
        return FROZEN_COEFFICIENTS in self.survivors

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "oracle_total": str(self.oracle.total),
            "frozen": FROZEN_COEFFICIENTS.label,
            "frozen_survives": self.frozen_survives,
            "survivors": [s.label for s in self.survivors],
            "rejected": len(self.rejected),
        }


def calibrate(n: int, candidates: list[CoefficientSet] | None = None, strict: bool = True,
              **enumeration) -> CalibrationReport:
    """Check every candidate coefficient set against the enumerated G^(n-2) table."""
    if n < G2_MIN_N:
        raise VerificationError(f"calibration needs n >= {G2_MIN_N}, got n={n}")
    oracle = enumerate_proper(n, n - 2, **enumeration).proper_table(n, n - 2)
    report = CalibrationReport(n, oracle)
    for candidate in candidates or candidate_sets():
        try:
            table = g2(n, candidate)
        except FormulaMisuseError as e:
            report.rejected[candidate.label] = {}
            logger.debug("Candidate %s rejected: %s", candidate.label, e)
            continue
        diff = table.differences(oracle)
        if diff:
            report.rejected[candidate.label] = diff
        else:
            report.survivors.append(candidate)
    logger.info("Calibration at n=%s: %s of %s candidates survive",
                n, len(report.survivors), len(report.survivors) + len(report.rejected))
    if strict and not report.frozen_survives:
        raise VerificationError(f"frozen coefficient set disagrees with enumeration at n={n}")
    return report
