"""
Table-producing commands for the CLI and the HTTP service
"""
import time
from dataclasses import dataclass
from pathlib import Path

import sympy

from perimeter_app.lib.assembler import (
    evaluate_density,
    evaluate_symbolic,
    expand,
    hybrid_family,
    invert,
    perimeter_polynomial,
    symbolic_expression,
    symbolic_in_d,
)
from perimeter_app.lib.enumerator import enumerate_g, enumerate_proper
from perimeter_app.lib.errors import FormulaDomainError, InvalidInputError
from perimeter_app.lib.logger import get_logger
from perimeter_app.lib.proper_counts import dx, g1, g2
from perimeter_app.lib.result_file import ResultFile
from perimeter_app.lib.tables import PerimeterTable

logger = get_logger()


@dataclass
class EnumerationOptions:
    jobs: int = 1
    checkpoint_dir: Path | None = None
    prefix_depth: int | None = None

    def as_kwargs(self) -> dict:
        return {"jobs": self.jobs, "checkpoint_dir": self.checkpoint_dir, "prefix_depth": self.prefix_depth}


def _timed(build) -> tuple[PerimeterTable, float]:
    start = time.perf_counter()
    table = build()
    return table, time.perf_counter() - start


def _result(build) -> ResultFile:
    table, wall_time = _timed(build)
    return ResultFile.from_table(table, wall_time)


def cmd_g1(n: int) -> ResultFile:
    return _result(lambda: g1(n))


def _g2_table(n: int, options: EnumerationOptions) -> PerimeterTable:
    try:
        return g2(n)
    except FormulaDomainError as e:
        logger.warning("%s; routing to %s", e, e.route)
        return enumerate_proper(n, n - 2, **options.as_kwargs()).proper_table(n, n - 2)


def cmd_g2(n: int, options: EnumerationOptions | None = None) -> ResultFile:
    if n < 3:
        raise InvalidInputError(f"G^(n-2) needs n >= 3, got n={n}")
    return _result(lambda: _g2_table(n, options or EnumerationOptions()))


def cmd_dx(n: int, i: int, options: EnumerationOptions | None = None) -> int:
    """DX(n, i), the number of proper polycubes of size n in i dimensions."""
    if i == n - 2 and n < 6:
        return _g2_table(n, options or EnumerationOptions()).total
    return dx(n, i)


def cmd_enumerate(n: int, d: int, proper: bool = False, i: int | None = None,
                  options: EnumerationOptions | None = None) -> ResultFile:
    options = options or EnumerationOptions()

    def build() -> PerimeterTable:
        run = enumerate_g(n, d, **options.as_kwargs())
        if proper:
            return run.proper_table(n, d if i is None else i)
        return run.lattice_table(n)

    return _result(build)


def cmd_expand(n: int, d: int, options: EnumerationOptions | None = None) -> ResultFile:
    options = options or EnumerationOptions()
    return _result(lambda: expand(hybrid_family(n, **options.as_kwargs()), d))


def cmd_invert(n: int, i: int, options: EnumerationOptions | None = None) -> ResultFile:
    options = options or EnumerationOptions()

    def build() -> PerimeterTable:
        lattice = {d: enumerate_g(n, d, **options.as_kwargs()).lattice_table(n) for d in range(1, i + 1)}
        return invert(lattice, i)

    return _result(build)


def cmd_symbolic(n: int, d: int | None = None, options: EnumerationOptions | None = None) -> str:
    """g_{n,t}(d) as a sum of binomial(d, i) KroneckerDelta terms, or its value at one d."""
    options = options or EnumerationOptions()
    family = hybrid_family(n, **options.as_kwargs())
    if d is None:
        return sympy.sstr(symbolic_expression(family))
    counts = evaluate_symbolic(symbolic_in_d(family), d)
    return "\n".join(f"{t},{c}" for t, c in counts.items())


def cmd_density(n: int, d: int, p: str, options: EnumerationOptions | None = None) -> str:
    options = options or EnumerationOptions()
    try:
        probability = sympy.Rational(p)
    except (TypeError, ValueError, sympy.SympifyError) as e:
        raise InvalidInputError(f"occupation probability {p!r} is not a number") from e
    poly = perimeter_polynomial(hybrid_family(n, **options.as_kwargs()), d)
    return str(evaluate_density(poly, probability))
