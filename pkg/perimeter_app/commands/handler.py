import json
import sys
from argparse import Namespace
from dataclasses import asdict
from pathlib import Path
from typing import TextIO

from perimeter_app.commands.table_commands import (
    EnumerationOptions,
    cmd_density,
    cmd_dx,
    cmd_enumerate,
    cmd_expand,
    cmd_g1,
    cmd_g2,
    cmd_invert,
    cmd_symbolic,
)
from perimeter_app.commands.verification import pattern_records, verify
from perimeter_app.commands.views.constants import (
    CMD_CALIBRATE,
    CMD_DENSITY,
    CMD_DX,
    CMD_ENUMERATE,
    CMD_EXPAND,
    CMD_G1,
    CMD_G2,
    CMD_INVERT,
    CMD_SYMBOLIC,
    CMD_VERIFY,
    CMD_VERIFY_PATTERNS,
    EXIT_BUDGET_REFUSED,
    EXIT_INVALID_INPUT,
    EXIT_OK,
    EXIT_VERIFICATION_FAILED,
)
from perimeter_app.commands.views.summary import (
    render_calibration,
    render_pattern_records,
    render_table_summary,
    render_verification,
)
from perimeter_app.lib.calibration import calibrate
from perimeter_app.lib.errors import (
    BudgetExceededError,
    FormulaMisuseError,
    InvalidInputError,
    PerimeterAppError,
    VerificationError,
)
from perimeter_app.lib.logger import get_logger
from perimeter_app.lib.result_file import ResultFile
from perimeter_app.lib.settings import default_jobs

logger = get_logger()


class UnsupportedCommandError(InvalidInputError):
    pass


def exit_code_for(error: PerimeterAppError) -> int:
    if isinstance(error, BudgetExceededError):
        return EXIT_BUDGET_REFUSED
    if isinstance(error, (VerificationError, FormulaMisuseError)):
        return EXIT_VERIFICATION_FAILED
    if isinstance(error, InvalidInputError):
        return EXIT_INVALID_INPUT
    return EXIT_VERIFICATION_FAILED


def _emit(text: str, out: Path | None, stdout: TextIO) -> None:
    if out is None:
        stdout.write(text if text.endswith("\n") else text + "\n")
    else:
        out.write_text(text if text.endswith("\n") else text + "\n")
        logger.info("Wrote %s", out)


def _emit_result(result: ResultFile, args: Namespace, stdout: TextIO, stderr: TextIO) -> None:
    _emit(result.dumps(args.format), args.out, stdout)
    stderr.write(render_table_summary(result.to_table(), result.wall_time) + "\n")


def _require(args: Namespace, *names: str) -> None:
    missing = [f"--{name.replace('_', '-')}" for name in names if getattr(args, name, None) is None]
    if missing:
        raise InvalidInputError(f"{args.command} needs {', '.join(missing)}")


def _options(args: Namespace) -> EnumerationOptions:
    jobs = args.jobs if args.jobs is not None else default_jobs()
    return EnumerationOptions(jobs, args.checkpoint_dir, args.prefix_depth)


def _dispatch(args: Namespace, stdout: TextIO, stderr: TextIO) -> int:
    command = args.command
    _require(args, "n")
    if command == CMD_G1:
        _emit_result(cmd_g1(args.n), args, stdout, stderr)
    elif command == CMD_G2:
        _emit_result(cmd_g2(args.n, _options(args)), args, stdout, stderr)
    elif command == CMD_DX:
        _require(args, "i")
        value = cmd_dx(args.n, args.i, _options(args))
        _emit(json.dumps({"n": args.n, "i": args.i, "dx": str(value)}), args.out, stdout)
    elif command == CMD_ENUMERATE:
        _require(args, "d")
        _emit_result(cmd_enumerate(args.n, args.d, args.proper, args.i, _options(args)), args, stdout, stderr)
    elif command == CMD_EXPAND:
        _require(args, "d")
        _emit_result(cmd_expand(args.n, args.d, _options(args)), args, stdout, stderr)
    elif command == CMD_INVERT:
        _require(args, "i")
        _emit_result(cmd_invert(args.n, args.i, _options(args)), args, stdout, stderr)
    elif command == CMD_SYMBOLIC:
        _emit(cmd_symbolic(args.n, args.d, _options(args)), args.out, stdout)
    elif command == CMD_DENSITY:
        _require(args, "d", "p")
        _emit(cmd_density(args.n, args.d, args.p, _options(args)), args.out, stdout)
    elif command == CMD_VERIFY:
        report = verify(args.n, **_options(args).as_kwargs())
        _emit(json.dumps(report.to_dict(), indent=2, sort_keys=True), args.out, stdout)
        stderr.write(render_verification(report) + "\n")
        if not report.passed:
            return EXIT_VERIFICATION_FAILED
    elif command == CMD_VERIFY_PATTERNS:
        records = pattern_records(args.n)
        document = {"n": args.n, "records": [asdict(record) for record in records]}
        _emit(json.dumps(document, indent=2, sort_keys=True), args.out, stdout)
        stderr.write(render_pattern_records(args.n, records) + "\n")
        if any(record.asserted and not record.match for record in records):
            return EXIT_VERIFICATION_FAILED
    elif command == CMD_CALIBRATE:
        report = calibrate(args.n, strict=False, **_options(args).as_kwargs())
        _emit(json.dumps(report.to_dict(), indent=2, sort_keys=True), args.out, stdout)
        stderr.write(render_calibration(report) + "\n")
        if not report.frozen_survives:
            return EXIT_VERIFICATION_FAILED
    else:
        raise UnsupportedCommandError(f"Received an unsupported command: {command}")
    return EXIT_OK


def route_command(args: Namespace, stdout: TextIO | None = None, stderr: TextIO | None = None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    logger.debug("Handling command with arguments: %s", vars(args))
    try:
        code = _dispatch(args, stdout, stderr)
        logger.debug("Completed command %s with exit code %s", args.command, code)
        return code
    # Expected failures end the command with an exit code instead of a traceback
    except PerimeterAppError as e:
        logger.debug("Exiting with error: %s", e)
        stderr.write(f"error: {e}\n")
        return exit_code_for(e)
