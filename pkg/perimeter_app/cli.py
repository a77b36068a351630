"""
Command-line entry point: `python -m perimeter_app.cli <command> --n N ...`
"""
import argparse
import sys
from pathlib import Path

from dotenv import load_dotenv

from perimeter_app import __version__
from perimeter_app.commands.handler import route_command
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
)
from perimeter_app.lib.logger import set_verbosity
from perimeter_app.lib.result_file import FORMATS

# Load environment variables from .env file (budget and limits for local runs)
load_dotenv()

COMMAND_HELP = {
    CMD_G1: "G^(n-1)_{n,t} from the degree-sequence formula",
    CMD_G2: "G^(n-2)_{n,t} from the pattern formulas (enumeration for n < 6)",
    CMD_DX: "DX(n, i), the number of proper polycubes for i = n-1 or n-2",
    CMD_ENUMERATE: "g^(d)_{n,t} (or G^(i) with --proper) by direct enumeration",
    CMD_EXPAND: "g^(d)_{n,t} assembled from the proper tables",
    CMD_INVERT: "G^(i)_{n,t} recovered from enumerated lattice tables",
    CMD_SYMBOLIC: "g_{n,t} as a closed expression in d",
    CMD_DENSITY: "exact cluster density p^n sum_t g_{n,t} (1-p)^t",
    CMD_VERIFY: "formula-versus-enumeration checks at size n",
    CMD_VERIFY_PATTERNS: "pattern counts against the merged-label tree census",
    CMD_CALIBRATE: "test each orientation coefficient set against enumeration",
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="perimeter-app",
        description="Count fixed polycubes by size and perimeter.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, required=True, help="polycube size")
    common.add_argument("--d", type=int, default=None, help="lattice dimension")
    common.add_argument("--i", type=int, default=None, help="proper dimension")
    common.add_argument("--p", default=None, help="occupation probability, e.g. 1/3 (density only)")
    common.add_argument("--proper", action="store_true",
                        help="keep polycubes spanning all i axes (enumerate only; i defaults to d)")
    common.add_argument("--jobs", type=int, default=None,
                        help="worker processes for enumeration (default PERIMETER_APP_JOBS or 1)")
    common.add_argument("--checkpoint-dir", type=Path, default=None,
                        help="directory of per-work-unit checkpoints; a rerun resumes from them")
    common.add_argument("--prefix-depth", type=int, default=None,
                        help="depth of the search prefixes that become work units")
    common.add_argument("--out", type=Path, default=None, help="write the result here instead of stdout")
    common.add_argument("--format", choices=FORMATS, default="csv", help="result file format")
    common.add_argument("-v", "--verbose", action="count", default=0, help="more logging (repeatable)")
    common.add_argument("-q", "--quiet", action="count", default=0, help="warnings only")

    for command, help_text in COMMAND_HELP.items():
        subparsers.add_parser(command, parents=[common], help=help_text, description=help_text)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    set_verbosity(args.verbose - args.quiet)
    return route_command(args)


if __name__ == "__main__":
    sys.exit(main())
