import argparse
import logging
import sys
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from . import __version__
from .src.config import config
from .src.errors import GroupCohomologyError
from .src.report import Report, error_report, render


@dataclass
class Command:
    name: str
    help: str
    handler: Callable[[argparse.Namespace], Report]
    arguments: List[Tuple[tuple, dict]] = field(default_factory=list)


def option(*flags, **kwargs) -> Tuple[tuple, dict]:
    return flags, kwargs


class CommandRegistry:
    """Subcommands register themselves with @app.command(...) when their module is imported."""

    def __init__(self, name: str):
        self.name = name
        self.commands: Dict[str, Command] = {}

    def command(self, name: str, help: str, *arguments: Tuple[tuple, dict]):
        def decorator(func: Callable[[argparse.Namespace], Report]):
            self.commands[name] = Command(name, help, func, list(arguments))
            return func
        return decorator

    def build_parser(self) -> argparse.ArgumentParser:
        parser = argparse.ArgumentParser(prog=self.name, description="Cohomology, traces and point counts of group varieties")
        parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
        common = argparse.ArgumentParser(add_help=False)
        common.add_argument("--json", action="store_true", help="Emit the structured JSON report")
        common.add_argument("-v", "--verbose", action="store_true", help="Log progress to stderr")
        common.add_argument("--oracle-budget", type=int, help="Cap on brute-force enumeration work")
        common.add_argument("--hopf-cap", type=int, help="Maximum basis size of explicit Hopf algebras")
        sub = parser.add_subparsers(dest="command", required=True)
        for command in self.commands.values():
            p = sub.add_parser(command.name, help=command.help, parents=[common])
            for flags, kwargs in command.arguments:
                p.add_argument(*flags, **kwargs)
            p.set_defaults(handler=command.handler)
        return parser


# Initialize command registry
app = CommandRegistry("group-variety-cohomology")

# Import command modules to register them
from .src.commands import cohomology  # noqa: E402,F401
from .src.commands import dynamics  # noqa: E402,F401
from .src.commands import structure  # noqa: E402,F401
from .src.commands import verify  # noqa: E402,F401


def _configure(args: argparse.Namespace) -> None:
    level = logging.INFO if args.verbose else getattr(logging, config.log_level.upper(), logging.WARNING)
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")
    logging.getLogger().setLevel(level)
    if args.oracle_budget:
        config.oracle_budget = args.oracle_budget
    if args.hopf_cap:
        config.hopf_dimension_cap = args.hopf_cap


def run(argv: Optional[Sequence[str]] = None) -> Tuple[Report, int]:
    """
    解析命令行并执行对应的命令

    Returns:
        (report, exit code): 0 成功, 1 验证失败, 2 用法 / 解析 / 引擎错误
    """
    return execute(app.build_parser().parse_args(argv))


def execute(args: argparse.Namespace) -> Tuple[Report, int]:
    _configure(args)
    try:
        report = args.handler(args)
    except GroupCohomologyError as exc:
        report = error_report(args.command, exc, getattr(args, "expr", None))
    return report, report.exit_code


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Main entry point for the command-line tool."""
    try:
        args = app.build_parser().parse_args(argv)
    except SystemExit as exc:
        # argparse usage errors exit with 2 already
        return int(exc.code or 0)
    report, code = execute(args)
    print(render(report, args.json))
    return code


if __name__ == "__main__":
    sys.exit(main())
