"""Main entry point for polar-containment."""
import logging
import sys
from typing import Optional

from .cli import CLIError, build_parser, handle_command
from .config import ConfigError, load_config
from .corpus import CorpusError
from .geometry import GeometryError, ShapeFormatError
from .harness import HarnessError, MismatchFound
from .render import FileWriteError


def main(argv: Optional[list[str]] = None) -> int:
    """Parse arguments, load configuration and run one subcommand.

    Returns:
        Exit code (0 success, 1 error or failed check, 2 usage error)
    """
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )

    try:
        config = load_config(args.config)
        return handle_command(args, config)
    except MismatchFound as e:
        print(f"Error: {e}")
        print(f"  shape: {e.label}")
        print(f"  query seed: {e.seed}")
        print(f"  point: {tuple(e.point)!r}")
        for name, verdict in e.verdicts.items():
            print(f"  {name}: {verdict.value}")
        return 1
    except (
        CLIError,
        ConfigError,
        CorpusError,
        FileWriteError,
        GeometryError,
        HarnessError,
        ShapeFormatError,
    ) as e:
        print(f"Error: {e}")
        return 1
    except OSError as e:
        print(f"Error: {e}")
        return 1


if __name__ == "__main__":
    sys.exit(main())
