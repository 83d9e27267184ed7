"""
A-infinity Nerve Engine - entry point

    python -m src.main <command> [options]

Logging is configured from settings before any command runs; stdout
carries only the CommandResult JSON.
"""
import sys

from .cli import run
from .config import settings
from .logging_config import configure_logging


def main() -> int:
    configure_logging(settings.log_level, json_logs=settings.json_logs)
    return run(sys.argv[1:])


if __name__ == "__main__":
    sys.exit(main())
