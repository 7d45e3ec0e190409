# SPDX-License-Identifier: MIT

"""Main entry point of the application."""

import os
import sys

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))


def main() -> None:
    """Run one boussym subcommand and exit with its code."""
    from src.main.app.cli import main as cli_main

    sys.exit(cli_main())


if __name__ == "__main__":
    main()
