#!/usr/bin/env python3
"""Entry point for the saalschutz-l package."""

import sys

from .cli import main


def cli_main():
    """CLI entry point."""
    sys.exit(main())


if __name__ == "__main__":
    cli_main()
