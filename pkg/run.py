#!/usr/bin/env python3
"""
posetindex entry point

Usage:
    uv run python run.py index data/example.poset
    uv run python run.py sweep --max-n 5
    uv run python run.py serve [--host HOST] [--port PORT] [--no-preload]

Run with --help for every subcommand.
"""
import sys

from app.cli import main


if __name__ == '__main__':
    sys.exit(main())
