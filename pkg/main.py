#!/usr/bin/env python3
"""
NMC Design-Space Explorer

Main entry point: characterize memory traces and compare a multi-core host
against a host with near-memory cores.
"""

import logging
import sys

from config import config

# stdout carries CSV/JSON, so logs go to stderr
logging.basicConfig(
    format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    level=getattr(logging, config.log_level, logging.WARNING),
    handlers=[logging.StreamHandler(sys.stderr)]
)

logger = logging.getLogger(__name__)


def main() -> int:
    """Main entry point"""
    # Import after logging setup
    from cli.app import run

    return run()


if __name__ == "__main__":
    sys.exit(main())
