"""Run the lab's command line from a source checkout: ``python verify.py check all``."""

from __future__ import annotations

import sys

from polylab.cli import main

if __name__ == "__main__":  # pragma: no cover - CLI entry point
    sys.exit(main())
