"""Entry point: python qinduct.py <command> [options]."""

import sys

from app.cli import main

if __name__ == "__main__":
    sys.exit(main())
