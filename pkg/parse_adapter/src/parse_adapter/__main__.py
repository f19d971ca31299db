"""python -m parse_adapter delegates to the CLI."""

import sys

from parse_adapter.cli import main

if __name__ == "__main__":
    sys.exit(main())
