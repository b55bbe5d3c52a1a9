#!/usr/bin/env python3
"""
Injective coloring lab - command-line gateway

Runs the analyze / color / audit / verify / generate subcommands of
injective_lab.cli. See ``./injlab.py --help``.
"""

import sys

from injective_lab.cli import main

if __name__ == "__main__":
    sys.exit(main())
