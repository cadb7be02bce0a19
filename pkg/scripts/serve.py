#!/usr/bin/env python3
"""Thin wrapper around the `phishtriage-serve` console entry point."""

import sys

from phishtriage.app import main

if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
