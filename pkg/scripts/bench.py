#!/usr/bin/env python3
"""Thin wrapper around the `bench` console entry point.

Equivalent to running `bench ...` after an editable install; handy when
working from a source checkout without installing.
"""

import sys

from phishtriage.bench import main

if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
