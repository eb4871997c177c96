#!/usr/bin/env python3
"""Run the acceptance suite and print one PASS/FAIL line per criterion."""

import os
import sys

import pytest

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))

if __name__ == "__main__":
    code = pytest.main(["-q", "-p", "no:cacheprovider", os.path.join(ROOT, "tests", "test_acceptance.py")])
    sys.exit(int(code))
