import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

# (label, passed, detail) lines filled in by test_acceptance.py
ACCEPTANCE = []


def pytest_collection_modifyitems(config, items):
    if os.environ.get("TRANSPOLY_STRETCH") == "1":
        return
    skip = pytest.mark.skip(reason="set TRANSPOLY_STRETCH=1 to run")
    for item in items:
        if "stretch" in item.keywords:
            item.add_marker(skip)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for label, passed, detail in ACCEPTANCE:
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  {label}: {detail}")
