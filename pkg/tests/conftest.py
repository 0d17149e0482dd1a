import os

import pytest
from hypothesis import settings

settings.register_profile("fracspm", deadline=None, max_examples=40, derandomize=True)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "fracspm"))

# criterion id -> (passed, detail), filled by tests/test_acceptance.py
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE, key=lambda k: (int(k.split()[0].rstrip("abc")), k)):
        passed, detail = ACCEPTANCE[key]
        terminalreporter.write_line(f"ACCEPTANCE {key}: {'PASS' if passed else 'FAIL'}  {detail}")


@pytest.fixture
def acceptance():
    def record(key, passed, detail=""):
        ACCEPTANCE[key] = (bool(passed), detail)
        print(f"ACCEPTANCE {key}: {'PASS' if passed else 'FAIL'}  {detail}")
        return passed
    return record
