import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

_RESULTS: dict[str, tuple[bool, str]] = {}


class Ledger:
    """Collects one verdict per acceptance criterion before the test asserts."""

    def record(self, cid: str, passed: bool, detail: str) -> bool:
        _RESULTS[cid] = (bool(passed), detail)
        print(f"ACCEPTANCE {cid} {'PASS' if passed else 'FAIL'} {detail}")
        return bool(passed)


@pytest.fixture(scope="session")
def acceptance():
    return Ledger()


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for cid in sorted(_RESULTS, key=lambda c: int(c[1:])):
        ok, detail = _RESULTS[cid]
        terminalreporter.write_line(f"ACCEPTANCE {cid} {'PASS' if ok else 'FAIL'} {detail}")
