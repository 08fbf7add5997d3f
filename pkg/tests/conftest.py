import pytest

# (criterion number, passed, detail) appended by tests/test_acceptance.py
ACCEPTANCE: list = []


@pytest.fixture
def verdict():
    def record(n: int, ok: bool, detail: str) -> bool:
        ACCEPTANCE.append((n, bool(ok), detail))
        print(f"criterion {n}: {'PASS' if ok else 'FAIL'} {detail}")
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n, ok, detail in sorted(ACCEPTANCE):
        terminalreporter.write_line(f"criterion {n:>2}: {'PASS' if ok else 'FAIL'}  {detail}")
