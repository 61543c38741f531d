from __future__ import annotations

import pytest

# criterion number -> (passed, one-line detail, extra report lines)
ACCEPTANCE: dict[int, tuple[bool, str, list[str]]] = {}


@pytest.fixture
def acceptance() -> dict[int, tuple[bool, str, list[str]]]:
    return ACCEPTANCE


def format_line(num: int, ok: bool, detail: str) -> str:
    return f"criterion {num:2d}: {'PASS' if ok else 'FAIL'}  {detail}"


def pytest_terminal_summary(terminalreporter) -> None:
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        ok, detail, extra = ACCEPTANCE[num]
        terminalreporter.write_line(format_line(num, ok, detail))
        for line in extra:
            terminalreporter.write_line(f"      {line}")
