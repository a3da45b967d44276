import numpy as np
import pytest

_ACCEPTANCE: dict[int, tuple[str, str]] = {}


@pytest.fixture
def rng():
    return np.random.Generator(np.random.PCG64(12345))


@pytest.fixture
def record():
    """Store one summary line per acceptance criterion; later calls for the same criterion AND together."""

    def _record(criterion: int, ok: bool, detail: str) -> None:
        prev = _ACCEPTANCE.get(criterion)
        status = "PASS" if ok else "FAIL"
        if prev is not None:
            status = "PASS" if prev[0] == "PASS" and ok else "FAIL"
            detail = prev[1] + "; " + detail
        _ACCEPTANCE[criterion] = (status, detail)
        print(f"criterion {criterion}: {'PASS' if ok else 'FAIL'} {detail}")

    return _record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(_ACCEPTANCE):
        status, detail = _ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k:2d}: {status}  {detail}")
