import pytest

_ACCEPTANCE: list[tuple[str, str, str]] = []


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        name = report.nodeid.split("::")[-1]
        msg = ""
        if report.failed:
            text = str(report.longrepr.reprcrash.message) if hasattr(report.longrepr, "reprcrash") \
                else str(report.longrepr)
            msg = text.splitlines()[0] if text else ""
        _ACCEPTANCE.append((name, "PASS" if report.passed else "FAIL", msg))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for name, verdict, msg in _ACCEPTANCE:
        tr.write_line(f"{verdict}  {name}" + (f"  -- {msg}" if msg else ""))
    n = sum(v == "PASS" for _, v, _ in _ACCEPTANCE)
    tr.write_line(f"{n}/{len(_ACCEPTANCE)} criteria pass")


@pytest.fixture(scope="session")
def rng():
    import numpy as np
    return np.random.default_rng(20240611)
