import pytest
from hypothesis import HealthCheck, settings

from kummergerm.genus import clear_discrepancies

# every property suite runs at least 100 instances
settings.register_profile("kummer", max_examples=120, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow], derandomize=True)
settings.load_profile("kummer")

PRIMES = (2, 3, 5)


@pytest.fixture
def fresh_registry():
    clear_discrepancies()
    yield
    clear_discrepancies()


@pytest.fixture(scope="session")
def catalog_results():
    import os

    from kummergerm.catalog import build_catalog, run_catalog

    clear_discrepancies()
    entries = build_catalog()
    results = run_catalog(entries, jobs=min(8, os.cpu_count() or 1))
    return {e.id: (e, r) for e, r in zip(entries, results)}


# one PASS/FAIL line per acceptance criterion, echoed in the terminal summary
ACCEPTANCE_LINES: dict[int, str] = {}


def record(n: int, name: str, ok: bool, detail: str) -> None:
    ACCEPTANCE_LINES[n] = f"CRITERION {n} {name}: {'PASS' if ok else 'FAIL'} ({detail})"
    print(ACCEPTANCE_LINES[n])


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance")
        for n in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[n])
