import pathlib
import sys

import pytest

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parent))

from qsciband.hamiltonian import load_hamiltonian

FIXTURES = pathlib.Path(__file__).resolve().parents[1] / "fixtures"

_ACCEPTANCE_RESULTS: dict[str, str] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    if report.when == "call" and item.nodeid.split("::")[0].endswith("test_acceptance.py"):
        _ACCEPTANCE_RESULTS[item.name] = report.outcome


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _ACCEPTANCE_RESULTS:
        return
    terminalreporter.write_line("")
    terminalreporter.write_line("acceptance criteria:")
    for name, outcome in _ACCEPTANCE_RESULTS.items():
        status = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"  [{status}] {name}")


@pytest.fixture(scope="session")
def fixtures_dir():
    return FIXTURES


@pytest.fixture(scope="session")
def hubbard():
    return load_hamiltonian(FIXTURES / "hubbard_dimer.json")


@pytest.fixture(scope="session")
def free_fermion():
    return load_hamiltonian(FIXTURES / "free_fermion.json")


def si_fixture_paths():
    return sorted(FIXTURES.glob("si_*.json"))


@pytest.fixture(scope="session")
def si_hamiltonians():
    paths = si_fixture_paths()
    if not paths:
        pytest.skip("Si fixtures not generated")
    return [load_hamiltonian(p) for p in paths]
