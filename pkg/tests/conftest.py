import pytest

from heckesum.coeffs import build_tau_table, normalize
from heckesum.sieve import build_sieve


@pytest.fixture(scope="session")
def small():
    """Tables to 3*10^4: enough for the N=10^4 Vaughan block."""
    tau = build_tau_table(30000)
    return tau, normalize(tau), build_sieve(30000)


@pytest.fixture(scope="session")
def big(tmp_path_factory):
    """Tables to 10^6 plus their TAU1 cache file."""
    from heckesum.coeffs import save_tau_cache

    tau = build_tau_table(10**6)
    cache = save_tau_cache(tau, tmp_path_factory.mktemp("cache") / "tau.bin")
    return tau, normalize(tau), build_sieve(10**6), cache


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
