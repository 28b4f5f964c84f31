import json

import pytest

from pwv import k3_path
from pwv.filtrations import build_operator_suite, perverse_decomposition
from pwv.k3 import k3_gram
from pwv.algebra import build_k3
from pwv.quadratic import QuadraticSpace, balance_eta, find_positive_orthogonal, normalize_eta

B2 = 22


def unit_vector(i, n=B2):
    return tuple(1 if k == i else 0 for k in range(n))


def standard_classes(Q):
    """(eta, beta, rho) for the shipped K3 setup, eta balanced."""
    beta = unit_vector(0)
    eta0 = tuple(-1 if k == 0 else (1 if k == 1 else 0) for k in range(B2))
    eta = normalize_eta(Q, eta0, beta)
    rho = find_positive_orthogonal(Q, [eta, beta])
    return balance_eta(Q, eta, beta, rho), beta, rho


@pytest.fixture(scope="session")
def gram():
    return k3_gram()


@pytest.fixture(scope="session")
def Q(gram):
    return QuadraticSpace(gram)


@pytest.fixture(scope="session")
def k3(gram):
    return build_k3(gram)


@pytest.fixture(scope="session")
def classes(Q):
    return standard_classes(Q)


@pytest.fixture(scope="session")
def suite(k3, Q, classes):
    return build_operator_suite(k3, Q, *classes)


@pytest.fixture(scope="session")
def dec(suite):
    return perverse_decomposition(suite)


@pytest.fixture(scope="session")
def k3_file():
    return k3_path()


@pytest.fixture(scope="session")
def k3_doc(k3_file):
    with open(k3_file) as fh:
        return json.load(fh)


# -- acceptance summary: one line per criterion

def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")
    config._criteria = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or rep.when not in ("setup", "call"):
        return
    key = mark.args
    res = item.config._criteria
    if rep.failed or rep.skipped:
        res[key] = "FAIL"
    elif rep.when == "call":
        res.setdefault(key, "PASS")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    res = getattr(config, "_criteria", {})
    if not res:
        return
    terminalreporter.section("acceptance criteria")
    for (num, title), status in sorted(res.items()):
        terminalreporter.write_line(f"criterion {num}: {title} ... {status}")
