import pytest

from arithnet.fuzz import network_corpus, paired_corpus
from arithnet.network import parse_network

MINIMAL = """network inputs=1
0 input 0
1 gt 0
2 output 1
"""


@pytest.fixture
def minimal():
    return parse_network(MINIMAL)


@pytest.fixture(scope="session")
def corpus():
    """200 random networks, up to 3 inputs and depth 12, with not and sel gates."""
    return network_corpus(200, seed=1)


@pytest.fixture(scope="session")
def paired():
    """100 (net, negation-free paired form) couples within the piece budget."""
    return paired_corpus(100, seed=2)


ACCEPTANCE: dict[int, list[tuple[bool, str]]] = {}


@pytest.fixture
def criterion(request):
    """Record a one-line verdict for an acceptance criterion."""
    number = request.node.get_closest_marker("criterion").args[0]
    detail: list[str] = []
    yield detail
    rep = getattr(request.node, "rep_call", None)
    passed = rep is not None and rep.passed
    ACCEPTANCE.setdefault(number, []).append((passed, "; ".join(detail) or request.node.name))


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for number in sorted(ACCEPTANCE):
            runs = ACCEPTANCE[number]
            verdict = "PASS" if all(ok for ok, _ in runs) else "FAIL"
            details = " | ".join(d for _, d in runs)
            terminalreporter.write_line(f"criterion {number}: {verdict}  ({details})")
