import pytest
from hypothesis import strategies as st

from combinators import term as tm

RESULTS = []


def pytest_terminal_summary(terminalreporter):
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)


@pytest.fixture
def criterion(request):
    """Records one PASS/FAIL line per acceptance test for the summary."""
    name = request.node.name
    notes = []
    yield notes.append
    rep = getattr(request.node, "rep_call", None)
    ok = rep is not None and rep.passed
    RESULTS.append(f"{'PASS' if ok else 'FAIL'}  {name}" + (f"  ({'; '.join(notes)})" if notes else ""))


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep


def terms(leaves=("S", "K"), max_leaves=12):
    atoms = st.sampled_from([tm.sym(n) for n in leaves])
    return st.recursive(atoms, lambda sub: st.tuples(sub, sub).map(lambda p: tm.app(*p)),
                        max_leaves=max_leaves)


def paths_for(t):
    """Strategy of valid paths into ``t``."""
    return st.sampled_from([p for p, _ in tm.subterms(t)])
