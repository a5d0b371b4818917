import numpy as np
import pytest

from sdw import zoo

GROUP_MALCEV = "mul(mul(x0, inv(x1)), x2)"
RING_MALCEV = "add(add(x0, neg(x1)), x2)"

_CRITERIA: dict = {}


def same_signature_pools(max_size=8):
    """Groups and rings of size <= max_size, grouped by signature."""
    groups = [G for G in zoo.groups() if G.size <= max_size]
    rings = [R for R in zoo.rings() if R.size <= max_size]
    return [groups, rings]


def random_pair(rng, pools, n=2, min_size=2):
    pool = pools[int(rng.integers(len(pools)))]
    pool = [F for F in pool if F.size >= min_size]
    return [pool[int(rng.integers(len(pool)))] for _ in range(n)]


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    num, title = mark.args
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        ok = rep.outcome == "passed"
        note = getattr(item, "criterion_note", "")
        if num in _CRITERIA:
            _, ok0, note0 = _CRITERIA[num]
            ok, note = ok0 and ok, "; ".join(x for x in (note0, note) if x)
        _CRITERIA[num] = (title, ok, note)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_CRITERIA):
        title, ok, note = _CRITERIA[num]
        line = f"criterion {num:2d} {'PASS' if ok else 'FAIL'}  {title}"
        terminalreporter.write_line(line + (f"  ({note})" if note else ""))
