import re
from collections import OrderedDict

CRITERIA = {
    1: "Fermat residual cubic",
    2: "Fermat fiber census",
    3: "Fermat 2-torsion",
    4: "monodromy identities and case analysis",
    5: "Gram determinants",
    6: "Schubert line counts",
    7: "Riemann-Hurwitz branch totals",
    8: "point generation on the synthetic fixture",
    9: "group-law property suite",
    10: "CLI determinism",
}

_outcomes = OrderedDict()
_pattern = re.compile(r"test_acceptance\.py::test_criterion_(\d+)_(\w+)")


def pytest_runtest_logreport(report):
    m = _pattern.search(report.nodeid)
    if not m:
        return
    if report.when == "call" or report.outcome != "passed":
        _outcomes.setdefault(int(m.group(1)), []).append((report.nodeid.split("::")[-1], report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for n, title in CRITERIA.items():
        runs = _outcomes.get(n)
        if not runs:
            continue
        failed = [name for name, outcome in runs if outcome != "passed"]
        verdict = "FAIL" if failed else "PASS"
        line = f"criterion {n:2d} {verdict}  {title} ({len(runs) - len(failed)}/{len(runs)} checks)"
        if failed:
            line += "  failing: " + ", ".join(failed)
        terminalreporter.write_line(line)
