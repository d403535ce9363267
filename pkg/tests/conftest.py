import sys
from pathlib import Path

from hypothesis import settings

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("default", deadline=None)
settings.load_profile("default")

_criteria: dict[int, dict] = {}


def pytest_collection_modifyitems(items):
    # @pytest.mark.acceptance(number, title) feeds the per-criterion summary
    for item in items:
        m = item.get_closest_marker("acceptance")
        if m is not None:
            item.user_properties.append(("criterion", m.args))


def pytest_runtest_logreport(report):
    crit = dict(report.user_properties).get("criterion")
    if crit is None or (report.when != "call" and report.passed):
        return
    number, title = crit
    entry = _criteria.setdefault(number, {"title": title, "failing": []})
    if report.failed or hasattr(report, "wasxfail"):
        entry["failing"].append(report.nodeid.split("::")[-1])


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        e = _criteria[number]
        line = f"criterion {number:>2}: {'FAIL' if e['failing'] else 'PASS'}  {e['title']}"
        if e["failing"]:
            line += f"  [failing: {', '.join(e['failing'])}]"
        terminalreporter.write_line(line)
