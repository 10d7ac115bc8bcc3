import sys


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n in sorted(results):
        ok, title, why = results[n]
        line = "[%s] criterion %d: %s" % ("PASS" if ok else "FAIL", n, title)
        if why:
            line += "  (%s)" % why
        tr.write_line(line)
    passed = sum(1 for ok, _, _ in results.values() if ok)
    tr.write_line("%d/%d criteria passed" % (passed, len(results)))
