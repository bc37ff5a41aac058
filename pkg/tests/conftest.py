"""Suite-wide pytest hooks.

The acceptance tests live in test_acceptance.py, one test per numbered
criterion. The terminal-summary hook below turns their outcomes into one
PASS/FAIL line each, so the verdicts are visible even when pytest captures
test output.
"""

import re

CRITERION = re.compile(r"test_acceptance\.py::[\w:\[\]-]*test_criterion_(\d+)_(\w+)")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    outcomes = {}
    for status, verdict in (("passed", "PASS"), ("failed", "FAIL"), ("error", "FAIL (error)")):
        for report in terminalreporter.stats.get(status, []):
            match = CRITERION.search(getattr(report, "nodeid", ""))
            if match and getattr(report, "when", "call") == "call":
                outcomes[int(match.group(1))] = (match.group(2).replace("_", " "), verdict)
    if outcomes:
        terminalreporter.section("acceptance criteria")
        for number in sorted(outcomes):
            name, verdict = outcomes[number]
            terminalreporter.write_line(f"criterion {number} ({name}): {verdict}")
