import pytest


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    """Print one PASS/FAIL line per acceptance criterion."""
    outcome = yield
    report = outcome.get_result()
    if report.when != "call":
        return
    label = getattr(item.function, "_criterion_label", None)
    if label is None:
        return
    writer = item.config.pluginmanager.get_plugin("terminalreporter")
    if writer is not None:
        verdict = "PASS" if report.passed else "FAIL"
        writer.write_line(f"{label}: {verdict}")
