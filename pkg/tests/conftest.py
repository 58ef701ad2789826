import os

from hypothesis import HealthCheck, settings

settings.register_profile("default", max_examples=150, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", max_examples=2000, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("PAL_HYPOTHESIS_PROFILE", "default"))


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import OUTCOMES
    except ImportError:
        return
    if not OUTCOMES:
        return
    from pal.acceptance import CRITERIA

    terminalreporter.section("acceptance criteria")
    for c in CRITERIA:
        outcome = OUTCOMES.get(c.number)
        if outcome is None:
            terminalreporter.write_line(f"criterion {c.number:2d} NOT RUN  {c.title}")
        else:
            terminalreporter.write_line(outcome.line())
