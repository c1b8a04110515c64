import time

from hypothesis import HealthCheck, settings

settings.register_profile(
    "repo", deadline=None, derandomize=True, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("repo")

# Filled by test_acceptance: criterion number -> (passed, detail).
ACCEPTANCE_RESULTS: dict[int, tuple[bool, str]] = {}
_SESSION_START = time.perf_counter()


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for num in sorted(ACCEPTANCE_RESULTS):
        ok, detail = ACCEPTANCE_RESULTS[num]
        tr.write_line(f"criterion {num:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
    elapsed = time.perf_counter() - _SESSION_START
    tr.write_line(f"full session wall-clock: {elapsed:.1f} s (limit 600 s): "
                  f"{'PASS' if elapsed < 600 else 'FAIL'}")
