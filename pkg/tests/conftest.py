"""Shared test helpers and the acceptance-criteria summary hook."""
import numpy as np

ACCEPTANCE_RESULTS = []


def record_acceptance(num: int, ok: bool, detail: str) -> None:
    ACCEPTANCE_RESULTS.append((num, ok, detail))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num, ok, detail in sorted(ACCEPTANCE_RESULTS):
        word = "PASS" if ok else "FAIL"
        terminalreporter.write_line(f"criterion {num} {word}: {detail}")


def seeded_rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(seed)
