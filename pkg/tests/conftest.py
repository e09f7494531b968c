import json
from pathlib import Path

import hypothesis
import pytest

REPO = Path(__file__).resolve().parent.parent

hypothesis.settings.register_profile(
    "default", max_examples=30, deadline=None
)
hypothesis.settings.load_profile("default")


@pytest.fixture(scope="session")
def molecule_path() -> Path:
    return REPO / "configs" / "molecule_synthetic.json"


@pytest.fixture(scope="session")
def spin_system(molecule_path):
    from eqsim.nmr import load_molecule

    return load_molecule(molecule_path)


@pytest.fixture(scope="session")
def molecule3_path(tmp_path_factory) -> Path:
    """Three-spin synthetic register: keeps shaped-pulse tests on 8x8 targets."""
    cfg = {
        "name": "synthetic-3C-test",
        "note": "synthetic values for fast tests",
        "spins": ["C3", "C4", "C2"],
        "reference_hz": 11000.0,
        "shifts_hz": [10950.0, 12600.0, 8250.0],
        "j_couplings_hz": {"C3-C4": 72.1, "C3-C2": 69.7, "C4-C2": 1.2},
        "t2_s": [1.05, 0.81, 0.92],
    }
    path = tmp_path_factory.mktemp("configs") / "molecule3.json"
    path.write_text(json.dumps(cfg))
    return path


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One pass/fail line per acceptance criterion."""
    entries = []
    for outcome in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(outcome, []):
            nodeid = getattr(rep, "nodeid", "")
            if "test_acceptance" in nodeid and "::test_criterion" in nodeid:
                name = nodeid.split("::test_criterion_", 1)[1]
                number, _, label = name.partition("_")
                entries.append((int(number), label.replace("_", " "), outcome))
    if not entries:
        return
    terminalreporter.section("acceptance criteria")
    for number, label, outcome in sorted(entries):
        status = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"criterion {number:2d} ({label}): {status}")
