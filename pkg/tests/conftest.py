import numpy as np
import pytest

from rankplot import RankedDataset

# An 8-observation reference set with no ties: 28 pairwise comparisons,
# 11 concordant and 17 discordant (verified by independent enumeration),
# so tau = -6/28.
RANKS8_X = [20, 86, 35, 55, 60, 85, 8, 15]
RANKS8_Y = [40, 78, 80, 35, 25, 15, 19, 93]


@pytest.fixture
def ranks8() -> RankedDataset:
    return RankedDataset(x=RANKS8_X, y=RANKS8_Y, x_name="a", y_name="b")


@pytest.fixture
def ranks8_csv() -> str:
    lines = ["name,a,b"]
    lines += [
        f"p{i},{x},{y}" for i, (x, y) in enumerate(zip(RANKS8_X, RANKS8_Y))
    ]
    return "\n".join(lines) + "\n"


def random_dataset(rng: np.random.Generator, m: int, *, ties: bool) -> RankedDataset:
    if ties:
        x = rng.integers(0, max(2, m // 3), size=m).astype(float)
        y = rng.integers(0, max(2, m // 3), size=m).astype(float)
    else:
        x = rng.uniform(-100, 100, size=m)
        y = rng.uniform(-100, 100, size=m)
    return RankedDataset(x=x, y=y)


def pytest_terminal_summary(terminalreporter):
    rows = []
    for outcome in ("passed", "failed"):
        for rep in terminalreporter.stats.get(outcome, []):
            if "test_acceptance" in rep.nodeid and rep.when == "call":
                rows.append((rep.nodeid.split("::")[-1], outcome == "passed"))
    if rows:
        terminalreporter.write_sep("-", "acceptance criteria")
        for name, passed in rows:
            terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}: {name}")
