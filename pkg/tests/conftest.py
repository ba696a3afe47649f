import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from revolver.graph import Graph  # noqa: E402

ACCEPTANCE = []


def record(name, ok, detail=""):
    """Log an acceptance criterion outcome and fail the calling test if it did not pass."""
    ACCEPTANCE.append((name, bool(ok), detail))
    assert ok, f"{name}: {detail}"


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in ACCEPTANCE:
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")


def graph_from(edges, n=None):
    e = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
    return Graph.from_edges(e[:, 0], e[:, 1], num_vertices=n)


@pytest.fixture
def path_graph():
    # 0 <-> 1 -> 2, 3 isolated
    return graph_from([(0, 1), (1, 0), (1, 2)], n=4)
