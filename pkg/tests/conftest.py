import numpy as np
import pytest

from zigzag_groups.constructions import Preset, example1, example2
from zigzag_groups.graph import RotationGraph

NINE_CYCLE = "(1 2 3 4 5 6 7 8 9)"
NINE_CYCLE_INV = "(1 9 8 7 6 5 4 3 2)"


def random_rotation_graph(rng: np.random.Generator, n: int, d: int, loops: bool = True) -> RotationGraph:
    """Uniformly shuffled pairing of the (vertex, port) slots.

    With ``loops`` an odd leftover slot (and a few random ones) become
    rotation fixed points.
    """
    slots = [(v, p) for v in range(n) for p in range(d)]
    order = rng.permutation(len(slots))
    nbr = np.empty((n, d), dtype=np.int64)
    port = np.empty((n, d), dtype=np.int64)
    i = 0
    while i < len(order):
        v, p = slots[order[i]]
        fixed = i + 1 == len(order) or (loops and rng.random() < 0.05)
        if fixed:
            nbr[v, p], port[v, p] = v, p
            i += 1
            continue
        u, q = slots[order[i + 1]]
        nbr[v, p], port[v, p] = u, q
        nbr[u, q], port[u, q] = v, p
        i += 2
    return RotationGraph(nbr, port)


@pytest.fixture
def ex1():
    return example1()


@pytest.fixture
def ex2():
    return example2()


@pytest.fixture
def p_k2():
    return Preset.parse("P", ["(1 2)", "(1 4)(2 3)"], 2)


@pytest.fixture
def q_k2():
    return Preset.parse("Q", [NINE_CYCLE, NINE_CYCLE_INV], 2)


# acceptance criteria record one line each here; printed at the end of the run
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
