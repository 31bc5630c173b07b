import math

import numpy as np
import pytest

from conftest import random_rotation_graph
from zigzag_groups import graph as G
from zigzag_groups.constructions import example1, example2
from zigzag_groups.selfsim import action_graph
from zigzag_groups.spectra import (
    SpectralError,
    lambda_exact,
    lambda_iterative,
    lambda_lanczos,
    normalized_spectrum,
    second_eigenvalue,
)


def cycle_lambda(n):
    # eigenvalues cos(2 pi j / n); the largest modulus apart from j = 0
    return max(abs(math.cos(2 * math.pi * j / n)) for j in range(1, n))


def test_triangle():
    assert lambda_exact(G.cycle_graph(3)).lam == pytest.approx(0.5, abs=1e-12)


@pytest.mark.parametrize("n", [4, 5, 9, 10, 17])
def test_cycles_closed_form(n):
    assert lambda_exact(G.cycle_graph(n)).lam == pytest.approx(cycle_lambda(n), abs=1e-12)


def test_nine_cycle_value():
    # odd cycle: -cos(pi/9) beats cos(2 pi/9)
    assert lambda_exact(G.cycle_graph(9)).lam == pytest.approx(math.cos(math.pi / 9), abs=1e-12)


def test_disconnected_is_one():
    g = G.disjoint_union(G.cycle_graph(5), G.cycle_graph(7))
    assert lambda_exact(g).lam == pytest.approx(1.0, abs=1e-12)


def test_perron_multiplicity_is_component_count():
    g = G.disjoint_union(G.disjoint_union(G.cycle_graph(3), G.cycle_graph(5)), G.cycle_graph(4))
    ev = normalized_spectrum(g)
    assert int(np.sum(np.abs(ev - 1) < 1e-9)) == 3


def test_loops_shift_spectrum():
    c = G.cycle_graph(9)
    lam = lambda_exact(c).lam
    # spectrum maps mu -> (2 mu + 3) / 5; the smallest eigenvalue moves up
    ev = (2 * np.cos(2 * np.pi * np.arange(1, 9) / 9) + 3) / 5
    looped = lambda_exact(G.add_loops(c, 3)).lam
    assert looped == pytest.approx(np.abs(ev).max(), abs=1e-12)
    assert looped != pytest.approx(lam)


def test_example2_level_one():
    # A = [[0,2,1],[2,0,1],[1,1,1]] / 3 has eigenvalues 1, -2/3, 0
    g = action_graph(example2().recursion(), 1)
    assert lambda_exact(g).lam == pytest.approx(2 / 3, abs=1e-12)


def test_dense_threshold_enforced():
    with pytest.raises(SpectralError):
        lambda_exact(G.cycle_graph(50), dense_threshold=10)


def test_perron_failure_raises():
    # not an involution: the symmetric part seen by the solver has spectrum (1 +- sqrt 5) / 4
    bad = G.RotationGraph(np.array([[1, 1], [0, 1]]), np.array([[0, 0], [0, 0]]))
    with pytest.raises(SpectralError):
        lambda_exact(bad)


def _graphs():
    rng = np.random.default_rng(42)
    out = [G.cycle_graph(n) for n in (3, 4, 9, 31)]
    out += [random_rotation_graph(rng, n, d) for n, d in ((20, 3), (64, 4), (200, 5))]
    r1 = example1().recursion()
    r2 = example2().recursion()
    out += [action_graph(r1, n) for n in (1, 2, 3, 4, 5)]  # 1024 vertices at n = 5
    out += [action_graph(r2, n) for n in (1, 3, 5, 6)]  # 729 vertices at n = 6
    return [g for g in out if g.n_vertices <= 2000]


@pytest.mark.parametrize("g", _graphs(), ids=lambda g: f"N{g.n_vertices}D{g.degree}")
def test_iterative_matches_exact(g):
    exact = lambda_exact(g).lam
    it = lambda_iterative(g)
    assert it.converged
    assert it.lam == pytest.approx(exact, abs=1e-6)


@pytest.mark.parametrize("g", _graphs()[4:], ids=lambda g: f"N{g.n_vertices}D{g.degree}")
def test_lanczos_matches_exact(g):
    assert lambda_lanczos(g).lam == pytest.approx(lambda_exact(g).lam, abs=1e-8)


def test_iterative_is_deterministic():
    g = action_graph(example1().recursion(), 4)
    assert lambda_iterative(g, seed=7) == lambda_iterative(g, seed=7)


def test_second_eigenvalue_dispatch():
    g = action_graph(example1().recursion(), 4)
    assert second_eigenvalue(g).method == "dense"
    rep = second_eigenvalue(g, dense_threshold=100)
    assert rep.method == "lanczos"
    assert rep.lam == pytest.approx(lambda_exact(g).lam, abs=1e-8)


@pytest.mark.parametrize("k", [2, 3])
@pytest.mark.parametrize(
    "g",
    [G.cycle_graph(3), G.cycle_graph(9), action_graph(example1().recursion(), 1)],
    ids=["C3", "C9", "gamma1"],
)
def test_power_lambda(g, k):
    # |mu|^k for every mu; the Perron value stays the unique removed one when connected
    assert lambda_exact(G.power(g, k)).lam == pytest.approx(lambda_exact(g).lam ** k, abs=1e-7)


def test_report_json():
    rep = lambda_exact(G.cycle_graph(3))
    d = rep.to_dict()
    assert set(d) == {"lambda", "method", "residual", "iterations", "converged"}
    assert '"lambda"' in rep.to_json()
