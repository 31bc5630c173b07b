"""Second largest absolute eigenvalue of the normalized adjacency matrix."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass

import numpy as np
from scipy.sparse.linalg import ArpackNoConvergence, LinearOperator, eigsh

from .graph import RotationGraph

DENSE_THRESHOLD = 4096
DEFAULT_SEED = 0x5EED
PERRON_TOL = 1e-9


class SpectralError(RuntimeError):
    pass


@dataclass(frozen=True)
class SpectralReport:
    lam: float
    method: str
    residual: float
    iterations: int
    converged: bool = True

    def to_dict(self) -> dict:
        d = asdict(self)
        d["lambda"] = d.pop("lam")
        return {k: d[k] for k in ("lambda", "method", "residual", "iterations", "converged")}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def normalized_spectrum(g: RotationGraph) -> np.ndarray:
    """Ascending eigenvalues of ``A / D``."""
    return np.linalg.eigvalsh(g.adjacency() / g.degree)


def lambda_exact(g: RotationGraph, dense_threshold: int = DENSE_THRESHOLD) -> SpectralReport:
    if g.n_vertices > dense_threshold:
        raise SpectralError(f"{g.n_vertices} vertices exceeds the dense threshold {dense_threshold}")
    ev = normalized_spectrum(g)
    top = int(np.argmax(ev))
    if abs(ev[top] - 1.0) > PERRON_TOL:
        raise SpectralError(f"largest eigenvalue {ev[top]!r} is not 1; adjacency is broken")
    rest = np.delete(ev, top)
    lam = float(np.abs(rest).max()) if rest.size else 0.0
    return SpectralReport(lam, "dense", 0.0, 0)


def _matvec(g: RotationGraph, x: np.ndarray) -> np.ndarray:
    # rows of nbr list one entry per port, so loops and multi-edges weigh right
    return x[g.nbr].sum(axis=1) / g.degree


def lambda_iterative(
    g: RotationGraph,
    tol: float = 1e-10,
    max_iter: int = 20000,
    seed: int = DEFAULT_SEED,
    block: int = 6,
    window: int = 10,
) -> SpectralReport:
    """Block power iteration on ``A / D`` restricted to the complement of the constants.

    Each step multiplies a block of vectors, re-projects out the constant
    vector, and re-orthonormalizes.  The estimate is the largest norm
    growth ratio over the block, taken through a Rayleigh-Ritz step on
    the squared operator, so eigenvalues of either sign are tracked.
    Stops once the estimate moves by less than ``tol`` over ``window``
    consecutive iterations.
    """
    N = g.n_vertices
    if N == 1:
        return SpectralReport(0.0, "iterative", 0.0, 0)
    b = max(1, min(block, N - 1))
    rng = np.random.default_rng(seed)
    V = rng.standard_normal((N, b))
    V -= V.mean(axis=0)
    V, _ = np.linalg.qr(V)
    history: list[float] = []
    est = 0.0
    it = 0
    converged = False
    for it in range(1, max_iter + 1):
        W = np.stack([_matvec(g, V[:, j]) for j in range(b)], axis=1)
        W -= W.mean(axis=0)
        # Rayleigh-Ritz for M^2 on span(V): its eigenvalues are squared |mu|
        ritz = np.linalg.eigvalsh(W.T @ W)
        est = float(np.sqrt(max(ritz[-1], 0.0)))
        history.append(est)
        V, _ = np.linalg.qr(W)
        if len(history) > window and max(history[-window:]) - min(history[-window:]) < tol:
            converged = True
            break
    # residual of the best Ritz vector for M^2
    W = np.stack([_matvec(g, V[:, j]) for j in range(b)], axis=1)
    W -= W.mean(axis=0)
    vals, vecs = np.linalg.eigh(W.T @ W)
    y = V @ vecs[:, -1]
    my = _matvec(g, y)
    my -= my.mean()
    m2y = _matvec(g, my)
    m2y -= m2y.mean()
    residual = float(np.linalg.norm(m2y - vals[-1] * y))
    lam = float(np.sqrt(max(vals[-1], 0.0)))
    return SpectralReport(lam, "iterative", residual, it, converged)


def _projected_operator(g: RotationGraph) -> LinearOperator:
    def mv(x):
        x = np.ravel(x)
        y = _matvec(g, x - x.mean())
        return y - y.mean()

    N = g.n_vertices
    return LinearOperator((N, N), matvec=mv, dtype=np.float64)


def lambda_lanczos(
    g: RotationGraph, tol: float = 1e-12, seed: int = DEFAULT_SEED, max_iter: int | None = None
) -> SpectralReport:
    """ARPACK (implicitly restarted Lanczos) on the projected operator.

    For large graphs whose top eigenvalues cluster too tightly for power
    iteration.  Matrix-free, like :func:`lambda_iterative`.
    """
    N = g.n_vertices
    if N <= 3:
        return lambda_exact(g)
    op = _projected_operator(g)
    v0 = np.random.default_rng(seed).standard_normal(N)
    v0 -= v0.mean()
    converged = True
    try:
        vals, vecs = eigsh(op, k=1, which="LM", tol=tol, v0=v0, maxiter=max_iter)
    except ArpackNoConvergence as exc:
        vals, vecs = exc.eigenvalues, exc.eigenvectors
        converged = False
        if len(vals) == 0:
            raise SpectralError("Lanczos produced no eigenvalue") from None
    mu = float(vals[0])
    v = vecs[:, 0]
    residual = float(np.linalg.norm(op.matvec(v) - mu * v))
    return SpectralReport(abs(mu), "lanczos", residual, 0, converged)


def second_eigenvalue(
    g: RotationGraph,
    dense_threshold: int = DENSE_THRESHOLD,
    tol: float = 1e-10,
    seed: int = DEFAULT_SEED,
) -> SpectralReport:
    """Dense up to ``dense_threshold`` vertices, Lanczos beyond."""
    if g.n_vertices <= dense_threshold:
        return lambda_exact(g, dense_threshold)
    return lambda_lanczos(g, tol=min(tol, 1e-12), seed=seed)
