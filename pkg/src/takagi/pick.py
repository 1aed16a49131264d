"""Pick matrices and their Gram-vector decompositions."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import Inertia, hermitian_inertia, hermitize

MIN_NODE_SEPARATION = 1e-9


@dataclass(frozen=True)
class DiskProblem:
    """Interpolation data on the unit disk: distinct nodes, arbitrary values."""

    nodes: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        nodes = np.atleast_1d(np.asarray(self.nodes, dtype=complex))
        values = np.atleast_1d(np.asarray(self.values, dtype=complex))
        if nodes.size == 0:
            raise ValueError("need at least one node")
        if nodes.size != values.size:
            raise ValueError("nodes and values must have equal length")
        if np.any(np.abs(nodes) >= 1.0):
            raise ValueError("all nodes must lie strictly inside the unit disk")
        for i in range(nodes.size):
            for j in range(i + 1, nodes.size):
                if abs(nodes[i] - nodes[j]) <= MIN_NODE_SEPARATION:
                    raise ValueError(f"nodes {i} and {j} coincide")
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "values", values)

    @property
    def size(self) -> int:
        return self.nodes.size


def pick_matrix(problem: DiskProblem) -> np.ndarray:
    """Hermitian matrix (1 - w_i conj(w_j)) / (1 - lam_i conj(lam_j))."""
    lam = problem.nodes
    w = problem.values
    G = (1.0 - np.outer(w, w.conj())) / (1.0 - np.outer(lam, lam.conj()))
    return hermitize(G)


@dataclass(frozen=True)
class GramDecomposition:
    """Split of a Hermitian G into Gram(u) - Gram(v), plus conditioning vectors y.

    Rows of u/v/y are the per-node vectors; ``G = u u* - v v*`` and
    ``B = u u* + v v* + y y*`` is positive definite.
    """

    u: np.ndarray  # N x pi
    v: np.ndarray  # N x nu
    y: np.ndarray  # N x zeta
    inertia: Inertia


def gram_decompose(G: np.ndarray, tol: float = 1e-9) -> GramDecomposition:
    """Eigen-based Gram decomposition of a Hermitian matrix.

    u comes from the positive eigenpairs scaled by sqrt(lam), v from the
    negative ones scaled by sqrt(|lam|).  The y block is sqrt(max(1,||G||))
    times the null eigenvectors, which makes B strictly positive definite.
    """
    inertia, evals, evecs = hermitian_inertia(G, tol)
    cutoff = tol * max(1.0, float(np.max(np.abs(evals))) if evals.size else 0.0)
    pos = evals > cutoff
    neg = evals < -cutoff
    zer = ~(pos | neg)
    u = evecs[:, pos] * np.sqrt(evals[pos])
    v = evecs[:, neg] * np.sqrt(-evals[neg])
    c = max(1.0, float(np.linalg.norm(G, 2)) if np.asarray(G).size else 1.0)
    y = evecs[:, zer] * np.sqrt(c)
    return GramDecomposition(u=u, v=v, y=y, inertia=inertia)
