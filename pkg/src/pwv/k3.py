"""The K3 lattice U^3 + E8(-1)^2 and the shipped K3 manifold document."""

from __future__ import annotations

from .algebra import build_k3
from .linalg import Matrix

# Cartan matrix of E8 (Bourbaki labelling); E8(-1) is its negative.
E8_CARTAN = [
    [2, 0, -1, 0, 0, 0, 0, 0],
    [0, 2, 0, -1, 0, 0, 0, 0],
    [-1, 0, 2, -1, 0, 0, 0, 0],
    [0, -1, -1, 2, -1, 0, 0, 0],
    [0, 0, 0, -1, 2, -1, 0, 0],
    [0, 0, 0, 0, -1, 2, -1, 0],
    [0, 0, 0, 0, 0, -1, 2, -1],
    [0, 0, 0, 0, 0, 0, -1, 2],
]
U = [[0, 1], [1, 0]]


def k3_gram() -> Matrix:
    e8m = Matrix(E8_CARTAN).scale(-1)
    return Matrix.block_diagonal([Matrix(U)] * 3 + [e8m, e8m])


def k3_document() -> dict:
    """beta = e_0 and eta = e_1 - e_0 in the first hyperbolic plane."""
    G = k3_gram()
    A = build_k3(G)
    b2 = 22
    beta = [1 if k == 0 else 0 for k in range(b2)]
    eta = [-1 if k == 0 else (1 if k == 1 else 0) for k in range(b2)]
    return {
        "schema_version": 1,
        "name": "K3 (U^3 + E8(-1)^2)",
        "n": 1,
        "betti": list(A.betti),
        "cup": A.sparse_products(),
        "bbf_gram": [[int(G[i, j]) for j in range(b2)] for i in range(b2)],
        "eta": eta,
        "beta": beta,
        "hodge_diamond": [[1, 0, 1], [0, 20, 0], [1, 0, 1]],
    }
