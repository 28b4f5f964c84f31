"""Synthetic nilpotent operators for checking the weight-filtration oracle."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import List, Sequence

from .linalg import Matrix, inverse


@dataclass(frozen=True)
class JordanConfig:
    max_block: int = 5
    max_blocks: int = 4
    entry_bound: int = 2
    mixing_steps: int = 12


@dataclass(frozen=True)
class JordanSample:
    sizes: tuple
    N: Matrix
    H: Matrix   # sl2 grading with [H, N] = 2N, conjugated like N


def jordan_pair(sizes: Sequence[int]):
    """Block-diagonal nilpotent N (e_k -> e_{k+1} in each block) and its grading."""
    dim = sum(sizes)
    N = [[0] * dim for _ in range(dim)]
    H = [0] * dim
    start = 0
    for s in sizes:
        for k in range(s):
            H[start + k] = -(s - 1) + 2 * k
            if k + 1 < s:
                N[start + k + 1][start + k] = 1
        start += s
    return Matrix(N, cols=dim), Matrix.diagonal(H)


def random_unimodular(dim: int, rng: random.Random, cfg: JordanConfig = JordanConfig()) -> Matrix:
    C = Matrix.identity(dim)
    if dim < 2:
        return C
    for _ in range(cfg.mixing_steps):
        i, j = rng.sample(range(dim), 2)
        c = rng.randint(-cfg.entry_bound, cfg.entry_bound)
        E = [[1 if r == s else 0 for s in range(dim)] for r in range(dim)]
        E[i][j] = c
        C = C @ Matrix(E)
    return C


def random_jordan_sample(rng: random.Random, cfg: JordanConfig = JordanConfig()) -> JordanSample:
    sizes = tuple(rng.randint(1, cfg.max_block) for _ in range(rng.randint(1, cfg.max_blocks)))
    N, H = jordan_pair(sizes)
    C = random_unimodular(N.rows, rng, cfg)
    Ci = inverse(C)
    return JordanSample(sizes, C @ N @ Ci, C @ H @ Ci)


def expected_graded_dims(sizes: Sequence[int], d: int, ks: Sequence[int]) -> List[int]:
    """dim Gr^W_k for blocks centred at d: a block of size s has weights d - s + 1, ..., d + s - 1."""
    out = []
    for k in ks:
        out.append(sum(1 for s in sizes for m in range(-(s - 1), s, 2) if d - m == k))
    return out
