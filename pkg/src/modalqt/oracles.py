"""Brute-force cross-checks that share no code with the exact solvers."""

from __future__ import annotations

import numpy as np

from .clone_delete import ExactTarget, LinearFeasibilityProblem, RayTarget


def _all_binary_matrices(n: int) -> np.ndarray:
    k = n * n
    codes = np.arange(2**k, dtype=np.uint32)
    bits = (codes[:, None] >> np.arange(k, dtype=np.uint32)) & 1
    return bits.reshape(-1, n, n).astype(np.uint8)


def _gf2_full_rank(mats: np.ndarray) -> np.ndarray:
    """Vectorized rank test over GF(2) for a stack of square matrices."""
    a = mats.copy()
    count, n, _ = a.shape
    ok = np.ones(count, dtype=bool)
    idx = np.arange(count)
    for c in range(n):
        # move a row with a 1 in column c (at or below c) into position c
        has = a[:, c:, c] == 1
        found = has.any(axis=1)
        ok &= found
        sel = c + np.argmax(has, axis=1)
        pivot = a[idx, sel].copy()
        a[idx, sel] = a[:, c]
        a[:, c] = pivot
        elim = (a[:, :, c] == 1)
        elim[:, c] = False
        a ^= elim[:, :, None] * pivot[:, None, :]
    return ok


def exhaustive_gf2_feasibility(problem: LinearFeasibilityProblem) -> bool:
    """Whether any of the ``2^(n*n)`` GF(2) matrices satisfies ``problem``.

    Over GF(2) the only nonzero scalar is 1, so ray targets are exact.
    Only square maps with ``n * n <= 20`` are supported.
    """
    if problem.field.p != 2 or problem.nrows != problem.ncols:
        raise ValueError("the exhaustive oracle handles square GF(2) maps only")
    n = problem.ncols
    if n * n > 20:
        raise ValueError(f"2^{n * n} matrices is too many to enumerate")
    mats = _all_binary_matrices(n)
    ok = np.ones(len(mats), dtype=bool)
    for c in problem.constraints:
        if not isinstance(c, (ExactTarget, RayTarget)):
            raise ValueError("the exhaustive oracle handles exact and ray targets only")
        x = np.array(c.x.entries, dtype=np.uint8)
        y = np.array(c.y.entries, dtype=np.uint8)
        out = (mats.astype(np.uint32) @ x.astype(np.uint32)) % 2
        ok &= (out == y).all(axis=1)
    if problem.require_invertible:
        cand = np.flatnonzero(ok)
        if len(cand):
            ok[cand] = _gf2_full_rank(mats[cand])
    return bool(ok.any())
