"""Exact linear algebra over the prime field GF(p).

All matrices are 2-D numpy integer arrays with entries reduced mod p.
These routines back rank/membership/solve queries for stabilizer codes;
they are deliberately dense and simple (desk-scale instances).
"""

from __future__ import annotations

import numpy as np

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47)


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


def check_prime(p: int) -> None:
    """Reject non-prime moduli: residues must form a field."""
    if not is_prime(p):
        raise ValueError(f"qudit dimension must be prime, got {p}")


def inv_mod(a: int, p: int) -> int:
    return pow(int(a) % p, p - 2, p)


def rref(mat: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form over GF(p).

    Returns (R, pivots) where R has the same shape as mat and pivots lists
    the pivot column of each nonzero row in order.
    """
    a = np.array(mat, dtype=np.int64) % p
    nrows, ncols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        pivot_rows = np.nonzero(a[r:, c])[0]
        if pivot_rows.size == 0:
            continue
        pr = r + int(pivot_rows[0])
        if pr != r:
            a[[r, pr]] = a[[pr, r]]
        a[r] = (a[r] * inv_mod(a[r, c], p)) % p
        other = np.nonzero(a[:, c])[0]
        other = other[other != r]
        if other.size:
            a[other] = (a[other] - np.outer(a[other, c], a[r])) % p
        pivots.append(c)
        r += 1
    return a, pivots


def rank(mat: np.ndarray, p: int) -> int:
    if mat.size == 0:
        return 0
    _, pivots = rref(mat, p)
    return len(pivots)


def solve_left(mat: np.ndarray, target: np.ndarray, p: int) -> np.ndarray | None:
    """Solve c @ mat = target over GF(p); returns one solution or None."""
    m = mat.shape[0]
    aug = np.concatenate([mat.T % p, (np.asarray(target, dtype=np.int64) % p)[:, None]], axis=1)
    r, pivots = rref(aug, p)
    # inconsistent iff a pivot lands in the augmented column
    if m in pivots:
        return None
    c = np.zeros(m, dtype=np.int64)
    for row_idx, col in enumerate(pivots):
        c[col] = r[row_idx, m]
    return c


def right_nullspace(mat: np.ndarray, p: int) -> np.ndarray:
    """Basis (as rows) of {w : mat @ w = 0} over GF(p)."""
    nrows, ncols = mat.shape
    if nrows == 0:
        return np.eye(ncols, dtype=np.int64)
    r, pivots = rref(mat, p)
    free = [c for c in range(ncols) if c not in pivots]
    basis = np.zeros((len(free), ncols), dtype=np.int64)
    for i, fc in enumerate(free):
        basis[i, fc] = 1
        for row_idx, pc in enumerate(pivots):
            basis[i, pc] = (-r[row_idx, fc]) % p
    return basis


def left_nullspace(mat: np.ndarray, p: int) -> np.ndarray:
    """Basis (as rows) of {c : c @ mat = 0} over GF(p)."""
    return right_nullspace(mat.T % p, p)


class RowSpace:
    """Row space of a matrix over GF(p) with fast membership queries.

    Membership of v is tested by checking v against a basis of the right
    nullspace (v in rowspace iff v is orthogonal to every kernel vector);
    this vectorizes over batches of candidates.
    """

    def __init__(self, mat: np.ndarray, p: int):
        self.p = p
        self.mat = np.asarray(mat, dtype=np.int64) % p
        self.rref, self.pivots = rref(self.mat, p)
        self.rank = len(self.pivots)
        self.kernel = right_nullspace(self.mat, p)  # rows

    def contains(self, v: np.ndarray) -> bool:
        if self.kernel.shape[0] == 0:
            return True
        return not np.any((self.kernel @ (np.asarray(v, dtype=np.int64) % self.p)) % self.p)

    def contains_batch(self, vs: np.ndarray) -> np.ndarray:
        """Boolean mask over rows of vs."""
        if self.kernel.shape[0] == 0:
            return np.ones(vs.shape[0], dtype=bool)
        res = (vs.astype(np.int64) @ self.kernel.T) % self.p
        return ~np.any(res, axis=1)

    def coefficients(self, v: np.ndarray) -> np.ndarray | None:
        """c with c @ mat = v, or None if v is not in the row space."""
        return solve_left(self.mat, v, self.p)
