"""Dense Gaussian elimination over a finite field.

Matrices are 2-D ``int64`` arrays of field encodings (see :mod:`ecpkit.field`)
passed together with their :class:`~ecpkit.field.GF`.  Nothing here mutates
its inputs.
"""

from __future__ import annotations

from itertools import combinations
from typing import Iterator, Sequence

import numpy as np

from .field import GF, FieldError


class LinalgError(ValueError):
    pass


def as_matrix(M, cols: int | None = None) -> np.ndarray:
    M = np.asarray(M, dtype=np.int64)
    if M.ndim == 1:
        if M.size == 0 and cols is not None:
            return M.reshape(0, cols)
        M = M.reshape(1, -1)
    if M.ndim != 2:
        raise LinalgError(f"expected a matrix, got shape {M.shape}")
    return M


def rref(F: GF, M) -> tuple[np.ndarray, list[int], int]:
    """Reduced row echelon form.

    Returns ``(R, pivots, rank)``.  The pivot in each column is the first
    nonzero entry at or below the current row.
    """
    R = as_matrix(M).copy()
    rows, cols = R.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(R[r:, c])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            R[[r, i]] = R[[i, r]]
        if R[r, c] != 1:
            R[r] = F.mul(R[r], F.inv(R[r, c]))
        f = R[:, c].copy()
        f[r] = 0
        nzr = np.flatnonzero(f)
        if nzr.size:
            R[nzr] = F.sub(R[nzr], F.mul(f[nzr, None], R[r][None, :]))
        pivots.append(c)
        r += 1
    return R, pivots, len(pivots)


def rank(F: GF, M) -> int:
    return rref(F, M)[2]


def kernel_basis(F: GF, M) -> np.ndarray:
    """Rows form a basis of ``{v : M v^T = 0}``."""
    M = as_matrix(M)
    cols = M.shape[1]
    R, pivots, r = rref(F, M)
    free = [c for c in range(cols) if c not in set(pivots)]
    K = np.zeros((len(free), cols), dtype=np.int64)
    for i, f in enumerate(free):
        K[i, f] = 1
        if r:
            K[i, pivots] = F.neg(R[:r, f])
    return K


def left_kernel_basis(F: GF, M) -> np.ndarray:
    """Rows form a basis of ``{u : u M = 0}``."""
    return kernel_basis(F, as_matrix(M).T)


def solve(F: GF, A, b) -> np.ndarray | None:
    """Some ``x`` with ``A x = b``, free variables zero; ``None`` if inconsistent."""
    A = as_matrix(A)
    b = np.asarray(b, dtype=np.int64).reshape(-1)
    rows, cols = A.shape
    if b.size != rows:
        raise LinalgError("dimension mismatch in solve")
    R, pivots, r = rref(F, np.hstack([A, b[:, None]]))
    if pivots and pivots[-1] == cols:
        return None
    x = np.zeros(cols, dtype=np.int64)
    x[pivots] = R[:r, cols]
    return x


def matmul(F: GF, A, B) -> np.ndarray:
    A, B = np.asarray(A, dtype=np.int64), np.asarray(B, dtype=np.int64)
    if A.shape[-1] != B.shape[0]:
        raise LinalgError(f"cannot multiply {A.shape} by {B.shape}")
    if B.ndim == 1:
        return matmul(F, A, B[:, None])[..., 0]
    inner = A.shape[-1]
    if F.e == 1 and F.p < 2**26 and inner < 2**11:
        return (A @ B) % F.p
    if A.size // max(inner, 1) * B.size <= 2**18:
        return F.sum(F.mul(A[..., :, None], B), axis=-2)
    out = np.zeros(A.shape[:-1] + B.shape[1:], dtype=np.int64)
    for i in range(inner):
        out = F.add(out, F.mul(A[..., i, None], B[i]))
    return out


def vecmat(F: GF, v, M) -> np.ndarray:
    return matmul(F, np.asarray(v, dtype=np.int64)[None, :], M)[0]


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


def inverse(F: GF, M) -> np.ndarray:
    M = as_matrix(M)
    n = M.shape[0]
    if M.shape != (n, n):
        raise LinalgError("inverse of a non-square matrix")
    R, pivots, r = rref(F, np.hstack([M, identity(n)]))
    if r < n or pivots[n - 1] != n - 1:
        raise LinalgError("matrix is singular")
    return R[:, n:]


def systematic_form(F: GF, G) -> tuple[np.ndarray, list[int]]:
    """Bring a full-rank ``k x n`` matrix to ``(I_k | P)``.

    Returns ``(Gsys, perm)`` with ``Gsys`` row-equivalent to ``G[:, perm]``.
    Only the non-pivot positions among the first ``k`` columns are swapped,
    each with the next unused pivot column to the right.
    """
    G = as_matrix(G)
    k, n = G.shape
    _, pivots, r = rref(F, G)
    if r < k:
        raise LinalgError("generator matrix is rank deficient")
    perm = list(range(n))
    outside = [c for c in pivots if c >= k]
    for pos in range(k):
        if pos not in pivots:
            c = outside.pop(0)
            perm[pos], perm[c] = perm[c], perm[pos]
    Gsys, _, _ = rref(F, G[:, perm])
    return Gsys, perm


def batch_rank(F: GF, stack) -> np.ndarray:
    """Ranks of a stack of matrices with shape ``(N, r, c)``."""
    S = np.asarray(stack, dtype=np.int64).copy()
    N, r, c = S.shape
    used = np.zeros((N, r), dtype=bool)
    idx_all = np.arange(N)
    for col in range(c):
        cand = (S[:, :, col] != 0) & ~used
        has = cand.any(axis=1)
        if not has.any():
            continue
        idx = idx_all[has]
        prow = cand[idx].argmax(axis=1)
        sub = S[idx]
        piv = sub[np.arange(idx.size), prow]  # (N', c)
        piv = F.mul(piv, F.inv(piv[:, col])[:, None])
        factors = sub[:, :, col].copy()
        factors[np.arange(idx.size), prow] = 0
        sub = F.sub(sub, F.mul(factors[:, :, None], piv[:, None, :]))
        sub[np.arange(idx.size), prow] = piv
        S[idx] = sub
        used[idx, prow] = True
    return used.sum(axis=1)


def column_subsets(n: int, w: int) -> Iterator[np.ndarray]:
    """All ``w``-subsets of ``range(n)`` in lexicographic order, in chunks."""
    chunk = []
    for s in combinations(range(n), w):
        chunk.append(s)
        if len(chunk) == 4096:
            yield np.array(chunk, dtype=np.int64).reshape(-1, w)
            chunk = []
    if chunk:
        yield np.array(chunk, dtype=np.int64).reshape(-1, w)


def all_subsets_independent(F: GF, M, w: int) -> bool:
    """Whether every set of ``w`` columns of ``M`` is linearly independent."""
    M = as_matrix(M)
    rows, n = M.shape
    if w <= 0:
        return True
    if w > n:
        return True
    if w > rows:
        return False
    for subs in column_subsets(n, w):
        stack = np.transpose(M[:, subs], (1, 0, 2))  # (N, rows, w)
        if np.any(batch_rank(F, stack) < w):
            return False
    return True


def random_matrix(F: GF, rows: int, cols: int, rng: np.random.Generator) -> np.ndarray:
    return F.random(rng, (rows, cols))


def random_invertible(F: GF, n: int, rng: np.random.Generator) -> np.ndarray:
    while True:
        S = random_matrix(F, n, n, rng)
        if rank(F, S) == n:
            return S


def random_full_rank(F: GF, rows: int, cols: int, rng: np.random.Generator) -> np.ndarray:
    if rows > cols:
        raise LinalgError("cannot have full row rank with rows > cols")
    while True:
        M = random_matrix(F, rows, cols, rng)
        if rank(F, M) == rows:
            return M


# -- text format ---------------------------------------------------------------

def format_entry(F: GF, v: int) -> str:
    if F.e == 1:
        return str(int(v))
    return ".".join(str(c) for c in F.coeffs(int(v)))


def parse_entry(F: GF, s: str) -> int:
    s = s.strip()
    try:
        if F.e == 1:
            if "." in s:
                raise ValueError
            v = int(s)
            if not 0 <= v < F.p:
                raise ValueError
            return v
        parts = [int(c) for c in s.split(".")]
        if len(parts) != F.e or any(not 0 <= c < F.p for c in parts):
            raise ValueError
        return F.from_coeffs(parts)
    except (ValueError, FieldError):
        raise LinalgError(f"{s!r} is not an element of {F}") from None


def format_vector(F: GF, v) -> str:
    return ",".join(format_entry(F, x) for x in np.asarray(v).reshape(-1))


def parse_vector(F: GF, text: str) -> np.ndarray:
    text = text.strip()
    if not text:
        return np.zeros(0, dtype=np.int64)
    return np.array([parse_entry(F, s) for s in text.split(",")], dtype=np.int64)


def format_matrix(F: GF, M) -> str:
    return ";".join(format_vector(F, row) for row in as_matrix(M))


def parse_matrix(F: GF, text: str, cols: int | None = None) -> np.ndarray:
    text = text.strip()
    if not text:
        return np.zeros((0, cols or 0), dtype=np.int64)
    rows = [parse_vector(F, r) for r in text.split(";")]
    widths = {r.size for r in rows}
    if len(widths) != 1 or (cols is not None and widths != {cols}):
        raise LinalgError("ragged or mis-sized matrix text")
    return np.vstack(rows)


def is_zero(M: Sequence) -> bool:
    return not np.any(np.asarray(M))
