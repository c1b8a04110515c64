"""Linear codes held by a canonical (rref) generator matrix."""

from __future__ import annotations

import functools
import json
from math import comb
from typing import Iterable

import numpy as np

from . import linalg
from .field import GF, FieldError, embed_array, embedding_table, parse_field
from .linalg import as_matrix

# Exhaustive searches estimated above this many element operations are refused.
SEARCH_BUDGET = 2**31


class CodeError(ValueError):
    pass


class LinearCode:
    """A ``k``-dimensional subspace of ``F^n``.

    ``gen`` is always in reduced row echelon form without zero rows, so two
    codes are equal iff their generators are identical.
    """

    def __init__(self, field: GF, n: int, rows=()):
        M = as_matrix(rows, cols=n) if np.size(rows) else np.zeros((0, n), dtype=np.int64)
        if M.shape[1] != n:
            raise CodeError(f"rows have length {M.shape[1]}, expected {n}")
        if M.size and (M.min() < 0 or M.max() >= field.q):
            raise CodeError(f"entries outside {field}")
        R, _, r = linalg.rref(field, M) if M.shape[0] else (M, [], 0)
        gen = R[:r].copy()
        gen.setflags(write=False)
        self.field = field
        self.n = n
        self.k = r
        self.gen = gen

    def __eq__(self, other):
        return (isinstance(other, LinearCode) and self.field == other.field
                and self.n == other.n and np.array_equal(self.gen, other.gen))

    def __hash__(self):
        return hash((self.field, self.n, self.gen.tobytes()))

    def __repr__(self):
        return f"LinearCode([{self.n},{self.k}] over {self.field})"

    @functools.cached_property
    def parity_check(self) -> np.ndarray:
        H = linalg.kernel_basis(self.field, self.gen) if self.k else linalg.identity(self.n)
        H.setflags(write=False)
        return H

    def encode(self, m) -> np.ndarray:
        return linalg.vecmat(self.field, m, self.gen)

    def to_dict(self) -> dict:
        return {"field": self.field.to_string(), "n": self.n, "k": self.k,
                "generator": linalg.format_matrix(self.field, self.gen)}

    @classmethod
    def from_dict(cls, d: dict) -> "LinearCode":
        F = parse_field(d["field"])
        n = int(d["n"])
        gen = linalg.parse_matrix(F, d["generator"], cols=n)
        code = cls(F, n, gen)
        if code.k != int(d["k"]) or not np.array_equal(code.gen, gen):
            raise CodeError("generator is not canonical or k disagrees")
        return code

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "LinearCode":
        return cls.from_dict(json.loads(text))


def code_from_rows(field: GF, n: int, rows: Iterable) -> LinearCode:
    rows = list(rows) if not isinstance(rows, np.ndarray) else rows
    if len(rows) == 0:
        return LinearCode(field, n)
    M = np.array([np.asarray(r, dtype=np.int64) for r in rows]) if isinstance(rows, list) else rows
    if M.ndim != 2 or M.shape[1] != n:
        raise CodeError("row length mismatch")
    return LinearCode(field, n, M)


def full_space(field: GF, n: int) -> LinearCode:
    return LinearCode(field, n, linalg.identity(n))


def zero_code(field: GF, n: int) -> LinearCode:
    return LinearCode(field, n)


def dual(C: LinearCode) -> LinearCode:
    return LinearCode(C.field, C.n, C.parity_check if C.k < C.n else ())


def contains(C: LinearCode, D: LinearCode) -> bool:
    """Whether ``D`` is a subcode of ``C``."""
    if D.k == 0:
        return True
    return linalg.is_zero(linalg.matmul(C.field, D.gen, C.parity_check.T))


def syndrome(C: LinearCode, y) -> np.ndarray:
    y = np.asarray(y, dtype=np.int64)
    if y.shape[-1] != C.n:
        raise CodeError("vector length mismatch")
    return linalg.matmul(C.field, y, C.parity_check.T)


def is_codeword(C: LinearCode, y) -> bool:
    return linalg.is_zero(syndrome(C, y))


def weight(v) -> int:
    return int(np.count_nonzero(v))


def permute(C: LinearCode, perm) -> LinearCode:
    """Code whose ``j``-th coordinate is coordinate ``perm[j]`` of ``C``."""
    return LinearCode(C.field, C.n, C.gen[:, list(perm)])


# -- star products ---------------------------------------------------------------

def star_vectors(F: GF, u, v) -> np.ndarray:
    u, v = np.asarray(u, dtype=np.int64), np.asarray(v, dtype=np.int64)
    if u.shape != v.shape:
        raise CodeError("star product of vectors with different lengths")
    return F.mul(u, v)


def star_matrix(F: GF, U, V) -> np.ndarray:
    """Rows ``u_i * v_j`` in lexicographic ``(i, j)`` order."""
    U, V = as_matrix(U), as_matrix(V)
    if U.shape[1] != V.shape[1]:
        raise CodeError("length mismatch")
    return F.mul(U[:, None, :], V[None, :, :]).reshape(-1, U.shape[1])


def symmetric_star_matrix(F: GF, U) -> np.ndarray:
    """Rows ``u_i * u_j`` for ``i <= j``."""
    U = as_matrix(U)
    i, j = np.triu_indices(U.shape[0])
    return F.mul(U[i], U[j])


def _check_compatible(A: LinearCode, B: LinearCode) -> None:
    if A.field != B.field:
        raise FieldError(f"codes over {A.field} and {B.field}")
    if A.n != B.n:
        raise CodeError("codes of different length")


def star_codes(A: LinearCode, B: LinearCode) -> LinearCode:
    _check_compatible(A, B)
    if A.k == 0 or B.k == 0:
        return zero_code(A.field, A.n)
    if A == B:
        return square(A)
    return LinearCode(A.field, A.n, star_matrix(A.field, A.gen, B.gen))


def square(C: LinearCode) -> LinearCode:
    if C.k == 0:
        return C
    return LinearCode(C.field, C.n, symmetric_star_matrix(C.field, C.gen))


def sym2_kernel_dim(C: LinearCode) -> int:
    return comb(C.k + 1, 2) - square(C).k


# -- distances -----------------------------------------------------------------

def _enumeration_cost(C: LinearCode) -> int:
    return C.field.q ** C.k * C.n


def _span_cost(C: LinearCode) -> int:
    return comb(C.n, max(C.k - 1, 0)) * C.n * C.k**3


def _subset_cost(C: LinearCode, w: int) -> int:
    return comb(C.n, w) * (C.n - C.k) * w * w


def _column_cost(C: LinearCode) -> int:
    return sum(_subset_cost(C, w) for w in range(1, C.n - C.k + 2))


def _min_distance_enumerate(C: LinearCode) -> int:
    F, k, n = C.field, C.k, C.n
    q = F.q
    # codewords = left half (messages on the first k1 rows) + right half
    k1 = k // 2

    def words(G):
        msgs = np.zeros((1, 0), dtype=np.int64)
        for _ in range(G.shape[0]):
            msgs = np.hstack([np.repeat(msgs, q, axis=0),
                              np.tile(np.arange(q), msgs.shape[0])[:, None]])
        return linalg.matmul(F, msgs, G) if G.shape[0] else np.zeros((1, n), dtype=np.int64)

    left = words(C.gen[:k1])
    right = words(C.gen[k1:])
    best = n + 1
    step = max(1, 2**20 // max(1, right.shape[0] * n))
    for s in range(0, left.shape[0], step):
        block = F.add(left[s:s + step, None, :], right[None, :, :])
        w = np.count_nonzero(block, axis=-1)
        w[w == 0] = n + 1
        best = min(best, int(w.min()))
    return best


def _min_distance_span(C: LinearCode) -> int:
    """``n`` minus the largest column set of rank ``k - 1``."""
    F, G, k, n = C.field, C.gen, C.k, C.n
    if k == 1:
        return int(np.count_nonzero(G[0]))
    best_zero = 0
    for subs in linalg.column_subsets(n, k - 1):
        base = np.transpose(G[:, subs], (1, 0, 2))  # (N, k, k-1)
        ranks = linalg.batch_rank(F, base)
        keep = ranks == k - 1
        if not keep.any():
            continue
        base = base[keep]
        N = base.shape[0]
        ext = np.concatenate([np.repeat(base[:, None], n, axis=1),
                              np.broadcast_to(G.T[None, :, :, None], (N, n, k, 1))], axis=-1)
        r = linalg.batch_rank(F, ext.reshape(N * n, k, k)).reshape(N, n)
        best_zero = max(best_zero, int((r == k - 1).sum(axis=1).max()))
    return n - best_zero


def _min_distance_columns(C: LinearCode) -> int:
    H = C.parity_check
    for w in range(1, C.n - C.k + 2):
        if not linalg.all_subsets_independent(C.field, H, w):
            return w
    raise AssertionError("Singleton bound violated")  # unreachable


def min_distance(C: LinearCode, method: str = "auto", budget: int | None = None) -> int:
    """Exact minimum distance; the zero code has distance ``n + 1``.

    ``method`` is one of ``enumerate`` (all ``q^k`` codewords), ``span``
    (largest column set of rank ``k-1`` in the generator), ``columns``
    (smallest dependent column set of the parity-check matrix), or ``auto``
    for the cheapest of the three.  Searches whose estimated cost exceeds
    ``budget`` (default :data:`SEARCH_BUDGET`) raise :class:`CodeError`.
    """
    if C.k == 0:
        return C.n + 1
    costs = {"enumerate": _enumeration_cost(C), "span": _span_cost(C),
             "columns": _column_cost(C)}
    if method == "auto":
        method = min(costs, key=costs.get)
    if method not in costs:
        raise ValueError(f"unknown method {method!r}")
    if costs[method] > (budget or SEARCH_BUDGET):
        raise CodeError(f"minimum distance search too large ({method}, {costs[method]})")
    return {"enumerate": _min_distance_enumerate, "span": _min_distance_span,
            "columns": _min_distance_columns}[method](C)


def distance_exceeds(C: LinearCode, w: int) -> bool:
    """Exact test of ``d(C) > w``: every ``w`` columns of H are independent."""
    if w < 1:
        return True
    if C.k == 0:
        return w < C.n + 1
    if w > C.n - C.k:
        return False
    subset_cost, enum_cost = _subset_cost(C, w), _enumeration_cost(C)
    if min(subset_cost, enum_cost) > SEARCH_BUDGET:
        raise CodeError("distance test too large")
    if enum_cost < subset_cost:
        return _min_distance_enumerate(C) > w
    return linalg.all_subsets_independent(C.field, C.parity_check, w)


# -- derived codes -----------------------------------------------------------

def shorten(C: LinearCode, J) -> LinearCode:
    """Codewords vanishing on ``J``, restricted to the remaining positions."""
    J = sorted(set(int(j) for j in J))
    if any(not 0 <= j < C.n for j in J):
        raise CodeError("position out of range")
    rest = [j for j in range(C.n) if j not in set(J)]
    if not J:
        return C
    if C.k == 0:
        return zero_code(C.field, len(rest))
    coeffs = linalg.left_kernel_basis(C.field, C.gen[:, J])
    if coeffs.shape[0] == 0:
        return zero_code(C.field, len(rest))
    return LinearCode(C.field, len(rest), linalg.matmul(C.field, coeffs, C.gen)[:, rest])


def embed_code(C: LinearCode, target: GF) -> LinearCode:
    """The extension code spanned by ``C`` over ``target``."""
    if C.field == target:
        return C
    return LinearCode(target, C.n, embed_array(C.field, target, C.gen) if C.k else ())


def subfield_subcode(C: LinearCode, base: GF) -> LinearCode:
    """``{c in base^n : c in C}`` computed from GF(p)-expanded parity checks."""
    K = C.field
    if K == base:
        return C
    if base.p != K.p or K.e % base.e:
        raise FieldError(f"{base} is not a subfield of {K}")
    n = C.n
    H = C.parity_check
    if H.shape[0] == 0:
        return full_space(base, n)
    p = K.p
    emb = embedding_table(base, K)
    # images of the GF(p)-basis 1, x, ..., x^(e-1) of the base field
    basis = emb[p ** np.arange(base.e)]
    # products[j, i, d] = H[j, i] * basis[d]; expand into GF(p) digits
    prod = K.mul(H[:, :, None], basis[None, None, :])
    digits = K.digits(prod)  # (r, n, e_base, E)
    r = H.shape[0]
    system = digits.transpose(0, 3, 1, 2).reshape(r * K.e, n * base.e)
    Fp = GF(p)
    kern = linalg.kernel_basis(Fp, system % p)
    if kern.shape[0] == 0:
        return zero_code(base, n)
    vecs = base.from_digits(kern.reshape(-1, n, base.e))
    return LinearCode(base, n, vecs)
