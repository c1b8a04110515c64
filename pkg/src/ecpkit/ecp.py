"""Error-correcting pairs: verification and the kernel/erasure decoder.

A pair ``(A, B)`` over GF(q^m) is a t-error-correcting pair for a code ``C``
over GF(q) when

* E.1  every ``a * b`` is orthogonal to ``C``,
* E.2  ``dim A > t``,
* E.3  ``d(B^perp) > t``,
* E.4  ``d(A) + d(C) > n``.

The alternative route replaces E.4 by E.5 (``A`` has no identically zero
coordinate) and E.6 (``d(A) + 2t > n``).
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field as dc_field

import numpy as np

from . import codes, linalg
from .codes import CodeError, LinearCode
from .field import GF, FieldError, embed_array, embedding_table

# Exact witness distances are only computed below this cost.
WITNESS_BUDGET = 2**24


class EcpError(ValueError):
    pass


@dataclass(frozen=True)
class EcpPair:
    A: LinearCode
    B: LinearCode
    t: int

    def __post_init__(self):
        if self.A.field != self.B.field or self.A.n != self.B.n:
            raise EcpError("A and B must share length and field")
        if self.t < 1:
            raise EcpError("t must be at least 1")

    @property
    def field(self) -> GF:
        return self.A.field

    @property
    def n(self) -> int:
        return self.A.n

    def extension_degree(self, C: LinearCode) -> int:
        """``m`` such that the pair lives over GF(q^m) for ``C`` over GF(q)."""
        if C.field.p != self.field.p or self.field.e % C.field.e:
            raise FieldError(f"{C.field} is not a subfield of {self.field}")
        return self.field.e // C.field.e

    def to_dict(self) -> dict:
        return {"A": self.A.to_dict(), "B": self.B.to_dict(), "t": self.t,
                "extension": self.field.to_string()}

    @classmethod
    def from_dict(cls, d: dict) -> "EcpPair":
        pair = cls(LinearCode.from_dict(d["A"]), LinearCode.from_dict(d["B"]), int(d["t"]))
        if pair.field.to_string() != d.get("extension", pair.field.to_string()):
            raise EcpError("extension field disagrees with A and B")
        return pair


@dataclass
class EcpReport:
    t: int
    e1: bool
    e2: bool
    e3: bool
    e4: bool | None
    e5: bool
    e6: bool
    dim_a: int
    d_a: int
    d_b_dual: int | None
    d_c: int | None
    d_a_dual: int | None
    dc_bound: bool | None = None
    extension_degree: int = 1
    notes: list[str] = dc_field(default_factory=list)

    @property
    def is_ecp(self) -> bool:
        """E.1 through E.4 all hold."""
        return bool(self.e1 and self.e2 and self.e3 and self.e4)

    @property
    def is_alt_ecp(self) -> bool:
        """E.1, E.2, E.3, E.5 and E.6 all hold."""
        return bool(self.e1 and self.e2 and self.e3 and self.e5 and self.e6)


def _exact_or_none(C: LinearCode) -> int | None:
    try:
        return codes.min_distance(C, budget=WITNESS_BUDGET)
    except CodeError:
        return None


def _check_orthogonal(pair: EcpPair, C: LinearCode) -> bool:
    K = pair.field
    if C.k == 0:
        return True
    prods = codes.star_matrix(K, pair.A.gen, pair.B.gen)
    if prods.shape[0] == 0:
        return True
    Cg = embed_array(C.field, K, C.gen)
    return linalg.is_zero(linalg.matmul(K, prods, Cg.T))


def _common(pair: EcpPair, C: LinearCode) -> dict:
    if C.n != pair.n:
        raise EcpError("code length differs from pair length")
    m = pair.extension_degree(C)
    A, B, t = pair.A, pair.B, pair.t
    d_a = codes.min_distance(A)
    return dict(
        t=t,
        e1=_check_orthogonal(pair, C),
        e2=A.k > t,
        e3=codes.distance_exceeds(codes.dual(B), t),
        e5=not np.any(np.all(A.gen == 0, axis=0)),
        e6=d_a + 2 * t > pair.n,
        dim_a=A.k,
        d_a=d_a,
        d_b_dual=_exact_or_none(codes.dual(B)),
        d_a_dual=_exact_or_none(codes.dual(A)),
        extension_degree=m,
    )


def verify_ecp(pair: EcpPair, C: LinearCode) -> EcpReport:
    """Evaluate E.1 to E.6 exactly.

    E.4 is decided as ``d(C) > n - d(A)`` by an exhaustive column test; the
    exact ``d(C)`` is reported only when cheap to obtain.
    """
    info = _common(pair, C)
    e4 = codes.distance_exceeds(C, pair.n - info["d_a"])
    return EcpReport(e4=e4, d_c=_exact_or_none(C), **info)


def verify_ecp_alt(pair: EcpPair, C: LinearCode) -> EcpReport:
    """Evaluate E.1, E.2, E.3, E.5, E.6; if they hold, test ``d(C) >= 2t + 1``."""
    info = _common(pair, C)
    report = EcpReport(e4=None, d_c=None, **info)
    if report.is_alt_ecp:
        try:
            report.dc_bound = codes.distance_exceeds(C, 2 * pair.t)
        except CodeError:
            report.notes.append("d(C) >= 2t+1 not checked: search too large")
    return report


# -- decoding -------------------------------------------------------------------

def erasure_decode(C: LinearCode, y, J) -> np.ndarray | None:
    """Some ``x`` supported on ``J`` with the syndrome of ``y``, or ``None``."""
    J = sorted(set(int(j) for j in J))
    s = codes.syndrome(C, y)
    H = C.parity_check
    sol = linalg.solve(C.field, H[:, J], s) if H.shape[0] else np.zeros(len(J), dtype=np.int64)
    if sol is None:
        return None
    x = np.zeros(C.n, dtype=np.int64)
    x[J] = sol
    return x


class EcpDecoder:
    """Decoder for ``C`` from a t-error-correcting pair.

    Given ``y = c + e`` with ``wt(e) <= t``, the error-locator space
    ``{a in A : (a * b) . y = 0 for all b in B}`` is nonzero and each of its
    nonzero members vanishes on ``supp(e)``; the error then follows by
    erasure decoding on the zero set of such an ``a``.
    """

    def __init__(self, C: LinearCode, pair: EcpPair):
        if C.n != pair.n:
            raise EcpError("code length differs from pair length")
        pair.extension_degree(C)
        self.C = C
        self.pair = pair
        self.K = pair.field
        self._emb = embedding_table(C.field, self.K)
        # T[l, i, j] = A[i, j] * B[l, j]
        self._T = self.K.mul(pair.B.gen[:, None, :], pair.A.gen[None, :, :])
        self._solvers: dict[tuple[int, ...], tuple] = {}

    def _erasure_solver(self, J: tuple[int, ...]):
        """``(T, cols, r)`` with ``T H[:, J]`` in reduced echelon form.

        The system ``H[:, J] x = s`` is consistent iff ``(T s)[r:] = 0``, and
        then ``x[cols] = (T s)[:r]`` with the other entries zero.
        """
        hit = self._solvers.get(J)
        if hit is None:
            F, H = self.C.field, self.C.parity_check
            m = H.shape[0]
            R, piv, r = linalg.rref(F, np.hstack([H[:, list(J)], linalg.identity(m)]))
            piv = [c for c in piv if c < len(J)]
            r = len(piv)
            hit = (R[:, len(J):], [J[c] for c in piv], r)
            if len(self._solvers) < 4096:
                self._solvers[J] = hit
        return hit

    def _erasure(self, y: np.ndarray, J: np.ndarray) -> np.ndarray | None:
        F = self.C.field
        x = np.zeros(self.C.n, dtype=np.int64)
        if self.C.parity_check.shape[0] == 0:
            return x
        T, cols, r = self._erasure_solver(tuple(J.tolist()))
        z = linalg.matmul(F, T, codes.syndrome(self.C, y))
        if z[r:].any():
            return None
        x[cols] = z[:r]
        return x

    @functools.cached_property
    def d_a(self) -> int:
        return codes.min_distance(self.pair.A)

    def error_locators(self, y) -> np.ndarray:
        """Basis of the error-locator space, as vectors of ``A``."""
        y = np.asarray(y, dtype=np.int64)
        if y.shape != (self.C.n,):
            raise EcpError("received word has wrong length")
        K = self.K
        E = K.sum(K.mul(self._T, self._emb[y]), axis=-1)  # (dim B, dim A)
        kern = linalg.kernel_basis(K, E)
        if kern.shape[0] == 0:
            return np.zeros((0, self.C.n), dtype=np.int64)
        return linalg.matmul(K, kern, self.pair.A.gen)

    def decode(self, y, check: bool = False) -> tuple[np.ndarray, np.ndarray] | None:
        y = np.asarray(y, dtype=np.int64)
        if y.shape != (self.C.n,) or y.min(initial=0) < 0 or y.max(initial=0) >= self.C.field.q:
            return None
        F = self.C.field
        for a in self.error_locators(y):
            J = np.flatnonzero(a == 0)
            if check:
                assert len(J) <= self.C.n - self.d_a, "zero set larger than n - d(A)"
            x = self._erasure(y, J)
            if x is None or codes.weight(x) > self.pair.t:
                continue
            c = F.sub(y, x)
            if codes.is_codeword(self.C, c):
                return c, x
        return None


@functools.lru_cache(maxsize=64)
def _decoder(C: LinearCode, pair: EcpPair) -> EcpDecoder:
    return EcpDecoder(C, pair)


def ecp_decode(C: LinearCode, pair: EcpPair, y) -> tuple[np.ndarray, np.ndarray] | None:
    """Return ``(codeword, error)`` if ``y`` is within ``t`` of ``C``, else ``None``."""
    return _decoder(C, pair).decode(y)
