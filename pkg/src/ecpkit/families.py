"""Code families that come with an error-correcting pair.

GRS codes and their duals, random subcodes of GRS codes, alternant and
classical Goppa codes (subfield subcodes of GRS codes), and random pairs
``(A, B)`` with ``C = (A * B)^perp``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import codes, linalg
from .codes import LinearCode
from .ecp import EcpPair
from .field import GF, FieldError, parse_field


class FamilyError(ValueError):
    pass


@dataclass(frozen=True)
class GrsSpec:
    field: GF
    a: tuple[int, ...]
    b: tuple[int, ...]
    k: int

    def __post_init__(self):
        a, b = tuple(int(x) for x in self.a), tuple(int(x) for x in self.b)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        n = len(a)
        if len(b) != n:
            raise FamilyError("a and b must have the same length")
        if len(set(a)) != n:
            raise FamilyError("locators must be pairwise distinct")
        if any(x == 0 for x in b):
            raise FamilyError("column multipliers must be nonzero")
        if any(not 0 <= x < self.field.q for x in a + b):
            raise FamilyError(f"entries outside {self.field}")
        if not 0 <= self.k <= n or n > self.field.q:
            raise FamilyError(f"need 0 <= k <= n <= q, got k={self.k}, n={n}")

    @property
    def n(self) -> int:
        return len(self.a)

    def to_dict(self) -> dict:
        return {"field": self.field.to_string(), "a": list(self.a), "b": list(self.b), "k": self.k}

    @classmethod
    def from_dict(cls, d: dict) -> "GrsSpec":
        return cls(parse_field(d["field"]), tuple(d["a"]), tuple(d["b"]), int(d["k"]))


def default_locators(F: GF, n: int) -> tuple[int, ...]:
    if n > F.q:
        raise FamilyError(f"only {F.q} distinct locators in {F}")
    return tuple(range(n))


def grs_generator(F: GF, a, b, k: int) -> np.ndarray:
    """Rows ``b * a^i`` for ``i = 0, ..., k-1``."""
    a, b = np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64)
    rows = np.empty((k, a.size), dtype=np.int64)
    power = np.ones_like(a)
    for i in range(k):
        rows[i] = F.mul(b, power)
        power = F.mul(power, a)
    return rows


def grs_code(s: GrsSpec) -> LinearCode:
    return LinearCode(s.field, s.n, grs_generator(s.field, s.a, s.b, s.k))


def grs(F: GF, a, b, k: int) -> LinearCode:
    return grs_code(GrsSpec(F, tuple(a), tuple(b), k))


def grs_dual_multiplier(F: GF, a, b) -> tuple[int, ...]:
    """``b'`` with ``GRS_k(a, b)^perp = GRS_{n-k}(a, b')`` for all ``k``.

    ``b'_j = (b_j * prod_{i != j} (a_j - a_i))^{-1}``.
    """
    a, b = np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64)
    n = a.size
    out = []
    for j in range(n):
        diffs = F.sub(a[j], np.delete(a, j))
        prod = 1
        for d in diffs:
            prod = int(F.mul(prod, d))
        out.append(int(F.inv(F.mul(prod, b[j]))))
    return tuple(out)


def grs_ecp(s: GrsSpec) -> EcpPair:
    """The pair ``A = GRS_{t+1}(a, b')``, ``B = GRS_t(a, 1)`` with ``t = (n-k)//2``."""
    t = (s.n - s.k) // 2
    if t < 1:
        raise FamilyError("n - k < 2: no error-correcting pair (t = 0)")
    b_dual = grs_dual_multiplier(s.field, s.a, s.b)
    A = grs(s.field, s.a, b_dual, t + 1)
    B = grs(s.field, s.a, (1,) * s.n, t)
    return EcpPair(A, B, t)


def forward_grs_ecp(F: GF, a, u, v, t: int) -> tuple[LinearCode, LinearCode, LinearCode]:
    """``A = GRS_{t+1}(a, u)``, ``B = GRS_t(a, v)``, ``C = GRS_{2t}(a, u*v)^perp``."""
    n = len(a)
    if t < 1 or 2 * t > n:
        raise FamilyError("need 1 <= t and 2t <= n")
    A = grs(F, a, u, t + 1)
    B = grs(F, a, v, t)
    uv = tuple(int(x) for x in F.mul(np.asarray(u), np.asarray(v)))
    C = codes.dual(grs(F, a, uv, 2 * t))
    return A, B, C


def random_code(F: GF, n: int, k: int, rng: np.random.Generator) -> LinearCode:
    """Uniform generator entries, resampled until of rank ``k``."""
    if not 0 <= k <= n:
        raise FamilyError("need 0 <= k <= n")
    if k == 0:
        return codes.zero_code(F, n)
    return LinearCode(F, n, linalg.random_full_rank(F, k, n, rng))


def random_mds_code(F: GF, n: int, k: int, rng: np.random.Generator,
                    max_tries: int = 200, restarts: int = 20) -> LinearCode:
    """Random ``[n, k, n-k+1]`` code.

    Generator columns are drawn uniformly one at a time and redrawn until
    every ``k`` columns chosen so far are independent.  A partial choice that
    cannot be extended within ``max_tries`` draws is discarded and the search
    restarts.
    """
    if not 1 <= k <= n:
        raise FamilyError("need 1 <= k <= n")
    for _ in range(restarts):
        cols = _extend_arc(F, n, k, rng, max_tries)
        if cols is not None:
            return LinearCode(F, n, np.array(cols).T)
    raise FamilyError(f"no [{n},{k}] MDS code found over {F} (q too small?)")


def _extend_arc(F: GF, n: int, k: int, rng: np.random.Generator, max_tries: int):
    cols: list[np.ndarray] = []
    for j in range(n):
        s = min(j, k - 1)
        prev = np.array(cols, dtype=np.int64).reshape(j, k)
        for _ in range(max_tries):
            col = F.random(rng, k)
            if not col.any():
                continue
            if s == 0:
                break
            ok = True
            for subs in linalg.column_subsets(j, s):
                stack = np.concatenate(
                    [prev[subs], np.broadcast_to(col, (subs.shape[0], 1, k))], axis=1)
                if np.any(linalg.batch_rank(F, stack) < s + 1):
                    ok = False
                    break
            if ok:
                break
        else:
            return None
        cols.append(col)
    return cols


def random_grs_subcode(F: GF, a, b, l: int, k: int, rng: np.random.Generator) -> LinearCode:
    """Random ``k``-dimensional subcode of ``GRS_l(a, b)``."""
    if not 0 <= k <= l <= len(a):
        raise FamilyError("need k <= l <= n")
    G = grs_generator(F, a, b, l)
    if k == l:
        return LinearCode(F, len(a), G)
    if k == 0:
        return codes.zero_code(F, len(a))
    S = linalg.random_full_rank(F, k, l, rng)
    return LinearCode(F, len(a), linalg.matmul(F, S, G))


def alternant_code(K: GF, a, b, r: int, base: GF) -> tuple[LinearCode, EcpPair | None]:
    """Subfield subcode of ``GRS_{n-r}(a, b)`` over ``K`` with its ``floor(r/2)``-ECP.

    The pair lives over ``K``; it is ``None`` when ``r < 2``.
    """
    n = len(a)
    if not 0 <= r < n:
        raise FamilyError("need 0 <= r < n")
    if base.p != K.p or K.e % base.e:
        raise FieldError(f"{base} is not a subfield of {K}")
    spec = GrsSpec(K, tuple(a), tuple(b), n - r)
    C = codes.subfield_subcode(grs_code(spec), base)
    pair = grs_ecp(spec) if r >= 2 else None
    return C, pair


def poly_eval(F: GF, coeffs: Sequence[int], x) -> np.ndarray:
    x = np.asarray(x, dtype=np.int64)
    val = np.zeros_like(x)
    for c in reversed(list(coeffs)):
        val = F.add(F.mul(val, x), int(c))
    return val


def goppa_code(K: GF, a, g: Sequence[int], base: GF) -> tuple[LinearCode, EcpPair | None]:
    """Classical Goppa code ``{c : sum c_i / (x - a_i) = 0 mod g}`` as an alternant code.

    ``g`` is a coefficient list over ``K``, low degree first.  The parity
    checks are ``a_i^j / g(a_i)``, ``j < deg g``, so the code is the subfield
    subcode of ``GRS_{n-r}(a, b)`` with ``b`` the dual multiplier of
    ``1 / g(a)``.
    """
    g = list(g)
    while g and g[-1] == 0:
        g.pop()
    if not g:
        raise FamilyError("Goppa polynomial is zero")
    r = len(g) - 1
    ga = poly_eval(K, g, a)
    if np.any(ga == 0):
        raise FamilyError("Goppa polynomial vanishes at a locator")
    h = K.inv(ga)
    b = grs_dual_multiplier(K, a, h)
    return alternant_code(K, a, b, r, base)


def random_pair_code(F: GF, n: int, t: int, rng: np.random.Generator,
                     mds_a: bool = False, mds_b: bool = True
                     ) -> tuple[LinearCode, LinearCode, LinearCode]:
    """Random ``A = [n, t+1]``, ``B = [n, t]`` and ``C = (A * B)^perp``.

    ``B`` must be MDS for ``(A, B)`` to satisfy ``d(B^perp) > t``, so it is
    sampled as one by default.  ``A`` only needs ``d(A) + d(C) > n``, which a
    uniformly random ``A`` meets in practice; ``mds_a`` forces an MDS ``A``
    as well (feasible only when ``q`` is large compared to ``n``).
    """
    if t < 1 or t * (t + 1) >= n:
        raise FamilyError("need t >= 1 and t(t+1) < n")
    A = random_mds_code(F, n, t + 1, rng) if mds_a else random_code(F, n, t + 1, rng)
    B = random_mds_code(F, n, t, rng) if mds_b else random_code(F, n, t, rng)
    C = codes.dual(codes.star_codes(A, B))
    return A, B, C
