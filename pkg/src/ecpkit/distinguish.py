"""Square-code distinguishers and the Monte Carlo experiments behind them.

For an ``[n, k]`` code with generator ``g_1..g_k`` the products ``g_i * g_j``
(``i <= j``) span the square code; the relations among them form ``K^2(C)``,
of dimension ``C(k+1, 2) - dim C^(2)``.  Random codes have square dimension
``min(n, C(k+1, 2))``; GRS codes and codes built from error-correcting pairs
fall short of it.
"""

from __future__ import annotations

import csv
import io
from collections import Counter
from dataclasses import asdict, dataclass, field as dc_field
from math import comb

import numpy as np

from . import codes, families, linalg
from .codes import LinearCode
from .field import GF, field_make
from .rng import make_rng

VERDICTS = ("random-like", "structured", "undetermined")


class DistinguishError(ValueError):
    pass


@dataclass
class LpSystem:
    """Coefficients ``p_ij * p_ij'`` of the system in variables ``Z_jj'``.

    Rows are indexed by ``i < k``; columns by pairs ``(j, j')``,
    ``j < j'``, of the redundancy positions in lexicographic order.
    """

    field: GF
    coeff: np.ndarray
    pairs: list[tuple[int, int]]
    perm: list[int]

    @property
    def kernel_dim(self) -> int:
        return len(self.pairs) - linalg.rank(self.field, self.coeff)


def _pair_products(F: GF, P: np.ndarray) -> tuple[np.ndarray, list[tuple[int, int]]]:
    cols = P.shape[1]
    j, jj = np.triu_indices(cols, k=1)
    return F.mul(P[:, j], P[:, jj]), list(zip(j.tolist(), jj.tolist()))


def build_lp(C: LinearCode) -> LpSystem:
    if C.k < 1 or C.n - C.k < 2:
        raise DistinguishError("need k >= 1 and n - k >= 2")
    Gsys, perm = linalg.systematic_form(C.field, C.gen)
    P = Gsys[:, C.k:]
    M1, pairs = _pair_products(C.field, P)
    return LpSystem(C.field, M1, [(a + C.k, b + C.k) for a, b in pairs], perm)


def build_lp_transpose(C: LinearCode) -> LpSystem:
    """The system built from ``P^T``; its kernel has dimension ``dim K^2(C)``."""
    if C.k < 1 or C.n - C.k < 1:
        raise DistinguishError("need 1 <= k < n")
    Gsys, perm = linalg.systematic_form(C.field, C.gen)
    P = Gsys[:, C.k:]
    M1, pairs = _pair_products(C.field, P.T)
    return LpSystem(C.field, M1, pairs, perm)


def dim_k_lp(C: LinearCode) -> int:
    return build_lp(C).kernel_dim


def check_prop1(C: LinearCode) -> bool:
    """``dim K(L_P) = dim K^2(C^perp)`` and ``dim K(L_{P^T}) = dim K^2(C)``.

    Both sides are computed independently: the left from the systematic
    form, the right from the square codes.
    """
    primal = dim_k_lp(C) == codes.sym2_kernel_dim(codes.dual(C))
    dual = build_lp_transpose(C).kernel_dim == codes.sym2_kernel_dim(C)
    return primal and dual


def prop1_rank_identity(C: LinearCode) -> tuple[int, int]:
    """``(rank M2, (n - k) + rank M1)`` for ``H = (P^T | -I)``; the two agree."""
    F = C.field
    Gsys, _ = linalg.systematic_form(F, C.gen)
    P = Gsys[:, C.k:]
    H = np.hstack([P.T, F.neg(linalg.identity(C.n - C.k))])
    M2 = codes.symmetric_star_matrix(F, H)
    M1, _ = _pair_products(F, P)
    return linalg.rank(F, M2), (C.n - C.k) + linalg.rank(F, M1)


def random_expectation(n: int, k: int) -> int:
    return min(n, comb(k + 1, 2))


@dataclass
class DistinguisherReport:
    n: int
    k: int
    q: int
    dim_square: int
    random_expectation: int
    dim_k2: int
    dim_klp: int | None
    prop1_holds: bool | None
    primal_informative: bool
    dual_dim_square: int
    dual_random_expectation: int
    dual_informative: bool
    verdict: str
    notes: list[str] = dc_field(default_factory=list)

    def to_dict(self) -> dict:
        return asdict(self)


def classify(C: LinearCode) -> DistinguisherReport:
    """Compare square dimensions of ``C`` and ``C^perp`` with random codes.

    A deficient square on either side means ``structured``.  A side is
    informative when ``C(k+1, 2) < n``, so that a random code's square is
    ``C(k+1, 2)`` and not the whole space; when neither side is informative
    and neither is deficient the verdict is ``undetermined``.
    """
    n, k = C.n, C.k
    sq = codes.square(C).k
    exp = random_expectation(n, k)
    D = codes.dual(C)
    dsq = codes.square(D).k
    dexp = random_expectation(n, n - k)
    primal_inf = comb(k + 1, 2) < n
    dual_inf = comb(n - k + 1, 2) < n
    notes = []
    try:
        klp = dim_k_lp(C)
        p1 = check_prop1(C)
    except DistinguishError:
        klp, p1 = None, None
        notes.append("L_P system undefined for these parameters")
    if sq < exp or dsq < dexp:
        verdict = "structured"
    elif primal_inf or dual_inf:
        verdict = "random-like"
    else:
        verdict = "undetermined"
        notes.append("both squares saturate F^n; no expected value to compare against")
    return DistinguisherReport(
        n=n, k=k, q=C.field.q, dim_square=sq, random_expectation=exp,
        dim_k2=comb(k + 1, 2) - sq, dim_klp=klp, prop1_holds=p1,
        primal_informative=primal_inf, dual_dim_square=dsq,
        dual_random_expectation=dexp, dual_informative=dual_inf,
        verdict=verdict, notes=notes)


# -- experiments -------------------------------------------------------------------

CSV_HEADER = ("seed", "q", "n", "k_or_st", "trial", "measured_dim")


@dataclass
class ExperimentResult:
    name: str
    rows: list[dict]
    extra_columns: tuple[str, ...] = ()

    @property
    def histogram(self) -> dict[int, int]:
        return dict(sorted(Counter(r["measured_dim"] for r in self.rows).items()))

    def mass_at(self, value: int) -> float:
        return sum(r["measured_dim"] == value for r in self.rows) / max(1, len(self.rows))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        cols = CSV_HEADER + self.extra_columns
        w.writerow(cols)
        for r in self.rows:
            w.writerow([_csv_value(r[c]) for c in cols])
        return buf.getvalue()


def _csv_value(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    return v


def _row(seed, F, n, k, trial, measured, **extra) -> dict:
    return {"seed": seed, "q": F.q, "n": n, "k_or_st": k, "trial": trial,
            "measured_dim": int(measured), **extra}


def experiment_square_dim(F: GF, n: int, k: int, trials: int, seed: int) -> ExperimentResult:
    """``dim C^(2)`` of random ``[n, k]`` codes, one seeded stream per trial."""
    if trials < 1:
        raise DistinguishError("trials must be positive")
    rows = []
    for trial in range(trials):
        C = families.random_code(F, n, k, make_rng(seed, trial))
        rows.append(_row(seed, F, n, k, trial, codes.square(C).k))
    return ExperimentResult("square-dim", rows)


def star_rank_deficiency(F: GF, A: LinearCode, B: LinearCode) -> int:
    """``st - rank M`` for the ``st x n`` matrix of rows ``a_i * b_j``."""
    M = codes.star_matrix(F, A.gen, B.gen)
    return M.shape[0] - linalg.rank(F, M)


def experiment_star_rank(F: GF, n: int, s: int, t: int, trials: int, seed: int) -> ExperimentResult:
    """Rank deficiency of ``A * B`` for random ``[n, s]`` and ``[n, t]`` codes."""
    if s * t >= n:
        raise DistinguishError("need s*t < n")
    if trials < 1:
        raise DistinguishError("trials must be positive")
    rows = []
    for trial in range(trials):
        rng = make_rng(seed, trial)
        A = families.random_code(F, n, s, rng)
        B = families.random_code(F, n, t, rng)
        rows.append(_row(seed, F, n, s * t, trial, star_rank_deficiency(F, A, B)))
    return ExperimentResult("star-rank", rows)


PROP1_FIELDS = ((2, 1), (2, 2), (7, 1), (2, 4), (2, 6))


def experiment_prop1_sweep(trials: int, seed: int, n_range=(4, 40)) -> ExperimentResult:
    """Random codes over GF(2), GF(4), GF(7), GF(16), GF(64) with random ``n, k``."""
    rows = []
    for trial in range(trials):
        rng = make_rng(seed, trial)
        p, e = PROP1_FIELDS[trial % len(PROP1_FIELDS)]
        F = field_make(p, e)
        n = int(rng.integers(n_range[0], n_range[1] + 1))
        k = int(rng.integers(1, n - 1))
        C = families.random_code(F, n, k, rng)
        rows.append(_row(seed, F, n, k, trial, dim_k_lp(C), prop1=check_prop1(C)))
    return ExperimentResult("prop1-sweep", rows, ("prop1",))


def experiment_decode_rate(F: GF, n: int, k: int, weight: int, trials: int,
                           seed: int) -> ExperimentResult:
    """Decoding success of ``GRS_k`` (default locators, unit multipliers)."""
    from .ecp import ecp_decode
    from .rng import sample_error

    spec = families.GrsSpec(F, families.default_locators(F, n), (1,) * n, k)
    C = families.grs_code(spec)
    pair = families.grs_ecp(spec)
    rows = []
    for trial in range(trials):
        rng = make_rng(seed, trial)
        c = C.encode(F.random(rng, k))
        e = sample_error(F, n, weight, rng)
        out = ecp_decode(C, pair, F.add(c, e))
        ok = out is not None and np.array_equal(out[0], c) and np.array_equal(out[1], e)
        rows.append(_row(seed, F, n, k, trial, weight, success=ok))
    return ExperimentResult("decode-rate", rows, ("success",))
