"""Toy McEliece and Niederreiter schemes over an ECP-decodable code.

The secret is a code ``C`` with a verified error-correcting pair, an
invertible ``S`` and a permutation (optionally monomial) matrix ``P``.  The
public key is ``S G P`` (McEliece) or ``S H P`` (Niederreiter).  ``P`` is
stored as ``perm`` and ``scales`` with ``P[i, perm[i]] = scales[i]``.
"""

from __future__ import annotations

import functools
import json
import os
import tempfile
from dataclasses import dataclass

import numpy as np

from . import codes, linalg
from .codes import LinearCode
from .ecp import EcpPair, ecp_decode, verify_ecp
from .field import GF, parse_field
from .rng import sample_error

SCHEMES = ("mceliece", "niederreiter")
KEY_VERSION = 1


class PkcError(ValueError):
    pass


class KeyFormatError(PkcError):
    pass


# -- the matrix P --------------------------------------------------------------

def _times_p(F: GF, x, perm, scales) -> np.ndarray:
    """``x P``."""
    x = np.asarray(x, dtype=np.int64)
    out = np.empty_like(x)
    out[..., perm] = F.mul(x, scales)
    return out


def _times_p_inv(F: GF, y, perm, scales) -> np.ndarray:
    """``y P^{-1}``."""
    y = np.asarray(y, dtype=np.int64)
    return F.div(y[..., perm], scales)


def _times_p_t(F: GF, x, perm, scales) -> np.ndarray:
    """``x P^T``."""
    x = np.asarray(x, dtype=np.int64)
    return F.mul(x[..., perm], scales)


def _times_p_t_inv(F: GF, y, perm, scales) -> np.ndarray:
    """``y (P^T)^{-1}``."""
    y = np.asarray(y, dtype=np.int64)
    out = np.empty_like(y)
    out[..., perm] = F.div(y, scales)
    return out


def p_matrix(F: GF, perm, scales) -> np.ndarray:
    n = len(perm)
    P = np.zeros((n, n), dtype=np.int64)
    P[np.arange(n), perm] = scales
    return P


# -- keys ------------------------------------------------------------------------

@dataclass(frozen=True)
class PublicKey:
    scheme: str
    field: GF
    n: int
    k: int
    t: int
    matrix: np.ndarray

    def to_dict(self) -> dict:
        return {"v": KEY_VERSION, "scheme": self.scheme, "field": self.field.to_string(),
                "n": self.n, "k": self.k, "t": self.t,
                "matrix": linalg.format_matrix(self.field, self.matrix)}

    @classmethod
    def from_dict(cls, d: dict) -> "PublicKey":
        _check_header(d)
        try:
            F = parse_field(d["field"])
            n, k, t = int(d["n"]), int(d["k"]), int(d["t"])
            M = linalg.parse_matrix(F, d["matrix"], cols=n)
        except (KeyError, TypeError, ValueError) as exc:
            raise KeyFormatError(f"malformed public key: {exc}") from None
        rows = k if d["scheme"] == "mceliece" else n - k
        if M.shape != (rows, n):
            raise KeyFormatError("public matrix has the wrong shape")
        return cls(d["scheme"], F, n, k, t, M)

    def __eq__(self, other):
        return (isinstance(other, PublicKey) and self.to_dict() == other.to_dict())

    def __hash__(self):
        return hash(json.dumps(self.to_dict(), sort_keys=True))


@dataclass(frozen=True)
class SecretKey:
    scheme: str
    code: LinearCode
    pair: EcpPair
    S: np.ndarray
    perm: tuple[int, ...]
    scales: tuple[int, ...]

    @property
    def field(self) -> GF:
        return self.code.field

    @property
    def t(self) -> int:
        return self.pair.t

    @property
    def base_matrix(self) -> np.ndarray:
        return self.code.gen if self.scheme == "mceliece" else self.code.parity_check

    @functools.cached_property
    def s_inverse(self) -> np.ndarray:
        return linalg.inverse(self.field, self.S)

    @functools.cached_property
    def _public(self) -> PublicKey:
        F = self.field
        M = _times_p(F, linalg.matmul(F, self.S, self.base_matrix), self.perm, self.scales)
        return PublicKey(self.scheme, F, self.code.n, self.code.k, self.t, M)

    def public_key(self) -> PublicKey:
        return self._public

    def to_dict(self) -> dict:
        F = self.field
        d = {"v": KEY_VERSION, "scheme": self.scheme, "field": F.to_string(),
             "S": linalg.format_matrix(F, self.S), "P": list(self.perm),
             "code": self.code.to_dict(), "ecp": self.pair.to_dict()}
        if any(s != 1 for s in self.scales):
            d["scales"] = linalg.format_vector(F, self.scales)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "SecretKey":
        _check_header(d)
        try:
            F = parse_field(d["field"])
            code = LinearCode.from_dict(d["code"])
            pair = EcpPair.from_dict(d["ecp"])
            S = linalg.parse_matrix(F, d["S"])
            perm = tuple(int(i) for i in d["P"])
            scales = (tuple(int(x) for x in linalg.parse_vector(F, d["scales"]))
                      if "scales" in d else (1,) * len(perm))
        except (KeyError, TypeError, ValueError) as exc:
            raise KeyFormatError(f"malformed secret key: {exc}") from None
        if code.field != F:
            raise KeyFormatError("code field disagrees with key field")
        if sorted(perm) != list(range(code.n)) or len(scales) != code.n or 0 in scales:
            raise KeyFormatError("P is not a monomial matrix of the right size")
        sk = cls(d["scheme"], code, pair, S, perm, scales)
        rows = sk.base_matrix.shape[0]
        if S.shape != (rows, rows) or linalg.rank(F, S) != rows:
            raise KeyFormatError("S is not an invertible matrix of the right size")
        return sk

    def __eq__(self, other):
        return isinstance(other, SecretKey) and self.to_dict() == other.to_dict()

    def __hash__(self):
        return hash(json.dumps(self.to_dict(), sort_keys=True))


@dataclass(frozen=True)
class KeyPair:
    public: PublicKey
    secret: SecretKey


def _check_header(d) -> None:
    if not isinstance(d, dict):
        raise KeyFormatError("key must be a JSON object")
    if d.get("v") != KEY_VERSION:
        raise KeyFormatError(f"unsupported key version {d.get('v')!r}")
    if d.get("scheme") not in SCHEMES:
        raise KeyFormatError(f"unknown scheme {d.get('scheme')!r}")


def keygen(C: LinearCode, pair: EcpPair, scheme: str, rng: np.random.Generator,
           monomial: bool = False, identity: bool = False) -> KeyPair:
    """Mask ``C`` behind a random ``S`` and ``P``.

    ``identity=True`` fixes ``S = I`` and ``P = I`` (a test mode in which the
    public matrix is the secret one).
    """
    if scheme not in SCHEMES:
        raise PkcError(f"unknown scheme {scheme!r}")
    report = verify_ecp(pair, C)
    if not report.is_ecp:
        raise PkcError("pair is not a verified error-correcting pair for the code")
    F = C.field
    rows = C.k if scheme == "mceliece" else C.n - C.k
    if rows == 0:
        raise PkcError("public matrix would be empty")
    if identity:
        S = linalg.identity(rows)
        perm, scales = tuple(range(C.n)), (1,) * C.n
    else:
        S = linalg.random_invertible(F, rows, rng)
        perm = tuple(int(i) for i in rng.permutation(C.n))
        scales = (tuple(int(x) for x in F.random(rng, C.n, nonzero=True))
                  if monomial else (1,) * C.n)
    sk = SecretKey(scheme, C, pair, S, perm, scales)
    return KeyPair(sk.public_key(), sk)


# -- ciphertexts ---------------------------------------------------------------------

@dataclass(frozen=True)
class Ciphertext:
    scheme: str
    body: np.ndarray

    def to_text(self, F: GF) -> str:
        return f"{self.scheme}:{linalg.format_vector(F, self.body)}"

    @classmethod
    def from_text(cls, F: GF, text: str) -> "Ciphertext":
        scheme, sep, body = text.strip().partition(":")
        if not sep or scheme not in SCHEMES:
            raise PkcError("ciphertext must start with 'mceliece:' or 'niederreiter:'")
        return cls(scheme, linalg.parse_vector(F, body))


def _check_error(F: GF, n: int, t: int, e, exact: bool) -> np.ndarray:
    e = np.asarray(e, dtype=np.int64)
    if e.shape != (n,) or e.min(initial=0) < 0 or e.max(initial=0) >= F.q:
        raise PkcError(f"error vector must be a length-{n} vector over {F}")
    w = codes.weight(e)
    if w > t or (exact and w not in (0, t)):
        raise PkcError(f"error vector has weight {w}, allowed {'t' if exact else '<= t'} = {t}")
    return e


def mceliece_encrypt(pk: PublicKey, m, e=None, rng: np.random.Generator | None = None) -> Ciphertext:
    """``m G' + e``; ``e`` is drawn with weight exactly ``t`` if only ``rng`` is given."""
    if pk.scheme != "mceliece":
        raise PkcError("not a McEliece key")
    F = pk.field
    m = np.asarray(m, dtype=np.int64)
    if m.shape != (pk.k,) or m.min(initial=0) < 0 or m.max(initial=0) >= F.q:
        raise PkcError(f"message must be a length-{pk.k} vector over {F}")
    if e is None:
        if rng is None:
            raise PkcError("need an error vector or a random generator")
        e = sample_error(F, pk.n, pk.t, rng)
    e = _check_error(F, pk.n, pk.t, e, exact=False)
    return Ciphertext("mceliece", F.add(linalg.vecmat(F, m, pk.matrix), e))


def mceliece_decrypt(sk: SecretKey, c: Ciphertext) -> tuple[np.ndarray, np.ndarray] | None:
    """Recover ``(m, e)``; ``None`` unless the result re-encrypts to ``c``."""
    if sk.scheme != "mceliece" or c.scheme != "mceliece":
        return None
    F, C = sk.field, sk.code
    y = np.asarray(c.body, dtype=np.int64)
    if y.shape != (C.n,) or y.min(initial=0) < 0 or y.max(initial=0) >= F.q:
        return None
    out = ecp_decode(C, sk.pair, _times_p_inv(F, y, sk.perm, sk.scales))
    if out is None:
        return None
    cw, e2 = out
    u = linalg.solve(F, C.gen.T, cw)
    if u is None:
        return None
    m = linalg.vecmat(F, u, sk.s_inverse)
    e = _times_p(F, e2, sk.perm, sk.scales)
    pk = sk.public_key()
    if codes.weight(e) > sk.t or not np.array_equal(
            F.add(linalg.vecmat(F, m, pk.matrix), e), y):
        return None
    return m, e


def niederreiter_encrypt(pk: PublicKey, e) -> Ciphertext:
    """``e H'^T`` for ``e`` of weight ``t`` (weight 0 is accepted as a test case)."""
    if pk.scheme != "niederreiter":
        raise PkcError("not a Niederreiter key")
    e = _check_error(pk.field, pk.n, pk.t, e, exact=True)
    return Ciphertext("niederreiter", linalg.vecmat(pk.field, e, pk.matrix.T))


def niederreiter_decrypt(sk: SecretKey, c: Ciphertext) -> np.ndarray | None:
    """The unique ``e`` of weight ``<= t`` with syndrome ``c``, or ``None``."""
    if sk.scheme != "niederreiter" or c.scheme != "niederreiter":
        return None
    F, C = sk.field, sk.code
    s = np.asarray(c.body, dtype=np.int64)
    r = C.n - C.k
    if s.shape != (r,) or s.min(initial=0) < 0 or s.max(initial=0) >= F.q:
        return None
    # s = (e P^T) H^T S^T, so H y^T = S^{-1} s^T for y = e P^T.
    H = sk.base_matrix
    target = linalg.matmul(F, sk.s_inverse, s[:, None])[:, 0]
    y = linalg.solve(F, H, target)
    if y is None:
        return None
    out = ecp_decode(C, sk.pair, y)
    if out is None:
        return None
    e = _times_p_t_inv(F, out[1], sk.perm, sk.scales)
    pk = sk.public_key()
    if codes.weight(e) > sk.t or not np.array_equal(linalg.vecmat(F, e, pk.matrix.T), s):
        return None
    return e


def sb_hash(F: GF, H, e, t: int | None = None) -> np.ndarray:
    """Syndrome ``e H^T`` of a constant-weight word; there is no inverse."""
    H = linalg.as_matrix(H)
    e = np.asarray(e, dtype=np.int64)
    if e.shape != (H.shape[1],):
        raise PkcError("input length does not match H")
    if t is not None and codes.weight(e) not in (0, t):
        raise PkcError(f"input must have weight {t}")
    return linalg.vecmat(F, e, H.T)


# -- key files -------------------------------------------------------------------------

def atomic_write(path: str, text: str) -> None:
    """Write through a temporary file in the same directory, then rename."""
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-", suffix=".part")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def dump_key(key: PublicKey | SecretKey) -> str:
    return json.dumps(key.to_dict(), indent=1, sort_keys=True) + "\n"


def load_key(text: str) -> PublicKey | SecretKey:
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise KeyFormatError(f"not valid JSON: {exc}") from None
    _check_header(d)
    if "matrix" in d:
        return PublicKey.from_dict(d)
    if "S" in d:
        return SecretKey.from_dict(d)
    raise KeyFormatError("neither a public nor a secret key")


def write_key(path: str, key: PublicKey | SecretKey) -> None:
    atomic_write(path, dump_key(key))


def read_key(path: str) -> PublicKey | SecretKey:
    with open(path) as fh:
        return load_key(fh.read())
