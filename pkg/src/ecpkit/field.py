"""Finite fields GF(p) and GF(p^e).

Elements are encoded as integers in ``[0, q)``: the coefficient vector
``(c_0, ..., c_{e-1})`` of the reduced polynomial representative is read as
base-``p`` digits, low degree first.  All array operations in this package
work on ``numpy.int64`` arrays of these encodings; :class:`FieldElement` is a
thin scalar wrapper for interactive use.

Extension-field multiplication goes through log/antilog tables, built lazily
on first use.
"""

from __future__ import annotations

import functools
from typing import Iterable, Sequence

import numpy as np

MAX_PRIME = 2**31 - 1
MAX_EXTENSION_ORDER = 2**20


class FieldError(ValueError):
    """Invalid field parameters or mixing of incompatible fields."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


# -- polynomials over GF(p), coefficient lists low degree first -------------

def _ptrim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmod(a: Sequence[int], f: Sequence[int], p: int) -> list[int]:
    a = _ptrim([c % p for c in a])
    df = len(f) - 1
    inv_lead = pow(f[-1], p - 2, p)
    while len(a) - 1 >= df and a:
        c = a[-1] * inv_lead % p
        shift = len(a) - 1 - df
        for i, fi in enumerate(f):
            a[shift + i] = (a[shift + i] - c * fi) % p
        _ptrim(a)
    return a


def _pmul(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return out


def _pgcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = _ptrim(list(a)), _ptrim(list(b))
    while b:
        a, b = b, _pmod(a, b, p)
    return a


def _peval(f: Sequence[int], x: int, p: int) -> int:
    y = 0
    for c in reversed(f):
        y = (y * x + c) % p
    return y


def is_irreducible(f: Sequence[int], p: int) -> bool:
    """Irreducibility of a monic polynomial over GF(p).

    Degree <= 3 is decided by root search, higher degrees by
    ``gcd(f, x^(p^i) - x) == 1`` for ``1 <= i <= deg/2``.
    """
    f = list(f)
    e = len(f) - 1
    if e < 1:
        return False
    if e == 1:
        return True
    if e <= 3:
        return all(_peval(f, x, p) for x in range(p))
    xp = [0, 1]
    for _ in range(1, e // 2 + 1):
        # xp <- xp^p mod f
        result, base, k = [1], xp, p
        while k:
            if k & 1:
                result = _pmod(_pmul(result, base, p), f, p)
            base = _pmod(_pmul(base, base, p), f, p)
            k >>= 1
        xp = result
        diff = list(xp) + [0] * max(0, 2 - len(xp))
        diff[1] = (diff[1] - 1) % p
        if len(_pgcd(f, diff, p)) != 1:
            return False
    return True


def default_modulus(p: int, e: int) -> tuple[int, ...]:
    """Smallest monic irreducible of degree ``e`` over GF(p).

    Candidates ``x^e + c_{e-1}x^{e-1} + ... + c_0`` are ordered by the integer
    ``sum c_i p^i``, i.e. lexicographically on ``(c_{e-1}, ..., c_0)``.
    """
    for v in range(p**e):
        coeffs = [(v // p**i) % p for i in range(e)] + [1]
        if coeffs[0] and is_irreducible(coeffs, p):
            return tuple(coeffs)
    raise FieldError(f"no irreducible polynomial of degree {e} over GF({p})")


# -- the field ---------------------------------------------------------------

class GF:
    """The finite field GF(p^e) with an explicit modulus polynomial.

    Instances compare equal iff ``(p, e, modulus)`` agree.  Use
    :func:`field_make` for validated, cached construction.
    """

    def __init__(self, p: int, e: int = 1, modulus: Sequence[int] | None = None):
        if not isinstance(p, int) or not is_prime(p):
            raise FieldError(f"characteristic {p!r} is not prime")
        if not isinstance(e, int) or e < 1:
            raise FieldError(f"degree must be a positive integer, got {e!r}")
        q = p**e
        if e == 1:
            if p > MAX_PRIME:
                raise FieldError(f"prime {p} exceeds supported width")
            if modulus not in (None, (), []):
                raise FieldError("prime fields take no modulus")
            modulus = ()
        else:
            if q > MAX_EXTENSION_ORDER:
                raise FieldError(f"extension field order {q} exceeds 2^20")
            if modulus is None:
                modulus = default_modulus(p, e)
            modulus = tuple(int(c) for c in modulus)
            if len(modulus) != e + 1:
                raise FieldError(f"modulus must have degree {e}")
            if any(not 0 <= c < p for c in modulus):
                raise FieldError("modulus coefficients out of range")
            if modulus[-1] != 1:
                raise FieldError("modulus must be monic")
            if not is_irreducible(modulus, p):
                raise FieldError(f"modulus {modulus} is reducible over GF({p})")
        self.p = p
        self.e = e
        self.q = q
        self.modulus: tuple[int, ...] = tuple(modulus)
        self._exp: np.ndarray | None = None
        self._log: np.ndarray | None = None

    # identity
    def _key(self):
        return (self.p, self.e, self.modulus)

    def __eq__(self, other):
        return isinstance(other, GF) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return f"GF({self.p}^{self.e})" if self.e > 1 else f"GF({self.p})"

    def to_string(self) -> str:
        """Serialize as ``p:e:modulus`` (modulus low degree first), or ``p:1``."""
        if self.e == 1:
            return f"{self.p}:1"
        return f"{self.p}:{self.e}:" + ",".join(map(str, self.modulus))

    @property
    def is_prime_field(self) -> bool:
        return self.e == 1

    # scalars
    def __call__(self, value) -> "FieldElement":
        if isinstance(value, FieldElement):
            if value.field != self:
                raise FieldError("element belongs to a different field")
            return value
        if isinstance(value, (list, tuple)):
            return FieldElement(self, self.from_coeffs(value))
        value = int(value)
        if not 0 <= value < self.q:
            raise FieldError(f"{value} is not an element encoding of {self}")
        return FieldElement(self, value)

    def from_coeffs(self, coeffs: Sequence[int]) -> int:
        coeffs = list(coeffs)
        if len(coeffs) > self.e:
            raise FieldError(f"too many coefficients for {self}")
        if any(not 0 <= c < self.p for c in coeffs):
            raise FieldError("coefficient out of range")
        return sum(c * self.p**i for i, c in enumerate(coeffs))

    def coeffs(self, value: int) -> tuple[int, ...]:
        return tuple((int(value) // self.p**i) % self.p for i in range(self.e))

    def elements(self) -> list["FieldElement"]:
        return [FieldElement(self, v) for v in range(self.q)]

    # tables
    def _scalar_mul(self, a: int, b: int) -> int:
        if self.e == 1:
            return a * b % self.p
        if self.p == 2:
            r = 0
            while b:
                if b & 1:
                    r ^= a
                b >>= 1
                a <<= 1
                if a >> self.e & 1:
                    a ^= self._mod_int
            return r
        prod = _pmul(self.coeffs(a), self.coeffs(b), self.p)
        return self.from_coeffs(_pmod(prod, self.modulus, self.p) + [])

    @functools.cached_property
    def _mod_int(self) -> int:
        return sum(c << i for i, c in enumerate(self.modulus))

    def _scalar_pow(self, a: int, k: int) -> int:
        r = 1
        while k:
            if k & 1:
                r = self._scalar_mul(r, a)
            a = self._scalar_mul(a, a)
            k >>= 1
        return r

    def _build_tables(self) -> None:
        order = self.q - 1
        factors = _prime_factors(order)
        for g in range(2, self.q):
            if all(self._scalar_pow(g, order // r) != 1 for r in factors):
                break
        else:  # GF(2) only
            g = 1
        # log[0] points past the doubled table into a block of zeros, so a
        # product is a single gather with no masking.
        exp = np.zeros(4 * order + 1, dtype=np.int64)
        log = np.full(self.q, 2 * order, dtype=np.int64)
        cur = 1
        for i in range(order):
            exp[i] = cur
            log[cur] = i
            cur = self._scalar_mul(cur, g)
        exp[order:2 * order] = exp[:order]
        self._exp, self._log = exp, log

    @property
    def tables(self) -> tuple[np.ndarray, np.ndarray]:
        if self._exp is None:
            self._build_tables()
        return self._exp, self._log

    # vectorized arithmetic on integer encodings
    def asarray(self, x) -> np.ndarray:
        return np.asarray(x, dtype=np.int64)

    def digits(self, a) -> np.ndarray:
        """GF(p) coordinates, shape ``a.shape + (e,)``."""
        a = self.asarray(a)
        pw = self.p ** np.arange(self.e, dtype=np.int64)
        return (a[..., None] // pw) % self.p

    def from_digits(self, d) -> np.ndarray:
        d = self.asarray(d)
        pw = self.p ** np.arange(self.e, dtype=np.int64)
        return (d * pw).sum(axis=-1)

    def add(self, a, b) -> np.ndarray:
        a, b = self.asarray(a), self.asarray(b)
        if self.e == 1:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        return self.from_digits((self.digits(a) + self.digits(b)) % self.p)

    def neg(self, a) -> np.ndarray:
        a = self.asarray(a)
        if self.e == 1:
            return (-a) % self.p
        if self.p == 2:
            return a.copy()
        return self.from_digits((-self.digits(a)) % self.p)

    def sub(self, a, b) -> np.ndarray:
        a, b = self.asarray(a), self.asarray(b)
        if self.e == 1:
            return (a - b) % self.p
        if self.p == 2:
            return a ^ b
        return self.from_digits((self.digits(a) - self.digits(b)) % self.p)

    def mul(self, a, b) -> np.ndarray:
        a, b = self.asarray(a), self.asarray(b)
        if self.e == 1:
            return a * b % self.p
        exp, log = self.tables
        return exp[log[a] + log[b]]

    def inv(self, a) -> np.ndarray:
        a = self.asarray(a)
        if np.any(a == 0):
            raise ZeroDivisionError(f"inverse of zero in {self}")
        if self.e == 1:
            return self._vpow_prime(a, self.p - 2)
        exp, log = self.tables
        return exp[(self.q - 1 - log[a]) % (self.q - 1)]

    def div(self, a, b) -> np.ndarray:
        return self.mul(a, self.inv(b))

    def power(self, a, k: int) -> np.ndarray:
        a = self.asarray(a)
        if k < 0:
            return self.power(self.inv(a), -k)
        if k == 0:
            return np.ones_like(a)
        if self.e == 1:
            return self._vpow_prime(a, k)
        exp, log = self.tables
        r = exp[(log[a] * (k % (self.q - 1))) % (self.q - 1)]
        return np.where(a == 0, 0, r)

    def _vpow_prime(self, a: np.ndarray, k: int) -> np.ndarray:
        p = self.p
        r = np.ones_like(a)
        base = a % p
        while k:
            if k & 1:
                r = r * base % p
            base = base * base % p
            k >>= 1
        return r

    def sum(self, a, axis=-1) -> np.ndarray:
        a = self.asarray(a)
        if self.e == 1:
            if self.p < 2**31 and a.shape and a.shape[axis] < 2**31:
                return a.sum(axis=axis) % self.p
        if self.p == 2:
            return np.bitwise_xor.reduce(a, axis=axis) if a.shape[axis] else np.zeros(
                np.delete(a.shape, axis), dtype=np.int64)
        d = self.digits(a)
        ax = axis if axis >= 0 else axis - 1
        return self.from_digits(d.sum(axis=ax) % self.p)

    def dot(self, a, b) -> np.ndarray:
        """Sum over the last axis of ``a * b`` (broadcasting)."""
        return self.sum(self.mul(a, b), axis=-1)

    def random(self, rng: np.random.Generator, size=None, nonzero: bool = False) -> np.ndarray:
        lo = 1 if nonzero else 0
        return rng.integers(lo, self.q, size=size, dtype=np.int64)


@functools.lru_cache(maxsize=None)
def _cached_field(p: int, e: int, modulus: tuple[int, ...] | None) -> GF:
    return GF(p, e, modulus)


def field_make(p: int, e: int = 1, modulus: Iterable[int] | None = None) -> GF:
    """Validated, cached field constructor."""
    if modulus is not None:
        modulus = tuple(int(c) for c in modulus)
        if e == 1 and modulus == ():
            modulus = None
    return _cached_field(p, e, modulus)


def _prime_power(q: int) -> tuple[int, int]:
    primes = _prime_factors(q) if q >= 2 else []
    if len(primes) != 1:
        raise FieldError(f"{q} is not a prime power")
    p, e = primes[0], 0
    while q % p == 0:
        q //= p
        e += 1
    return p, e


def parse_field(text: str) -> GF:
    """Parse ``p:e[:c0,c1,...]`` or a bare prime power ``q``.

    Without a modulus the base may itself be a prime power: ``16:1`` is
    GF(16) and ``4:3`` is GF(2^6).
    """
    text = text.strip()
    parts = text.split(":")
    try:
        if len(parts) == 1:
            return field_make(*_prime_power(int(parts[0])))
        if len(parts) > 3:
            raise FieldError(f"malformed field spec {text!r}")
        base, e = int(parts[0]), int(parts[1])
        mod = parts[2] if len(parts) > 2 else ""
        if mod:
            return field_make(base, e, tuple(int(c) for c in mod.split(",")))
        if e < 1:
            raise FieldError(f"extension degree must be positive, got {e}")
        p, a = _prime_power(base)
        return field_make(p, a * e)
    except ValueError as exc:
        if isinstance(exc, FieldError):
            raise
        raise FieldError(f"malformed field spec {text!r}") from exc


# -- embeddings --------------------------------------------------------------

@functools.lru_cache(maxsize=None)
def embedding_table(src: GF, dst: GF) -> np.ndarray:
    """Integer map from ``src`` encodings to their images in ``dst``.

    A generator of ``src`` over GF(p) is sent to the smallest root of the
    ``src`` modulus in ``dst``.
    """
    if src == dst:
        return np.arange(src.q, dtype=np.int64)
    if src.p != dst.p or dst.e % src.e:
        raise FieldError(f"{src} does not embed in {dst}")
    if src.e == 1:
        return np.arange(src.p, dtype=np.int64)
    xs = np.arange(dst.q, dtype=np.int64)
    val = np.zeros_like(xs)
    for c in reversed(src.modulus):
        val = dst.add(dst.mul(val, xs), c)
    roots = np.flatnonzero(val == 0)
    if roots.size == 0:
        raise FieldError(f"{src} does not embed in {dst}")
    root = int(roots[0])
    powers = dst.power(np.full(src.e, root), 0)
    for d in range(1, src.e):
        powers[d] = dst.mul(powers[d - 1], root)
    digits = src.digits(np.arange(src.q))  # (q_src, e_src), values in GF(p)
    return dst.sum(dst.mul(digits, powers), axis=-1)


def embed(x: "FieldElement", target: GF) -> "FieldElement":
    return FieldElement(target, int(embedding_table(x.field, target)[x.value]))


def embed_array(src: GF, dst: GF, a) -> np.ndarray:
    return embedding_table(src, dst)[np.asarray(a, dtype=np.int64)]


def restrict_array(src: GF, dst: GF, a) -> np.ndarray | None:
    """Inverse of :func:`embed_array`; ``None`` if an entry lies outside ``dst``."""
    table = embedding_table(dst, src)
    inverse = np.full(src.q, -1, dtype=np.int64)
    inverse[table] = np.arange(dst.q)
    out = inverse[np.asarray(a, dtype=np.int64)]
    return None if np.any(out < 0) else out


# -- scalar wrapper ------------------------------------------------------------

class FieldElement:
    __slots__ = ("field", "value")

    def __init__(self, field: GF, value: int):
        self.field = field
        self.value = int(value)

    def _other(self, other) -> int:
        if not isinstance(other, FieldElement):
            raise TypeError(f"cannot combine field element with {type(other).__name__}")
        if other.field != self.field:
            raise FieldError(f"mixing elements of {self.field} and {other.field}")
        return other.value

    def _wrap(self, v) -> "FieldElement":
        return FieldElement(self.field, int(v))

    def __add__(self, other):
        return self._wrap(self.field.add(self.value, self._other(other)))

    def __sub__(self, other):
        return self._wrap(self.field.sub(self.value, self._other(other)))

    def __mul__(self, other):
        return self._wrap(self.field.mul(self.value, self._other(other)))

    def __truediv__(self, other):
        return self._wrap(self.field.div(self.value, self._other(other)))

    def __neg__(self):
        return self._wrap(self.field.neg(self.value))

    def __pow__(self, k: int):
        return self._wrap(self.field.power(self.value, int(k)))

    def inverse(self) -> "FieldElement":
        return self._wrap(self.field.inv(self.value))

    @property
    def coeffs(self) -> tuple[int, ...]:
        return self.field.coeffs(self.value)

    def is_zero(self) -> bool:
        return self.value == 0

    def __int__(self):
        return self.value

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field == other.field and self.value == other.value
        return NotImplemented

    def __hash__(self):
        return hash((self.field, self.value))

    def __repr__(self):
        if self.field.e == 1:
            return f"{self.value} (mod {self.field.p})"
        return f"{self.field}{list(self.coeffs)}"
