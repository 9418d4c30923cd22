"""Arithmetic in small finite fields F_q, q = p^e.

Elements are integer codes 0..q-1: the base-p digits of a code are the
coefficients (lowest degree first) of the polynomial representative modulo
the field's defining polynomial.  For q <= 256 scalar multiplication goes
through log/antilog tables; larger fields use polynomial arithmetic.

Dense numpy tables (``add_table`` etc.) are built lazily for the vectorized
paths in :mod:`schubcode.code` and :mod:`schubcode.schubert`.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field
from functools import cache, cached_property

import numpy as np

DEFAULT_FIELD_CAP = 4096
LOG_TABLE_LIMIT = 256


class FieldError(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_power(q: int) -> tuple[int, int]:
    """Return (p, e) with q = p**e, or raise FieldError."""
    if q < 2:
        raise FieldError(f"q={q} is not a prime power")
    for p in range(2, q + 1):
        if q % p == 0:
            break
    e = 0
    r = q
    while r % p == 0:
        r //= p
        e += 1
    if r != 1 or not is_prime(p):
        raise FieldError(f"q={q} is not a prime power")
    return p, e


# -- polynomials over F_p as coefficient tuples, lowest degree first --------

def _trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a, mod, p):
    a = _trim(a)
    dm = len(mod) - 1
    inv_lead = pow(mod[-1], -1, p)
    while len(a) - 1 >= dm:
        c = a[-1] * inv_lead % p
        shift = len(a) - 1 - dm
        for i, mi in enumerate(mod):
            a[shift + i] = (a[shift + i] - c * mi) % p
        a = _trim(a)
    return a


def _has_factor_of_degree(poly, d, p):
    # exhaustive divisor search over monic polynomials of degree d
    for tail in itertools.product(range(p), repeat=d):
        div = list(tail) + [1]
        if not _poly_mod(poly, div, p):
            return True
    return False


def is_irreducible(poly, p: int) -> bool:
    """Irreducibility over F_p by exhaustive search for monic divisors."""
    deg = len(_trim(poly)) - 1
    if deg < 1:
        return False
    if deg == 1:
        return True
    if poly[0] % p == 0:
        return False
    return not any(_has_factor_of_degree(poly, d, p) for d in range(1, deg // 2 + 1))


def smallest_irreducible(p: int, e: int) -> tuple[int, ...]:
    """Lexicographically smallest monic irreducible of degree e over F_p.

    Coefficient lists are compared lowest degree first.
    """
    for low in itertools.product(range(p), repeat=e):
        # product() is lexicographic with the last slot fastest; we want the
        # constant term to be the most significant key, which it is.
        cand = tuple(low) + (1,)
        if is_irreducible(cand, p):
            return cand
    raise FieldError(f"no irreducible polynomial of degree {e} over F_{p}")


@dataclass(frozen=True, eq=False)
class Field:
    """The field F_q.  Instances are interned by :func:`field_make`."""

    p: int
    e: int
    q: int
    modulus: tuple[int, ...]
    _exp: tuple[int, ...] | None = field(default=None, repr=False)
    _log: tuple[int, ...] | None = field(default=None, repr=False)

    def __repr__(self):
        return f"GF({self.q})"

    # -- code <-> polynomial ------------------------------------------------
    def digits(self, a: int) -> list[int]:
        out = []
        for _ in range(self.e):
            out.append(a % self.p)
            a //= self.p
        return out

    def from_digits(self, ds) -> int:
        c = 0
        for d in reversed(list(ds)):
            c = c * self.p + d
        return c

    # -- scalar ops on codes ------------------------------------------------
    def add(self, a: int, b: int) -> int:
        if self.e == 1:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        da, db = self.digits(a), self.digits(b)
        return self.from_digits((x + y) % self.p for x, y in zip(da, db))

    def neg(self, a: int) -> int:
        if self.e == 1:
            return -a % self.p
        if self.p == 2:
            return a
        return self.from_digits(-x % self.p for x in self.digits(a))

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def _poly_mul(self, a: int, b: int) -> int:
        pa, pb = self.digits(a), self.digits(b)
        prod = [0] * (2 * self.e - 1)
        for i, x in enumerate(pa):
            if x:
                for j, y in enumerate(pb):
                    prod[i + j] = (prod[i + j] + x * y) % self.p
        r = _poly_mod(prod, self.modulus, self.p)
        return self.from_digits(r + [0] * (self.e - len(r)))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        if self.e == 1:
            return a * b % self.p
        if self._exp is not None:
            return self._exp[(self._log[a] + self._log[b]) % (self.q - 1)]
        return self._poly_mul(a, b)

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in " + repr(self))
        if self.e == 1:
            return pow(a, -1, self.p)
        if self._exp is not None:
            return self._exp[(-self._log[a]) % (self.q - 1)]
        return self.pow(a, self.q - 2)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, n: int) -> int:
        if n < 0:
            a, n = self.inv(a), -n
        r = 1
        while n:
            if n & 1:
                r = self.mul(r, a)
            a = self.mul(a, a)
            n >>= 1
        return r

    def elements(self) -> range:
        return range(self.q)

    def element(self, code: int) -> "FieldElement":
        if not 0 <= code < self.q:
            raise FieldError(f"code {code} out of range for {self!r}")
        return FieldElement(code, self)

    # -- dense tables for numpy paths ---------------------------------------
    @cached_property
    def add_table(self) -> np.ndarray:
        a = np.arange(self.q)
        if self.e == 1:
            return ((a[:, None] + a[None, :]) % self.p).astype(self.dtype)
        if self.p == 2:
            return (a[:, None] ^ a[None, :]).astype(self.dtype)
        out = np.zeros((self.q, self.q), dtype=np.int64)
        ra, rb = a[:, None].copy(), a[None, :].copy()
        place = 1
        for _ in range(self.e):
            out += ((ra % self.p + rb % self.p) % self.p) * place
            ra //= self.p
            rb //= self.p
            place *= self.p
        return out.astype(self.dtype)

    @cached_property
    def mul_table(self) -> np.ndarray:
        a = np.arange(self.q)
        if self.e == 1:
            return ((a[:, None] * a[None, :]) % self.p).astype(self.dtype)
        exp, log = self._tables_np
        s = (log[:, None] + log[None, :]) % (self.q - 1)
        out = exp[s]
        out[0, :] = 0
        out[:, 0] = 0
        return out.astype(self.dtype)

    @cached_property
    def neg_table(self) -> np.ndarray:
        return np.array([self.neg(a) for a in range(self.q)], dtype=self.dtype)

    @cached_property
    def inv_table(self) -> np.ndarray:
        return np.array([0] + [self.inv(a) for a in range(1, self.q)], dtype=self.dtype)

    @cached_property
    def dtype(self):
        return np.uint8 if self.q <= 256 else np.uint16

    @cached_property
    def _tables_np(self):
        if self._exp is not None:
            exp = np.array(self._exp, dtype=np.int64)
            log = np.array(self._log, dtype=np.int64)
            return exp, log
        g = _primitive_element(self)
        exp = np.zeros(self.q - 1, dtype=np.int64)
        log = np.zeros(self.q, dtype=np.int64)
        x = 1
        for i in range(self.q - 1):
            exp[i] = x
            log[x] = i
            x = self._poly_mul(x, g)
        return exp, log

    # vectorized helpers
    def vadd(self, a, b):
        if self.e == 1:
            return ((a.astype(np.int32) + b) % self.p).astype(self.dtype)
        if self.p == 2:
            return np.bitwise_xor(a, b).astype(self.dtype, copy=False)
        return self.add_table[a, b]

    def vmul(self, a, b):
        return self.mul_table[a, b]

    def vneg(self, a):
        return self.neg_table[a]


def _primitive_element(F: Field) -> int:
    order = F.q - 1
    primes = [r for r in range(2, order + 1) if order % r == 0 and is_prime(r)]
    for g in range(2 if F.q > 2 else 1, F.q):
        if all(_slow_pow(F, g, order // r) != 1 for r in primes):
            return g
    raise FieldError("no primitive element found")


def _slow_pow(F: Field, a: int, n: int) -> int:
    r = 1
    while n:
        if n & 1:
            r = F._poly_mul(r, a)
        a = F._poly_mul(a, a)
        n >>= 1
    return r


def field_cap() -> int:
    return int(os.environ.get("SCHUBCODE_FIELD_CAP", DEFAULT_FIELD_CAP))


@cache
def _field_make(p: int, e: int) -> Field:
    q = p**e
    modulus = smallest_irreducible(p, e) if e > 1 else (0, 1)
    F = Field(p, e, q, modulus)
    if 1 < e and q <= LOG_TABLE_LIMIT:
        g = _primitive_element(F)
        exp, log = [0] * (q - 1), [0] * q
        x = 1
        for i in range(q - 1):
            exp[i] = x
            log[x] = i
            x = F._poly_mul(x, g)
        object.__setattr__(F, "_exp", tuple(exp))
        object.__setattr__(F, "_log", tuple(log))
    return F


def field_make(p: int, e: int = 1, cap: int | None = None) -> Field:
    """F_{p^e} with the deterministic modulus; repeated calls return the same object."""
    if not is_prime(p):
        raise FieldError(f"p={p} is not prime")
    if e < 1:
        raise FieldError(f"extension degree must be >= 1, got {e}")
    cap = field_cap() if cap is None else cap
    if p**e > cap:
        raise FieldError(f"q={p**e} exceeds field cap {cap}")
    return _field_make(p, e)


def GF(q: int) -> Field:
    p, e = prime_power(q)
    return field_make(p, e)


def parse_q(text: str) -> Field:
    """Parse 'q=4' or '4'."""
    s = str(text).strip()
    if s.startswith("q="):
        s = s[2:]
    try:
        q = int(s)
    except ValueError as exc:
        raise FieldError(f"cannot parse field size {text!r}") from exc
    return GF(q)


def field_json(F: Field) -> dict:
    return {"p": F.p, "e": F.e, "q": F.q, "modulus": list(F.modulus) if F.e > 1 else []}


@dataclass(frozen=True)
class FieldElement:
    code: int
    spec: Field

    def _check(self, other):
        if not isinstance(other, FieldElement):
            return FieldElement(other % self.spec.q, self.spec) if isinstance(other, int) else NotImplemented
        if other.spec is not self.spec:
            raise FieldError(f"field mismatch: {self.spec!r} vs {other.spec!r}")
        return other

    def __add__(self, other):
        other = self._check(other)
        return FieldElement(self.spec.add(self.code, other.code), self.spec)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._check(other)
        return FieldElement(self.spec.sub(self.code, other.code), self.spec)

    def __neg__(self):
        return FieldElement(self.spec.neg(self.code), self.spec)

    def __mul__(self, other):
        other = self._check(other)
        return FieldElement(self.spec.mul(self.code, other.code), self.spec)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._check(other)
        return self * other.inv()

    def __pow__(self, n: int):
        return FieldElement(self.spec.pow(self.code, n), self.spec)

    def inv(self) -> "FieldElement":
        return FieldElement(self.spec.inv(self.code), self.spec)

    def __bool__(self):
        return self.code != 0

    def __int__(self):
        return self.code

    def __repr__(self):
        return f"{self.code}@{self.spec!r}"


def add(a: FieldElement, b: FieldElement) -> FieldElement:
    return a + b


def mul(a: FieldElement, b: FieldElement) -> FieldElement:
    return a * b


def neg(a: FieldElement) -> FieldElement:
    return -a


def inv(a: FieldElement) -> FieldElement:
    return a.inv()


def power(a: FieldElement, n: int) -> FieldElement:
    return a**n


def enumerate_elements(F: Field) -> list[FieldElement]:
    return [FieldElement(c, F) for c in range(F.q)]


# -- linear algebra over F_q on lists of integer codes ------------------------

def rref(F: Field, rows, reverse: bool = False):
    """Row-reduce a matrix of codes.

    Returns (reduced_rows, pivot_columns) with the zero rows dropped.  With
    ``reverse=True`` columns are scanned right to left, i.e. each pivot is the
    *last* nonzero entry of its row.
    """
    A = [list(r) for r in rows]
    if not A:
        return [], []
    ncols = len(A[0])
    order = range(ncols - 1, -1, -1) if reverse else range(ncols)
    pivots = []
    r = 0
    for c in order:
        piv = next((i for i in range(r, len(A)) if A[i][c]), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        s = F.inv(A[r][c])
        A[r] = [F.mul(s, x) for x in A[r]]
        for i in range(len(A)):
            if i != r and A[i][c]:
                f = A[i][c]
                A[i] = [F.sub(x, F.mul(f, y)) for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == len(A):
            break
    return A[:r], pivots


def rank(F: Field, rows) -> int:
    return len(rref(F, rows)[1])


def nullspace(F: Field, rows, ncols: int | None = None) -> list[list[int]]:
    """Basis of {x : A x = 0}."""
    rows = [list(r) for r in rows]
    if ncols is None:
        ncols = len(rows[0])
    R, piv = rref(F, rows) if rows else ([], [])
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        x = [0] * ncols
        x[f] = 1
        for row, pc in zip(R, piv):
            x[pc] = F.neg(row[f])
        basis.append(x)
    return basis


def det(F: Field, rows) -> int:
    A = [list(r) for r in rows]
    n = len(A)
    d = 1
    for c in range(n):
        piv = next((i for i in range(c, n) if A[i][c]), None)
        if piv is None:
            return 0
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
            d = F.neg(d)
        d = F.mul(d, A[c][c])
        s = F.inv(A[c][c])
        for i in range(c + 1, n):
            if A[i][c]:
                f = F.mul(A[i][c], s)
                A[i] = [F.sub(x, F.mul(f, y)) for x, y in zip(A[i], A[c])]
    return d


def matmul(F: Field, A, B) -> np.ndarray:
    """Matrix product over F_q of code arrays A (r, n) and B (n, c).

    Reduces to integer matmuls over F_p: every element acts F_p-linearly on
    digit vectors, so each output digit is a sum of e*e digit products.
    """
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    p, e = F.p, F.e
    if e == 1:
        return ((A @ B) % p).astype(F.dtype)
    place = p ** np.arange(e)
    Bd = (B[..., None] // place) % p  # (n, c, e)
    mt = F.mul_table.astype(np.int64)
    out = np.zeros((A.shape[0], B.shape[1], e), dtype=np.int64)
    for j in range(e):
        Aj = mt[A, place[j]]  # A * x^j
        Ajd = (Aj[..., None] // place) % p  # (r, n, e)
        for t in range(e):
            out[:, :, t] += Ajd[:, :, t] @ Bd[:, :, j]
    return ((out % p) @ place).astype(F.dtype)
