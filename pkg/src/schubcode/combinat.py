"""Index-tuple combinatorics for Schubert varieties in G(l, m).

Everything here is computed from tuples alone, without touching subspaces:
the Bruhat order on I(l, m), the sets nabla/Delta, cell dimensions, block
structure, the kink-index derived tuples alpha', alpha-check and the lift phi,
Gaussian binomials, and the exact point counts of Schubert varieties over F_q.

Tuples are 1-based throughout, as in the usual I(l, m) notation.  The
canonical order on I(l, m) is lexicographic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cache
from itertools import combinations


class IndexTuple(tuple):
    """A strictly increasing tuple of integers in 1..m.

    Subclasses ``tuple`` so it can be used wherever a plain tuple is expected;
    equality and hashing ignore ``m``.
    """

    def __new__(cls, entries, m: int | None = None):
        entries = tuple(int(a) for a in entries)
        if m is None:
            m = entries[-1] if entries else 0
        if any(b <= a for a, b in zip(entries, entries[1:])):
            raise ValueError(f"entries must be strictly increasing: {entries}")
        if entries and (entries[0] < 1 or entries[-1] > m):
            raise ValueError(f"entries must lie in 1..{m}: {entries}")
        self = super().__new__(cls, entries)
        self.m = m
        return self

    @property
    def ell(self) -> int:
        return len(self)

    @property
    def entries(self) -> tuple[int, ...]:
        return tuple(self)

    def __repr__(self):
        return f"IndexTuple({tuple(self)}, m={self.m})"

    def __getnewargs__(self):
        return (tuple(self), self.m)

    def __reduce__(self):
        return (IndexTuple, (tuple(self), self.m))


def parse_alpha(text: str, m: int | None = None) -> IndexTuple:
    """Parse '2,4' (or '2 4', '(2,4)')."""
    s = text.strip().strip("()[]")
    parts = [p for p in s.replace(" ", ",").split(",") if p]
    return IndexTuple([int(p) for p in parts], m)


def reduce_alpha(alpha, m: int | None = None) -> tuple[IndexTuple, int]:
    """Replace (alpha, m) by (alpha, alpha_l); return the reduced tuple and the original m."""
    orig = m if m is not None else getattr(alpha, "m", alpha[-1])
    return IndexTuple(alpha, alpha[-1]), orig


@cache
def _tuples(ell: int, m: int) -> tuple[IndexTuple, ...]:
    return tuple(IndexTuple(c, m) for c in combinations(range(1, m + 1), ell))


def enumerate_index_tuples(ell: int, m: int) -> tuple[IndexTuple, ...]:
    """All of I(l, m) in lexicographic order."""
    if ell < 0 or ell > m:
        raise ValueError(f"need 0 <= l <= m, got l={ell}, m={m}")
    return _tuples(ell, m)


def bruhat_leq(alpha, beta) -> bool:
    if len(alpha) != len(beta):
        raise ValueError(f"shape mismatch: {alpha} vs {beta}")
    return all(a <= b for a, b in zip(alpha, beta))


def _m_of(alpha, m=None):
    return m if m is not None else getattr(alpha, "m", alpha[-1])


def nabla(alpha, m: int | None = None) -> tuple[IndexTuple, ...]:
    """Tuples beta <= alpha, in canonical order."""
    m = _m_of(alpha, m)
    return _nabla(tuple(alpha), m)


@cache
def _nabla(alpha, m):
    return tuple(b for b in enumerate_index_tuples(len(alpha), m) if bruhat_leq(b, alpha))


def delta_set(alpha, m: int | None = None) -> tuple[IndexTuple, ...]:
    m = _m_of(alpha, m)
    return tuple(b for b in enumerate_index_tuples(len(alpha), m) if not bruhat_leq(b, alpha))


def k_alpha(alpha) -> int:
    return len(nabla(alpha))


def delta(alpha) -> int:
    ell = len(alpha)
    return sum(alpha) - ell * (ell + 1) // 2


def is_consecutive(alpha) -> bool:
    return alpha[-1] - alpha[0] == len(alpha) - 1


def gaussian_binomial(m: int, ell: int, q: int) -> int:
    """[m choose l]_q as an exact integer."""
    if ell < 0 or ell > m:
        return 0
    num = den = 1
    for i in range(ell):
        num *= q**m - q**i
        den *= q**ell - q**i
    assert num % den == 0
    return num // den


@dataclass(frozen=True)
class BlockStructure:
    u: int
    p: tuple[int, ...]

    def breakpoints(self) -> tuple[int, ...]:
        """The interior p_1..p_u."""
        return self.p[1:-1]


def block_structure(alpha) -> BlockStructure:
    ell = len(alpha)
    cuts = [i for i in range(1, ell) if alpha[i] - alpha[i - 1] >= 2]
    return BlockStructure(len(cuts), (0, *cuts, ell))


class ConsecutiveError(ValueError):
    pass


def kink_index(alpha) -> int:
    """Largest j (1-based) with alpha_{j+1} - alpha_j >= 2."""
    gaps = [j for j in range(1, len(alpha)) if alpha[j] - alpha[j - 1] >= 2]
    if not gaps:
        raise ConsecutiveError(f"{tuple(alpha)} is consecutive")
    return gaps[-1]


def alpha_prime(alpha) -> IndexTuple:
    k = kink_index(alpha)
    m = _m_of(alpha)
    return IndexTuple([a if i < k else a - 1 for i, a in enumerate(alpha)], max(m - 1, 1))


def alpha_check(alpha) -> IndexTuple:
    m = _m_of(alpha)
    return IndexTuple(alpha[:-1], max(m - 1, 1))


def truncate(beta, k: int) -> IndexTuple:
    if not 1 <= k <= len(beta):
        raise ValueError(f"need 1 <= k <= {len(beta)}")
    return IndexTuple(beta[:k], _m_of(beta))


def phi_lift(beta, alpha) -> IndexTuple:
    """The lift nabla(alpha') -> nabla(alpha): add 1 to entries after the kink."""
    k = kink_index(alpha)
    ap = alpha_prime(alpha)
    if not bruhat_leq(beta, ap):
        raise ValueError(f"{tuple(beta)} is not in nabla({tuple(ap)})")
    return IndexTuple([b if i < k else b + 1 for i, b in enumerate(beta)], _m_of(alpha))


def missing_cells(alpha) -> tuple[IndexTuple, ...]:
    image = {phi_lift(b, alpha) for b in nabla(alpha_prime(alpha))}
    return tuple(g for g in nabla(alpha) if g not in image)


# -- point counts ---------------------------------------------------------

def point_count(alpha, q: int) -> int:
    """|Omega_alpha| over F_q: sum of q^delta(beta) over nabla(alpha)."""
    return sum(q ** delta(b) for b in nabla(alpha))


@dataclass(frozen=True)
class CountProfile:
    alpha: tuple[int, ...]
    a: tuple[int, ...]

    def total(self, q: int) -> int:
        return sum(c * q**i for i, c in enumerate(self.a))

    @property
    def k_alpha(self) -> int:
        return sum(self.a)


def count_profile(alpha) -> CountProfile:
    a = [0] * (delta(alpha) + 1)
    for b in nabla(alpha):
        a[delta(b)] += 1
    return CountProfile(tuple(alpha), tuple(a))


def profile_json(alpha, q: int, m: int | None = None) -> dict:
    prof = count_profile(alpha)
    return {
        "alpha": list(alpha),
        "ell": len(alpha),
        "m": _m_of(alpha, m),
        "q": q,
        "k_alpha": prof.k_alpha,
        "delta": delta(alpha),
        "a": list(prof.a),
        "n_alpha": prof.total(q),
    }


# -- the threshold q0(l) ----------------------------------------------------

def q0(ell: int) -> float:
    """2^(1/(l-1)) / (2^(1/(l-1)) - 1), in double precision."""
    if ell < 2:
        raise ValueError("q0 needs l >= 2")
    t = 2.0 ** (1.0 / (ell - 1))
    return t / (t - 1.0)


def exceeds_q0(q: int, ell: int) -> bool:
    """Exact test q > q0(l), i.e. 2 (q-1)^(l-1) > q^(l-1)."""
    if ell < 2:
        raise ValueError("q0 needs l >= 2")
    return 2 * (q - 1) ** (ell - 1) > q ** (ell - 1)


def smallest_prime_power_above_q0(ell: int) -> int:
    from .gf import FieldError, prime_power

    q = 2
    while True:
        try:
            prime_power(q)
        except FieldError:
            q += 1
            continue
        if exceeds_q0(q, ell):
            return q
        q += 1


PRINTED_Q0_3 = 3.14  # value printed for q0(3) in the source text; the formula gives ~3.4142


def upper_factor(q: int, ell: int) -> Fraction:
    """(q/(q-1))^l as an exact rational."""
    return Fraction(q, q - 1) ** ell


def inv_ln2() -> float:
    return 1.0 / math.log(2.0)
