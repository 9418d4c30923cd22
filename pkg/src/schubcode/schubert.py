"""Points of Grassmannians and Schubert varieties over F_q.

A point L of G(l, V_m) is stored as its right-row-reduced echelon matrix:
each row's last nonzero entry (its pivot) is 1, pivot columns increase down
the rows, and pivot columns are otherwise zero.  The pivot columns form the
tuple beta of the Schubert cell containing L.

Inside a cell the free entries (row i, columns c < beta_i that are not earlier
pivot columns) are enumerated row-major, field codes ascending, last free
position fastest.  A variety is the concatenation of its cells in canonical
(lexicographic) tuple order; that order is the column order of the Schubert
code generator matrix.

Bulk enumeration works on numpy arrays of shape (N, l, m); the
``EchelonMatrix`` objects are a thin per-point view for API use.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from functools import cache

import numpy as np

from .combinat import (
    IndexTuple,
    alpha_check,
    bruhat_leq,
    delta,
    enumerate_index_tuples,
    nabla,
    point_count,
)
from .gf import Field, rank, rref

DEFAULT_POINT_CAP = 10**7


class CapExceeded(RuntimeError):
    pass


def point_cap() -> int:
    return int(os.environ.get("SCHUBCODE_POINT_CAP", DEFAULT_POINT_CAP))


@dataclass(frozen=True)
class EchelonMatrix:
    rows: tuple[tuple[int, ...], ...]
    pivots: IndexTuple
    field: Field

    @property
    def ell(self) -> int:
        return len(self.rows)

    @property
    def m(self) -> int:
        return len(self.rows[0]) if self.rows else self.pivots.m

    def array(self) -> np.ndarray:
        return np.array(self.rows, dtype=self.field.dtype).reshape(self.ell, self.m)

    @classmethod
    def from_array(cls, arr, F: Field) -> "EchelonMatrix":
        rows = tuple(tuple(int(x) for x in r) for r in arr)
        m = arr.shape[1]
        piv = [max(j for j, x in enumerate(r) if x) + 1 for r in rows]
        return cls(rows, IndexTuple(piv, m), F)


def canonicalize(rows, F: Field) -> EchelonMatrix:
    """The right-RREF matrix with the same row space as ``rows``."""
    rows = [list(map(int, r)) for r in rows]
    ell = len(rows)
    m = len(rows[0])
    R, piv = rref(F, rows, reverse=True)
    if len(piv) < ell:
        raise ValueError(f"rows have rank {len(piv)} < {ell}")
    R = R[::-1]
    pivots = IndexTuple([c + 1 for c in piv[::-1]], m)
    return EchelonMatrix(tuple(tuple(r) for r in R), pivots, F)


def embed(M: EchelonMatrix, m: int) -> EchelonMatrix:
    """Append zero columns to view M inside a larger ambient space."""
    pad = m - M.m
    if pad < 0:
        raise ValueError("cannot embed into a smaller space")
    rows = tuple(r + (0,) * pad for r in M.rows)
    return EchelonMatrix(rows, IndexTuple(M.pivots, m), M.field)


# -- cells ------------------------------------------------------------------

def free_positions(beta) -> list[tuple[int, int]]:
    """Free (row, col) positions of cell beta, 0-based, row-major."""
    pivots = [b - 1 for b in beta]
    out = []
    for i, b in enumerate(pivots):
        taken = set(pivots[:i])
        out.extend((i, c) for c in range(b) if c not in taken)
    return out


def cell_array(beta, F: Field, m: int | None = None) -> np.ndarray:
    m = beta[-1] if m is None else m
    ell = len(beta)
    free = free_positions(beta)
    assert len(free) == delta(beta)
    count = F.q ** len(free)
    out = np.zeros((count, ell, m), dtype=F.dtype)
    for i, b in enumerate(beta):
        out[:, i, b - 1] = 1
    if free:
        vals = np.indices((F.q,) * len(free), dtype=np.int64).reshape(len(free), -1)
        for (r, c), v in zip(free, vals):
            out[:, r, c] = v
    return out


def enumerate_cell(beta, F: Field, m: int | None = None) -> list[EchelonMatrix]:
    m = beta[-1] if m is None else m
    piv = IndexTuple(beta, m)
    return [
        EchelonMatrix(tuple(tuple(int(x) for x in r) for r in a), piv, F)
        for a in cell_array(beta, F, m)
    ]


def check_cap(alpha, F: Field, cap: int | None = None, force: bool = False) -> int:
    n = point_count(alpha, F.q)
    cap = point_cap() if cap is None else cap
    if n > cap and not force:
        raise CapExceeded(f"|Omega_{tuple(alpha)}| = {n} over F_{F.q} exceeds point cap {cap}")
    return n


def variety_array(alpha, F: Field, m: int | None = None, cap: int | None = None,
                  force: bool = False) -> tuple[np.ndarray, list[IndexTuple]]:
    """All points of Omega_alpha as an (N, l, m) array plus the cell of each point.

    The second value lists the cell tuples in order; ``cell_offsets`` recovers
    the boundaries.
    """
    m = alpha[-1] if m is None else m
    check_cap(alpha, F, cap, force)
    cells = [IndexTuple(b, m) for b in nabla(alpha)]
    arrs = [cell_array(b, F, m) for b in cells]
    return np.concatenate(arrs, axis=0), cells


def cell_offsets(cells, q: int) -> list[int]:
    out = [0]
    for b in cells:
        out.append(out[-1] + q ** delta(b))
    return out


def enumerate_variety(alpha, F: Field, m: int | None = None, cap: int | None = None,
                      force: bool = False) -> list[EchelonMatrix]:
    m = alpha[-1] if m is None else m
    check_cap(alpha, F, cap, force)
    out = []
    for b in nabla(alpha):
        out.extend(enumerate_cell(b, F, m))
    return out


def pivots_of_array(arr: np.ndarray) -> np.ndarray:
    """1-based pivot columns (last nonzero per row) for an (N, l, m) array."""
    m = arr.shape[-1]
    nz = arr != 0
    return m - np.argmax(nz[..., ::-1], axis=-1)


# -- membership -------------------------------------------------------------

def intersection_dims(M: EchelonMatrix) -> list[int]:
    """dim(L cap V_j) for j = 0..m via ranks of column tails."""
    rows = [list(r) for r in M.rows]
    out = []
    for j in range(M.m + 1):
        tail = [r[j:] for r in rows]
        rk = rank(M.field, tail) if j < M.m else 0
        out.append(M.ell - rk)
    return out


def schubert_member_rank(M: EchelonMatrix, alpha) -> bool:
    if alpha[-1] > M.m:
        raise ValueError(f"{tuple(alpha)} does not fit in ambient dimension {M.m}")
    dims = intersection_dims(M)
    return all(dims[a] >= j for j, a in enumerate(alpha, start=1))


def schubert_member(M: EchelonMatrix, alpha) -> bool:
    """dim(L cap V_{alpha_j}) >= j for all j; cross-checked against the pivot test."""
    if len(alpha) != M.ell:
        raise ValueError("shape mismatch")
    by_pivots = bruhat_leq(M.pivots, alpha)
    by_rank = schubert_member_rank(M, alpha)
    if by_pivots != by_rank:
        raise AssertionError(f"membership tests disagree for {M} and {tuple(alpha)}")
    return by_pivots


# -- Plucker coordinates ------------------------------------------------------

@dataclass(frozen=True)
class PluckerVector:
    coords: dict
    field: Field
    alpha: tuple | None = None

    def vector(self) -> tuple[int, ...]:
        return tuple(self.coords.values())

    def __getitem__(self, beta) -> int:
        return self.coords[tuple(beta)]


@cache
def _perm_signs(ell: int):
    out = []
    for perm in itertools.permutations(range(ell)):
        inv = sum(1 for i in range(ell) for j in range(i + 1, ell) if perm[i] > perm[j])
        out.append((perm, inv % 2))
    return tuple(out)


def minors_array(arr: np.ndarray, F: Field, tuples) -> np.ndarray:
    """Minors on column sets ``tuples`` for every matrix of an (N, l, m) array.

    Returns an (N, len(tuples)) array of codes.  Uses the Leibniz expansion,
    vectorized over N; fine for the small l used here.
    """
    N, ell, _ = arr.shape
    out = np.zeros((N, len(tuples)), dtype=F.dtype)
    signs = _perm_signs(ell)
    for t, beta in enumerate(tuples):
        cols = [b - 1 for b in beta]
        sub = arr[:, :, cols]
        acc = np.zeros(N, dtype=F.dtype)
        for perm, odd in signs:
            term = sub[:, 0, perm[0]]
            for i in range(1, ell):
                term = F.vmul(term, sub[:, i, perm[i]])
            if odd:
                term = F.vneg(term)
            acc = F.vadd(acc, term)
        out[:, t] = acc
    return out


def plucker(M: EchelonMatrix, alpha=None) -> PluckerVector:
    """Plucker coordinates of M, over all of I(l, m) or restricted to nabla(alpha)."""
    tuples = nabla(alpha) if alpha is not None else enumerate_index_tuples(M.ell, M.m)
    vals = minors_array(M.array()[None], M.field, tuples)[0]
    coords = {tuple(b): int(v) for b, v in zip(tuples, vals)}
    return PluckerVector(coords, M.field, tuple(alpha) if alpha is not None else None)


# -- strings ----------------------------------------------------------------

def in_T(M: EchelonMatrix) -> bool:
    return M.pivots[-1] == M.m


def string_projection(M: EchelonMatrix) -> tuple[int, ...]:
    """Entries of the last row at the non-pivot columns of the top block."""
    if not in_T(M):
        raise ValueError("last-row pivot is not at column m")
    top = set(p - 1 for p in M.pivots[:-1])
    last = M.rows[-1]
    return tuple(last[c] for c in range(M.m - 1) if c not in top)


def string_projection_array(arr: np.ndarray, pivots) -> np.ndarray:
    """Vectorized projection for points of one cell (shared pivot tuple)."""
    m = arr.shape[-1]
    top = set(p - 1 for p in pivots[:-1])
    cols = [c for c in range(m - 1) if c not in top]
    return arr[:, -1, cols]


def string_fiber(nu, alpha, F: Field) -> list[EchelonMatrix]:
    """The image of Omega_{alpha-check} (ambient m-1) under the section for label nu."""
    m = alpha[-1]
    ell = len(alpha)
    nu = tuple(int(x) for x in nu)
    if len(nu) != m - ell:
        raise ValueError(f"label must have length {m - ell}")
    ach = alpha_check(alpha)
    out = []
    for Mp in enumerate_variety(ach, F, m=m - 1):
        piv = set(p - 1 for p in Mp.pivots)
        free_cols = [c for c in range(m - 1) if c not in piv]
        last = [0] * m
        for c, v in zip(free_cols, nu):
            last[c] = v
        last[m - 1] = 1
        rows = tuple(r + (0,) for r in Mp.rows) + (tuple(last),)
        out.append(EchelonMatrix(rows, IndexTuple((*Mp.pivots, m), m), F))
    return out


def string_labels(F: Field, length: int):
    return itertools.product(range(F.q), repeat=length)


def string_fiber_array(nu, alpha, F: Field, base: np.ndarray | None = None) -> np.ndarray:
    """Array version of ``string_fiber``; ``base`` may hold the points of Omega_{alpha-check}."""
    m = alpha[-1]
    ell = len(alpha)
    nu = np.asarray(nu, dtype=F.dtype)
    if nu.shape != (m - ell,):
        raise ValueError(f"label must have length {m - ell}")
    if base is None:
        base, _ = variety_array(alpha_check(alpha), F, m=m - 1, force=True)
    N = base.shape[0]
    out = np.zeros((N, ell, m), dtype=F.dtype)
    out[:, : ell - 1, : m - 1] = base
    out[:, ell - 1, m - 1] = 1
    # non-pivot columns of the top block, per point, in increasing order
    piv = pivots_of_array(base) - 1 if ell > 1 else np.zeros((N, 0), dtype=np.int64)
    is_piv = np.zeros((N, m - 1), dtype=bool)
    np.put_along_axis(is_piv, piv, True, axis=1)
    cols = np.argsort(is_piv, axis=1, kind="stable")[:, : m - ell]
    np.put_along_axis(out[:, ell - 1, :], cols, np.broadcast_to(nu, (N, m - ell)), axis=1)
    return out
