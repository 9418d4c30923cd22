"""Schubert codes: generator matrices, weights, exhaustive minimum-weight scans.

The generator matrix has one row per beta in nabla(alpha) (canonical order)
and one column per point of Omega_alpha (enumeration order); the entry is the
Plucker coordinate X_beta of that point.  A codeword is the evaluation of a
functional sum c_beta X_beta at every point, so weights are counted per
projective functional: first nonzero coefficient 1, the rest odometer order.

The scan is vectorized: for each leading position and each prefix of the free
coefficients, all q^t completions of the last t coefficients are evaluated at
once against a precomputed block of partial codewords.
"""

from __future__ import annotations

import itertools
import os
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .combinat import (
    alpha_check,
    alpha_prime,
    delta,
    is_consecutive,
    nabla,
    point_count,
)
from .exterior import DualScan, HyperplaneSection
from .gf import Field, rank
from .schubert import CapExceeded, check_cap, minors_array, variety_array

DEFAULT_SCAN_CAP = 10**8
BLOCK_ELEMENTS = 1 << 22


def scan_cap() -> int:
    return int(os.environ.get("SCHUBCODE_SCAN_CAP", DEFAULT_SCAN_CAP))


@dataclass
class SchubertCode:
    alpha: tuple
    field: Field
    generator: np.ndarray  # (k, n) codes
    points: np.ndarray  # (n, l, m)
    cells: list

    @property
    def n(self) -> int:
        return self.generator.shape[1]

    @property
    def k(self) -> int:
        return self.generator.shape[0]

    @property
    def q(self) -> int:
        return self.field.q

    @property
    def q_delta(self) -> int:
        return self.q ** delta(self.alpha)

    def num_functionals(self) -> int:
        return (self.q**self.k - 1) // (self.q - 1)

    def generator_csv(self) -> str:
        return "\n".join(",".join(str(int(x)) for x in row) for row in self.generator) + "\n"


def build_code(alpha, F: Field, cap: int | None = None, force: bool = False) -> SchubertCode:
    alpha = tuple(alpha)
    check_cap(alpha, F, cap, force)
    pts, cells = variety_array(alpha, F, cap=cap, force=force)
    G = minors_array(pts, F, nabla(alpha)).T.copy()
    return SchubertCode(alpha, F, G, pts, cells)


def generator_rank(C: SchubertCode) -> int:
    return rank(C.field, C.generator.tolist())


def codeword(H: HyperplaneSection, C: SchubertCode) -> np.ndarray:
    if tuple(H.alpha) != C.alpha:
        raise ValueError("alpha tag mismatch")
    if H.is_zero():
        raise ValueError("zero functional")
    return combine(C.field, C.generator, np.array(H.coeffs, dtype=C.field.dtype))


def combine(F: Field, G: np.ndarray, coeffs: np.ndarray) -> np.ndarray:
    """sum_i coeffs[i] * G[i] (coeffs may be (k,) or (B, k))."""
    coeffs = np.atleast_2d(coeffs)
    acc = np.zeros((coeffs.shape[0], G.shape[1]), dtype=F.dtype)
    for i in range(G.shape[0]):
        acc = F.vadd(acc, F.mul_table[coeffs[:, i][:, None], G[i][None, :]])
    return acc[0] if acc.shape[0] == 1 else acc


def weight(w) -> int:
    return int(np.count_nonzero(w))


# -- projective scan ----------------------------------------------------------

def projective_functionals(k: int, q: int):
    """Yield all normalized coefficient tuples (first nonzero = 1) in scan order."""
    for j in range(k):
        for rest in itertools.product(range(q), repeat=k - 1 - j):
            yield (0,) * j + (1,) + rest


@dataclass
class _ScanState:
    best: int
    minimizers: list
    dist: np.ndarray | None


_WORKER: dict = {}


def _block(F: Field, G: np.ndarray, t: int):
    """Partial codewords of all combinations of the last t rows, and their coefficients."""
    k, n = G.shape
    S = np.zeros((1, n), dtype=F.dtype)
    coef = np.zeros((1, 0), dtype=np.int64)
    for r in range(k - t, k):
        mult = F.mul_table[:, G[r]]  # (q, n)
        S = F.vadd(S[:, None, :], mult[None, :, :]).reshape(-1, n)
        coef = np.concatenate(
            [np.repeat(coef, F.q, axis=0), np.tile(np.arange(F.q), coef.shape[0])[:, None]], axis=1
        )
    return S, coef


def _choose_t(F: Field, n: int, k: int) -> int:
    t = 0
    while t < k - 1 and F.q ** (t + 1) * n <= BLOCK_ELEMENTS:
        t += 1
    return t


def _tasks(k: int, q: int, t: int):
    for j in range(k):
        free = k - 1 - j
        tj = min(free, t)
        for prefix in itertools.product(range(q), repeat=free - tj):
            yield j, prefix, tj


def _run_tasks(F: Field, G: np.ndarray, tasks, t: int, distribution: bool) -> _ScanState:
    k, n = G.shape
    blocks = {}
    best = n + 1
    minimizers: list = []
    dist = np.zeros(n + 1, dtype=np.int64) if distribution else None
    for j, prefix, tj in tasks:
        if tj not in blocks:
            blocks[tj] = _block(F, G, tj)
        S, coef = blocks[tj]
        base = G[j].copy()
        for off, c in enumerate(prefix):
            if c:
                base = F.vadd(base, F.mul_table[c, G[j + 1 + off]])
        words = F.vadd(base[None, :], S)
        wts = np.count_nonzero(words, axis=1)
        if dist is not None:
            dist += np.bincount(wts, minlength=n + 1)
        w = int(wts.min())
        if w > best:
            continue
        if w < best:
            best, minimizers = w, []
        head = (0,) * j + (1,) + tuple(prefix)
        for row in np.flatnonzero(wts == w):
            minimizers.append(head + tuple(int(x) for x in coef[row]))
    return _ScanState(best, minimizers, dist)


def _worker_init(F_q, G, t, distribution):
    from .gf import GF

    _WORKER.update(F=GF(F_q), G=G, t=t, distribution=distribution)


def _worker_run(tasks):
    w = _WORKER
    return _run_tasks(w["F"], w["G"], tasks, w["t"], w["distribution"])


def _merge(states, n: int, distribution: bool) -> _ScanState:
    best = min(s.best for s in states)
    mins = sorted({m for s in states if s.best == best for m in s.minimizers})
    dist = None
    if distribution:
        dist = np.zeros(n + 1, dtype=np.int64)
        for s in states:
            dist += s.dist
    return _ScanState(best, mins, dist)


def scan(C: SchubertCode, distribution: bool = False, workers: int = 1,
         cap: int | None = None, force: bool = False) -> _ScanState:
    cap = scan_cap() if cap is None else cap
    total = C.num_functionals()
    if total > cap and not force:
        raise CapExceeded(f"{total} projective functionals exceed scan cap {cap}")
    F, G = C.field, C.generator
    t = _choose_t(F, C.n, C.k)
    tasks = list(_tasks(C.k, F.q, t))
    if workers <= 1 or len(tasks) < 2:
        state = _run_tasks(F, G, tasks, t, distribution)
        state.minimizers = sorted(set(state.minimizers))
        return state
    chunks = [tasks[i::workers] for i in range(workers)]
    with ProcessPoolExecutor(workers, initializer=_worker_init,
                             initargs=(F.q, G, t, distribution)) as ex:
        states = list(ex.map(_worker_run, chunks))
    return _merge(states, C.n, distribution)


@dataclass
class WeightReport:
    alpha: tuple
    q: int
    n: int
    k: int
    d: int
    minimizers: list
    distribution: dict | None = None
    mwcc: list | None = None
    converse: dict | None = None
    notes: list = field(default_factory=list)

    @property
    def e(self) -> int:
        return self.n - self.d

    @property
    def q_delta(self) -> int:
        return self.q ** delta(self.alpha)

    def counterexamples(self) -> list:
        if self.mwcc is None:
            return []
        return [v for v in self.mwcc if not v["schubert_decomposable"]]

    def to_json(self) -> dict:
        out = {
            "alpha": list(self.alpha),
            "q": self.q,
            "n": self.n,
            "k": self.k,
            "d": self.d,
            "e": self.e,
            "q_delta": self.q_delta,
            "minimizers": [],
            "distribution": None,
        }
        verdicts = {tuple(v["coeffs"]): v for v in (self.mwcc or [])}
        for coeffs in self.minimizers:
            v = verdicts.get(tuple(coeffs), {})
            out["minimizers"].append({
                "coeffs": list(coeffs),
                "weight": self.d,
                "schubert_decomposable": v.get("schubert_decomposable"),
                "witness": v.get("witness"),
            })
        if self.distribution is not None:
            out["distribution"] = {str(w): c for w, c in sorted(self.distribution.items())}
        if self.converse is not None:
            out["converse"] = self.converse
        if self.mwcc is not None:
            out["counterexamples"] = len(self.counterexamples())
        return out


def min_weight(C: SchubertCode, distribution: bool = False, workers: int = 1,
               cap: int | None = None, force: bool = False,
               assert_formula: bool = False) -> WeightReport:
    st = scan(C, distribution=distribution, workers=workers, cap=cap, force=force)
    dist = None
    if distribution:
        dist = {int(w): int(c) for w, c in enumerate(st.dist) if c}
    rep = WeightReport(C.alpha, C.q, C.n, C.k, st.best, st.minimizers, dist)
    if assert_formula and rep.d != rep.q_delta:
        raise AssertionError(f"d = {rep.d} but q^delta = {rep.q_delta} for {C.alpha} over F_{C.q}")
    return rep


def weight_distribution(C: SchubertCode, workers: int = 1, cap: int | None = None,
                        force: bool = False) -> dict:
    return min_weight(C, distribution=True, workers=workers, cap=cap, force=force).distribution


def mwcc_check(C: SchubertCode, report: WeightReport | None = None, workers: int = 1,
               cap: int | None = None, dual_cap: int | None = None,
               force: bool = False) -> WeightReport:
    """Classify every minimum-weight functional and check the converse direction.

    Each minimizer gets a verdict from the dual-Grassmannian scan.  Then every
    distinct Schubert-decomposable functional found by that scan is evaluated
    and must have weight exactly q^delta(alpha).
    """
    rep = report if report is not None else min_weight(C, workers=workers, cap=cap, force=force)
    ds = DualScan(C.alpha, C.field, cap=dual_cap, force=force)
    verdicts = []
    for coeffs in rep.minimizers:
        v = ds.verdict(HyperplaneSection(C.alpha, C.field, coeffs))
        verdicts.append({
            "coeffs": list(coeffs),
            "schubert_decomposable": v.schubert_decomposable,
            "decomposable": v.decomposable,
            "witness": [list(r) for r in v.witness] if v.witness is not None else None,
        })
    rep.mwcc = verdicts
    sd = ds.schubert_decomposable_functionals()
    failures = []
    if sd:
        coeffs = np.array([c for c, _ in sd], dtype=C.field.dtype)
        words = combine(C.field, C.generator, coeffs)
        wts = np.count_nonzero(np.atleast_2d(words), axis=1)
        for (c, _), w in zip(sd, wts):
            if int(w) != rep.q_delta:
                failures.append({"coeffs": list(c), "weight": int(w)})
    rep.converse = {"checked": len(sd), "failures": failures}
    return rep


def case1_check(C: SchubertCode, rep: WeightReport) -> list[dict]:
    """Section-size bound for minimizers vanishing on the Omega_{alpha'} columns.

    Those columns are the points whose last pivot is < m.  Returns one record
    per such minimizer: {coeffs, section, bound, ok}.
    """
    if is_consecutive(C.alpha):
        return []
    m = C.alpha[-1]
    q = C.q
    ap, ach = alpha_prime(C.alpha), alpha_check(C.alpha)
    ell = len(C.alpha)
    bound = point_count(ap, q) + q ** (m - ell) * (point_count(ach, q) - q ** delta(ach))
    last_piv = m - np.argmax((C.points[:, -1, :] != 0)[:, ::-1], axis=1)
    block = last_piv < m
    out = []
    for coeffs in rep.minimizers:
        w = combine(C.field, C.generator, np.array(coeffs, dtype=C.field.dtype))
        if np.count_nonzero(w[block]) == 0:
            section = C.n - weight(w)
            out.append({"coeffs": list(coeffs), "section": section, "bound": bound,
                        "ok": section <= bound})
    return out
