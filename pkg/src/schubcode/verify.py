"""Batch checks of the counting identities and inequalities on parameter grids.

Every check returns ``CheckResult`` records carrying both sides of the
asserted relation as exact integers, so a failure can be reproduced from the
record alone.  Where a quantity can be counted directly (point counts, string
fibers, the family of strictly contained subvarieties) the enumeration is
compared against the closed formula.

The family 𝔖_alpha is indexed by hyperplanes W of V_m containing V_{alpha_k}.
Its member for W is {L in Omega_alpha : L inside W}; the remaining flag
conditions hold automatically because alpha_{k+1}, ..., alpha_l run
consecutively up to m.  Members are also rebuilt from an explicit basis of W
extending v_1, ..., v_{alpha_k} and compared as sets.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from fractions import Fraction

import numpy as np

from .combinat import (
    alpha_check,
    alpha_prime,
    delta,
    delta_set,
    enumerate_index_tuples,
    exceeds_q0,
    inv_ln2,
    is_consecutive,
    kink_index,
    missing_cells,
    nabla,
    phi_lift,
    point_count,
    q0,
    PRINTED_Q0_3,
)
from .gf import GF, Field, matmul, nullspace, rank
from .schubert import (
    cell_array,
    minors_array,
    pivots_of_array,
    schubert_member,
    EchelonMatrix,
    string_fiber_array,
    string_projection_array,
    variety_array,
)

CHECK_GROUPS = ("count", "ineq", "strings", "family", "dc", "q0")
DEFAULT_VERIFY_CAP = 250_000


@dataclass
class CheckResult:
    check_id: str
    instance: dict
    status: str  # pass | fail | skipped
    lhs: object = None
    rhs: object = None
    note: str = ""
    seed: int | None = None
    detail: dict | None = None

    @property
    def ok(self) -> bool:
        return self.status != "fail"

    def sort_key(self):
        inst = self.instance
        return (self.check_id, len(inst.get("alpha", ())), inst.get("m", 0),
                tuple(inst.get("alpha", ())), inst.get("q", 0))

    def to_json(self) -> dict:
        d = asdict(self)
        for key in ("lhs", "rhs"):
            if isinstance(d[key], Fraction):
                d[key] = str(d[key])
        return d

    def line(self) -> str:
        inst = self.instance
        where = f"alpha={tuple(inst['alpha'])} q={inst['q']}" if "alpha" in inst else ""
        s = f"[{self.status.upper():7s}] {self.check_id:24s} {where}"
        if self.status == "fail":
            s += f"  lhs={self.lhs} rhs={self.rhs}"
        if self.note:
            s += f"  ({self.note})"
        return s


def _inst(alpha, q) -> dict:
    return {"alpha": list(alpha), "ell": len(alpha), "m": alpha[-1], "q": q}


def _result(cid, alpha, q, ok, lhs=None, rhs=None, note="", **kw) -> CheckResult:
    return CheckResult(cid, _inst(alpha, q), "pass" if ok else "fail", lhs, rhs, note, **kw)


def _skip(cid, alpha, q, note) -> CheckResult:
    return CheckResult(cid, _inst(alpha, q), "skipped", note=note)


# -- shared per-instance data -------------------------------------------------

class Instance:
    """Lazily computed enumeration data for one (alpha, q)."""

    def __init__(self, alpha, q: int, cap: int = DEFAULT_VERIFY_CAP):
        self.alpha = tuple(alpha)
        self.q = q
        self.F = GF(q)
        self.m = self.alpha[-1]
        self.ell = len(self.alpha)
        self.cap = cap
        self.n = point_count(self.alpha, q)
        self._pts = None
        self._family = None

    @property
    def feasible(self) -> bool:
        return self.n <= self.cap

    @property
    def points(self) -> np.ndarray:
        if self._pts is None:
            self._pts, _ = variety_array(self.alpha, self.F, force=True)
        return self._pts

    def hyperplane_normals(self) -> np.ndarray:
        """Normals h (first nonzero 1) of the hyperplanes W = ker h containing V_{alpha_k}."""
        ak = self.alpha[kink_index(self.alpha) - 1]
        allh = projective_vectors(self.F, self.m)
        return allh[(allh[:, :ak] == 0).all(axis=1)]

    def incidence(self) -> np.ndarray:
        """Boolean (n, s): point L lies in the member for the s-th hyperplane."""
        if self._family is None:
            H = self.hyperplane_normals()
            P = self.points
            N = P.shape[0]
            prod = matmul(self.F, P.reshape(N * self.ell, self.m), H.T)
            self._family = (prod.reshape(N, self.ell, -1) == 0).all(axis=1)
        return self._family


def projective_vectors(F: Field, m: int) -> np.ndarray:
    """All nonzero vectors of F_q^m with first nonzero entry 1, in scan order."""
    out = []
    for j in range(m):
        rest = np.array(list(itertools.product(range(F.q), repeat=m - 1 - j)), dtype=F.dtype)
        rest = rest.reshape(F.q ** (m - 1 - j), m - 1 - j)
        block = np.zeros((rest.shape[0], m), dtype=F.dtype)
        block[:, j] = 1
        block[:, j + 1:] = rest
        out.append(block)
    return np.concatenate(out, axis=0)


# -- count recursion ------------------------------------------------------------

def check_count_recursion(alpha, q: int, inst: Instance | None = None) -> list[CheckResult]:
    alpha = tuple(alpha)
    if is_consecutive(alpha):
        return [_skip("count_recursion", alpha, q, "consecutive")]
    m, ell = alpha[-1], len(alpha)
    ap, ach = alpha_prime(alpha), alpha_check(alpha)
    lhs = point_count(alpha, q)
    rhs = point_count(ap, q) + q ** (m - ell) * point_count(ach, q)
    out = [_result("count_recursion", alpha, q, lhs == rhs, lhs, rhs, "formula")]
    inst = inst or Instance(alpha, q)
    if not inst.feasible:
        out.append(_skip("count_buckets", alpha, q, f"n={inst.n} above enumeration cap"))
        return out
    P = inst.points
    last = pivots_of_array(P)[:, -1]
    n_prime = int((last < m).sum())
    buckets = string_buckets(inst)
    ok = (
        P.shape[0] == lhs
        and n_prime == point_count(ap, q)
        and len(buckets) == q ** (m - ell)
        and all(c == point_count(ach, q) for c in buckets.values())
    )
    enum_rhs = n_prime + sum(buckets.values())
    out.append(_result("count_buckets", alpha, q, ok and enum_rhs == P.shape[0],
                       P.shape[0], enum_rhs,
                       f"{len(buckets)} strings of size {point_count(ach, q)}"))
    return out


def string_buckets(inst: Instance) -> dict:
    """Bucket the points of T_alpha by string label; returns label -> count."""
    P, m, q = inst.points, inst.m, inst.q
    piv = pivots_of_array(P)
    in_t = piv[:, -1] == m
    counts: dict = {}
    for key in np.unique(piv[in_t], axis=0):
        sel = in_t & (piv == key).all(axis=1)
        labels = string_projection_array(P[sel], tuple(key))
        codes = labels.astype(np.int64) @ (q ** np.arange(labels.shape[1])[::-1])
        for c, n in zip(*np.unique(codes, return_counts=True)):
            counts[int(c)] = counts.get(int(c), 0) + int(n)
    return counts


# -- inequalities ---------------------------------------------------------------

def _lhs_common(alpha, q):
    k = kink_index(alpha)
    ell = len(alpha)
    gap = alpha[k] - alpha[k - 1] - 1
    na, nap = point_count(alpha, q), point_count(alpha_prime(alpha), q)
    return q**gap * (na - q ** (ell - k) * nap)


def check_inequalities(alpha, q: int) -> list[CheckResult]:
    alpha = tuple(alpha)
    ell, m = len(alpha), alpha[-1]
    out = []
    s = sum(q ** sum(b) for b in nabla(alpha))
    out.append(_result("lem_ineq", alpha, q, (q - 1) ** ell * s < q**ell * q ** sum(alpha),
                       (q - 1) ** ell * s, q**ell * q ** sum(alpha)))
    na = point_count(alpha, q)
    out.append(_result("upp", alpha, q, (q - 1) ** ell * na < q**ell * q ** delta(alpha),
                       (q - 1) ** ell * na, q**ell * q ** delta(alpha)))
    if is_consecutive(alpha):
        for cid in ("lb_a", "lb_b", "aux_identity", "ineq_prel", "aux", "ineq_dec_b"):
            out.append(_skip(cid, alpha, q, "consecutive"))
        return out

    k = kink_index(alpha)
    ap, ach = alpha_prime(alpha), alpha_check(alpha)
    nap, nach = point_count(ap, q), point_count(ach, q)
    d, dp = delta(alpha), delta(ap)

    bad = [b for b in nabla(ap) if delta(phi_lift(b, alpha)) != delta(b) + ell - k]
    out.append(_result("lb_a", alpha, q, not bad, len(nabla(ap)) - len(bad), len(nabla(ap)),
                       "delta(phi(b)) = delta(b) + l - k"))

    P = _lhs_common(alpha, q)
    alpha0 = tuple(range(1, ell)) + (m,)
    rhs = q**d if alpha == alpha0 else q**d + q**dp
    branch = "alpha = (1..l-1, m)" if alpha == alpha0 else "alpha != (1..l-1, m)"
    out.append(_result("lb_b", alpha, q, P >= rhs, P, rhs, branch))

    e1 = m - alpha[k - 1]
    e2 = e1 - (ell - k)
    out.append(_result("aux_identity", alpha, q, e2 == alpha[k] - alpha[k - 1] - 1,
                       e2, alpha[k] - alpha[k - 1] - 1))

    rel = {
        "ineq_prel": (P, q**dp + q ** (m - ell) * nach - q**d),
        "aux": ((q**e2 - 1) * (na - q**d), (q**e1 - 1) * (nap - q**dp)),
        "ineq_dec_b": (P, q**dp + (na - nap) - q**d),
    }
    above = exceeds_q0(q, ell)
    for cid, (lhs, rhs) in rel.items():
        if above:
            out.append(_result(cid, alpha, q, lhs > rhs, lhs, rhs))
        else:
            r = _skip(cid, alpha, q, f"q <= q0({ell}); strict inequality holds anyway: {lhs > rhs}")
            r.lhs, r.rhs = lhs, rhs
            out.append(r)
    return out


# -- strings and cell identities -----------------------------------------------

def _row_set(arr: np.ndarray) -> np.ndarray:
    flat = arr.reshape(arr.shape[0], -1)
    return np.unique(flat, axis=0)


def check_string_bijections(alpha, q: int, inst: Instance | None = None,
                            member_sample: int = 200) -> list[CheckResult]:
    alpha = tuple(alpha)
    if is_consecutive(alpha):
        return [_skip("strings", alpha, q, "consecutive")]
    inst = inst or Instance(alpha, q)
    m, ell, F = inst.m, inst.ell, inst.F
    ap, ach = alpha_prime(alpha), alpha_check(alpha)
    out = []

    # pivot identity: Delta(alpha') cap nabla(alpha) = {beta in nabla(alpha) : beta_l = m}
    lhs = sorted(set(delta_set(ap, m)) & set(nabla(alpha)))
    rhs = sorted(b for b in nabla(alpha) if b[-1] == m)
    out.append(_result("pivot_identity", alpha, q, lhs == rhs, len(lhs), len(rhs)))

    # lemcell: cells of nabla(alpha') agree in ambient m-1 (zero column appended) and m
    bad = 0
    for b in nabla(ap):
        small = cell_array(b, F, m - 1)
        big = cell_array(b, F, m)
        emb = np.concatenate([small, np.zeros(small.shape[:2] + (1,), dtype=F.dtype)], axis=2)
        if emb.shape != big.shape or not np.array_equal(_row_set(emb), _row_set(big)):
            bad += 1
    out.append(_result("lemcell", alpha, q, bad == 0, len(nabla(ap)) - bad, len(nabla(ap))))

    if not inst.feasible:
        out.append(_skip("strings", alpha, q, f"n={inst.n} above enumeration cap"))
        return out
    P = inst.points
    piv = pivots_of_array(P)
    in_t = piv[:, -1] == m

    # st1: Omega_alpha = Omega_alpha' (embedded) disjoint-union the cells with beta_l = m
    low, _ = variety_array(ap, F, m=m - 1, force=True)
    low = np.concatenate([low, np.zeros(low.shape[:2] + (1,), dtype=F.dtype)], axis=2)
    top = [cell_array(b, F, m) for b in rhs]
    union = np.concatenate([low] + top, axis=0)
    ok = union.shape[0] == P.shape[0] and np.array_equal(_row_set(union), _row_set(P))
    out.append(_result("st1", alpha, q, ok, union.shape[0], P.shape[0]))

    # fibers: disjoint, each of size |Omega_alpha-check|, union = T_alpha, section property
    base, _ = variety_array(ach, F, m=m - 1, force=True)
    fibers = []
    section_ok = True
    member_ok = True
    for nu in itertools.product(range(q), repeat=m - ell):
        fib = string_fiber_array(nu, alpha, F, base)
        fp = pivots_of_array(fib)
        for key in np.unique(fp, axis=0):
            sel = (fp == key).all(axis=1)
            lab = string_projection_array(fib[sel], tuple(key))
            section_ok &= bool((lab == np.array(nu, dtype=F.dtype)).all())
        member_ok &= bool((fp <= np.array(alpha)).all())
        fibers.append(fib)
    allf = np.concatenate(fibers, axis=0)
    T = P[in_t]
    sizes_ok = all(f.shape[0] == point_count(ach, q) for f in fibers)
    disjoint = _row_set(allf).shape[0] == allf.shape[0]
    cover = allf.shape[0] == T.shape[0] and np.array_equal(_row_set(allf), _row_set(T))
    note = f"{len(fibers)} fibers x {point_count(ach, q)}"
    out.append(_result("string_fibers", alpha, q, sizes_ok and disjoint and cover and section_ok,
                       allf.shape[0], int(T.shape[0]), note))

    # membership of fiber points through the rank-based path on a sample
    for idx in np.linspace(0, allf.shape[0] - 1, min(member_sample, allf.shape[0])).astype(int):
        M = EchelonMatrix.from_array(allf[idx], F)
        member_ok &= schubert_member(M, alpha)
    out.append(_result("string_membership", alpha, q, member_ok, note="fiber points lie in Omega_alpha"))

    # missing cells: complement of the lift image, all with gamma_{k+1} - gamma_k = 1
    k = kink_index(alpha)
    image = [phi_lift(b, alpha) for b in nabla(ap)]
    miss = missing_cells(alpha)
    ok = (len(set(image)) == len(image)
          and set(image).isdisjoint(miss)
          and set(image) | set(miss) == set(nabla(alpha))
          and tuple(range(1, ell + 1)) in miss
          and all(g in miss for g in nabla(alpha) if g[k] - g[k - 1] == 1))
    out.append(_result("missing_cells", alpha, q, ok, len(image) + len(miss), len(nabla(alpha))))
    return out


# -- the family of strictly contained subvarieties -----------------------------

def extension_basis(F: Field, h, ak: int):
    """Basis of W = ker h starting with v_1..v_{alpha_k}, and the extension vector w_m."""
    m = len(h)
    rows = [[1 if j == i else 0 for j in range(m)] for i in range(ak)]
    for v in nullspace(F, [list(map(int, h))], m):
        if rank(F, rows + [v]) > len(rows):
            rows.append(v)
    w_m = next(i for i in range(m) if h[i])
    return rows, w_m


def materialize_member(inst: Instance, h) -> tuple[np.ndarray, int]:
    """Points of Omega_{alpha'}(l, W, B_1) mapped into V_m through the basis B_1."""
    F, alpha = inst.F, inst.alpha
    ak = alpha[kink_index(alpha) - 1]
    B1, w_m = extension_basis(F, h, ak)
    low, _ = variety_array(alpha_prime(alpha), F, m=inst.m - 1, force=True)
    N = low.shape[0]
    mapped = matmul(F, low.reshape(N * inst.ell, inst.m - 1), np.array(B1))
    return mapped.reshape(N, inst.ell, inst.m), w_m


def _same_points(F, A: np.ndarray, B: np.ndarray, ell: int, m: int) -> bool:
    if A.shape[0] != B.shape[0]:
        return False
    tuples = enumerate_index_tuples(ell, m)
    from .exterior import normalize_rows
    pa = _row_set(normalize_rows(F, minors_array(A, F, tuples)))
    pb = _row_set(normalize_rows(F, minors_array(B, F, tuples)))
    return pa.shape[0] == A.shape[0] and np.array_equal(pa, pb)


def check_strict_family(alpha, q: int, inst: Instance | None = None,
                        materialize_budget: int = 200_000) -> list[CheckResult]:
    alpha = tuple(alpha)
    if is_consecutive(alpha):
        return [_skip("family_count", alpha, q, "consecutive")]
    inst = inst or Instance(alpha, q)
    m, ell = inst.m, inst.ell
    k = kink_index(alpha)
    ak = alpha[k - 1]
    H = inst.hyperplane_normals()
    formula = (q ** (m - ak) - 1) // (q - 1)
    out = [_result("family_count", alpha, q, H.shape[0] == formula, H.shape[0], formula)]
    if not inst.feasible:
        out.append(_skip("family_incidence", alpha, q, f"n={inst.n} above enumeration cap"))
        return out
    inc = inst.incidence()
    per_point = inc.sum(axis=1)
    bound = (q ** (m - ak - (ell - k)) - 1) // (q - 1)
    lo = int(per_point.min())
    out.append(_result("family_incidence", alpha, q, lo >= bound, lo, bound,
                       f"min over {inc.shape[0]} points"))

    # every member has |Omega_alpha'| points; rebuild some from an explicit basis
    nap = point_count(alpha_prime(alpha), q)
    sizes = inc.sum(axis=0)
    n_mat = max(1, min(H.shape[0], materialize_budget // max(nap, 1)))
    same = True
    ext = []
    for j in range(n_mat):
        pts, w_m = materialize_member(inst, H[j])
        ext.append(w_m + 1)
        same &= _same_points(inst.F, pts, inst.points[inc[:, j]], ell, m)
    note = f"rebuilt {n_mat}/{H.shape[0]} members from a basis of W; w_m = v_i for i in {sorted(set(ext))}"
    out.append(_result("family_members", alpha, q, bool((sizes == nap).all()) and same,
                       int(sizes.min()), nap, note, detail={"extension_vectors": ext}))
    return out


def check_hyperplane_lemma_dc(alpha, q: int, inst: Instance | None = None, draws: int = 100,
                              seed: int = 0, functionals=None) -> list[CheckResult]:
    """Double-count bound: |Pi cap Omega_alpha| (q^e2 - 1) <= (q^e1 - 1) M_alpha.

    Functionals checked: every coordinate functional X_beta, ``draws`` seeded
    random ones, and any extra ``functionals`` given as coefficient rows.
    """
    alpha = tuple(alpha)
    if is_consecutive(alpha):
        return [_skip("dc", alpha, q, "consecutive")]
    inst = inst or Instance(alpha, q)
    if not inst.feasible:
        return [_skip("dc", alpha, q, f"n={inst.n} above enumeration cap")]
    from .code import combine

    F, m, ell = inst.F, inst.m, inst.ell
    k = kink_index(alpha)
    ak = alpha[k - 1]
    e1, e2 = m - ak, m - ak - (ell - k)
    nab = nabla(alpha)
    G = minors_array(inst.points, F, nab).T.copy()
    rng = np.random.default_rng(seed)
    rand = rng.integers(0, q, size=(draws, len(nab)))
    zero = ~rand.any(axis=1)
    rand[zero, 0] = 1
    parts = [np.eye(len(nab), dtype=np.int64), rand]
    if functionals is not None:
        parts.append(np.atleast_2d(np.asarray(functionals, dtype=np.int64)))
    C = np.concatenate(parts).astype(F.dtype)
    words = np.atleast_2d(combine(F, G, C))
    Z = (words == 0)
    lhs_counts = Z.sum(axis=1)
    inc = inst.incidence()
    M = (Z.astype(np.int64) @ inc.astype(np.int64)).max(axis=1)
    L = lhs_counts * (q**e2 - 1)
    R = M * (q**e1 - 1)
    slack = R - L
    i = int(np.argmin(slack))
    return [_result("dc", alpha, q, bool((slack >= 0).all()), int(L[i]), int(R[i]),
                    f"{C.shape[0]} functionals; tightest coeffs {C[i].tolist()}", seed=seed)]


# -- the threshold --------------------------------------------------------------

def check_q0(max_ell: int = 50) -> list[CheckResult]:
    inst = {"ell_max": max_ell}
    out = [CheckResult("q0_2", {"ell": 2}, "pass" if q0(2) == 2.0 else "fail", q0(2), 2)]
    vals = [q0(ell) for ell in range(2, max_ell + 1)]
    mono = all(b > a for a, b in zip(vals, vals[1:]))
    out.append(CheckResult("q0_monotone", inst, "pass" if mono else "fail", note=f"l = 2..{max_ell}"))
    ratio = q0(max_ell) / max_ell
    out.append(CheckResult("q0_asymptotic", inst, "pass" if abs(ratio - inv_ln2()) < 0.1 else "fail",
                           round(ratio, 6), round(inv_ln2(), 6), f"q0({max_ell})/{max_ell} vs 1/ln 2"))
    agree = all(exceeds_q0(q, ell) == (q > q0(ell)) for ell in range(2, max_ell + 1) for q in range(2, 200))
    out.append(CheckResult("q0_exact_path", inst, "pass" if agree else "fail",
                           note="exact integer test agrees with the float threshold for q < 200"))
    v3 = q0(3)
    out.append(CheckResult(
        "q0_3_printed", {"ell": 3}, "pass" if abs(v3 - PRINTED_Q0_3) > 0.2 else "fail",
        round(v3, 6), PRINTED_Q0_3,
        "formula gives 2+sqrt(2) = 3.4142; the printed approximation 3.14 disagrees; the formula is used",
    ))
    return out


# -- grids and drivers ------------------------------------------------------------

@dataclass
class GridConfig:
    ells: tuple = (2, 3)
    m_max: int = 6
    qs: tuple = (2, 3, 4)
    checks: tuple = CHECK_GROUPS
    point_cap: int = DEFAULT_VERIFY_CAP
    seed: int = 0
    draws: int = 100
    workers: int = 1
    include_consecutive: bool = False

    def instances(self) -> list[tuple[tuple, int]]:
        out = []
        for ell in self.ells:
            for m in range(ell + 1, self.m_max + 1):
                for a in enumerate_index_tuples(ell, m):
                    if a[-1] != m or (is_consecutive(a) and not self.include_consecutive):
                        continue
                    out.extend((tuple(a), q) for q in self.qs)
        return out


def run_instance(alpha, q: int, checks=CHECK_GROUPS, cfg: GridConfig | None = None) -> list[CheckResult]:
    cfg = cfg or GridConfig()
    inst = Instance(alpha, q, cfg.point_cap)
    out: list[CheckResult] = []
    if "count" in checks:
        out += check_count_recursion(alpha, q, inst)
    if "ineq" in checks:
        out += check_inequalities(alpha, q)
    if "strings" in checks:
        out += check_string_bijections(alpha, q, inst)
    if "family" in checks:
        out += check_strict_family(alpha, q, inst)
    if "dc" in checks:
        out += check_hyperplane_lemma_dc(alpha, q, inst, draws=cfg.draws, seed=cfg.seed)
    return out


def _job(args):
    alpha, q, checks, cfg = args
    return run_instance(alpha, q, checks, cfg)


def run_checks(instances, checks=CHECK_GROUPS, cfg: GridConfig | None = None) -> list[CheckResult]:
    cfg = cfg or GridConfig()
    jobs = [(tuple(a), q, tuple(checks), cfg) for a, q in instances]
    if cfg.workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(cfg.workers) as ex:
            parts = list(ex.map(_job, jobs))
    else:
        parts = [_job(j) for j in jobs]
    results = [r for p in parts for r in p]
    if "q0" in checks:
        results += check_q0()
    return sorted(results, key=CheckResult.sort_key)


def run_grid(cfg: GridConfig | None = None) -> list[CheckResult]:
    cfg = cfg or GridConfig()
    return run_checks(cfg.instances(), cfg.checks, cfg)


def summarize(results) -> dict:
    out = {"pass": 0, "fail": 0, "skipped": 0}
    for r in results:
        out[r.status] += 1
    out["total"] = len(results)
    return out


def report_json(results, cfg: GridConfig | None = None) -> dict:
    rep = {"summary": summarize(results), "results": [r.to_json() for r in results]}
    if cfg is not None:
        c = asdict(cfg)
        c.pop("workers")
        rep["config"] = c
    return rep
