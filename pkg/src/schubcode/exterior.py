"""Multivectors in the exterior algebra of V_m and hyperplanes of Plucker space.

A multivector of degree d is a sparse map from I(d, m) to nonzero field codes,
over the canonical basis v_{i_1} ^ ... ^ v_{i_d}, i_1 < ... < i_d.

Two dictionaries between hyperplanes and (m-l)-vectors live here:

* ``hyperplane_multivector`` is the plain relabeling c_beta X_beta <->
  c_beta v_{beta^C}, with no signs.
* ``multivector_functional`` is the wedge pairing: the functional whose zero
  set is {L : z ^ w_1 ^ ... ^ w_l = 0}.  It differs from the relabeling by the
  sign of v_{beta^C} ^ v_beta against v_1 ^ ... ^ v_m, one sign per beta.

Over characteristic 2 the two agree.  Otherwise only the pairing describes
the hyperplane {L : L meets W} attached to a decomposable z_W, so all
decomposability verdicts about hyperplanes go through the pairing.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .combinat import (
    IndexTuple,
    block_structure,
    enumerate_index_tuples,
    gaussian_binomial,
    nabla,
)
from .gf import Field, nullspace, rank
from .schubert import CapExceeded, PluckerVector, minors_array, variety_array

DEFAULT_DUAL_CAP = 10**6


def dual_cap() -> int:
    return int(os.environ.get("SCHUBCODE_DUAL_CAP", DEFAULT_DUAL_CAP))


@dataclass(frozen=True)
class Multivector:
    degree: int
    m: int
    field: Field
    coeffs: dict = field(default_factory=dict)

    def __post_init__(self):
        clean = {tuple(k): int(v) for k, v in self.coeffs.items() if int(v) % self.field.q}
        object.__setattr__(self, "coeffs", dict(sorted(clean.items())))

    def __eq__(self, other):
        return (isinstance(other, Multivector) and self.degree == other.degree
                and self.m == other.m and self.field is other.field
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.degree, self.m, tuple(self.coeffs.items())))

    def is_zero(self) -> bool:
        return not self.coeffs

    def scale(self, c: int) -> "Multivector":
        F = self.field
        return Multivector(self.degree, self.m, F, {k: F.mul(c, v) for k, v in self.coeffs.items()})

    def __add__(self, other: "Multivector") -> "Multivector":
        if (self.degree, self.m) != (other.degree, other.m) or self.field is not other.field:
            raise ValueError("incompatible multivectors")
        F = self.field
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = F.add(out.get(k, 0), v)
        return Multivector(self.degree, self.m, F, out)

    def __neg__(self):
        return self.scale(self.field.neg(1))

    def vector(self) -> tuple[int, ...]:
        """Dense coefficients over I(degree, m) in canonical order."""
        return tuple(self.coeffs.get(tuple(b), 0) for b in enumerate_index_tuples(self.degree, self.m))


def basis_wedge(beta, m: int, F: Field, c: int = 1) -> Multivector:
    return Multivector(len(beta), m, F, {tuple(beta): c})


def wedge(z: Multivector, x) -> Multivector:
    """z ^ x for a vector x (sequence of m codes)."""
    if z.degree + 1 > z.m:
        raise ValueError("degree overflow")
    if len(x) != z.m:
        raise ValueError("vector length mismatch")
    F = z.field
    out: dict = {}
    for idx, c in z.coeffs.items():
        for j, xj in enumerate(x, start=1):
            if not xj or j in idx:
                continue
            after = sum(1 for i in idx if i > j)
            term = F.mul(c, int(xj))
            if after % 2:
                term = F.neg(term)
            key = tuple(sorted(idx + (j,)))
            out[key] = F.add(out.get(key, 0), term)
    return Multivector(z.degree + 1, z.m, F, out)


def wedge_vectors(vectors, m: int, F: Field) -> Multivector:
    z = Multivector(0, m, F, {(): 1})
    for v in vectors:
        z = wedge(z, v)
    return z


def wedge_map_matrix(z: Multivector) -> list[list[int]]:
    """Matrix of x -> z ^ x: rows over I(d+1, m), columns over 1..m."""
    cols = []
    for j in range(z.m):
        e = [0] * z.m
        e[j] = 1
        cols.append(wedge(z, e).vector())
    nrows = len(cols[0])
    return [[cols[j][r] for j in range(z.m)] for r in range(nrows)]


def support_space(z: Multivector) -> list[list[int]]:
    """A basis of V(z) = {x : z ^ x = 0}."""
    if z.is_zero():
        raise ValueError("support space of the zero multivector")
    if z.degree == z.m:
        return [[1 if i == j else 0 for i in range(z.m)] for j in range(z.m)]
    return nullspace(z.field, wedge_map_matrix(z), z.m)


def is_decomposable(z: Multivector) -> bool:
    if z.is_zero():
        raise ValueError("decomposability of the zero multivector")
    if z.degree <= 1:
        return True
    return len(support_space(z)) == z.degree


def _dim_cap_prefix(F: Field, basis, j: int) -> int:
    """dim(span(basis) cap V_j), V_j = span(v_1..v_j)."""
    if not basis:
        return 0
    tails = [row[j:] for row in basis]
    return len(basis) - (rank(F, tails) if j < len(basis[0]) else 0)


def is_schubert_decomposable(z: Multivector, alpha) -> bool:
    if z.is_zero():
        raise ValueError("zero multivector")
    if z.degree != z.m - len(alpha):
        raise ValueError("degree must be m - l")
    if not is_decomposable(z):
        return False
    basis = support_space(z)
    bs = block_structure(alpha)
    return all(
        _dim_cap_prefix(z.field, basis, alpha[p - 1]) == alpha[p - 1] - p
        for p in bs.breakpoints()
    )


def complement_tuple(alpha, m: int | None = None) -> IndexTuple:
    m = m if m is not None else getattr(alpha, "m", alpha[-1])
    s = set(alpha)
    return IndexTuple([i for i in range(1, m + 1) if i not in s], m)


def pairing_sign(beta, m: int) -> int:
    """0 if v_{beta^C} ^ v_beta = +v_1^...^v_m, else 1."""
    comp = complement_tuple(beta, m)
    return sum(1 for x in comp for y in beta if x > y) % 2


# -- hyperplane sections ------------------------------------------------------

@dataclass(frozen=True)
class HyperplaneSection:
    """The functional sum c_beta X_beta over beta in nabla(alpha)."""

    alpha: tuple
    field: Field
    coeffs: tuple  # codes, one per beta in nabla(alpha), canonical order

    def __post_init__(self):
        object.__setattr__(self, "alpha", tuple(self.alpha))
        object.__setattr__(self, "coeffs", tuple(int(c) for c in self.coeffs))
        if len(self.coeffs) != len(nabla(self.alpha)):
            raise ValueError("coefficient vector does not match nabla(alpha)")

    @classmethod
    def from_dict(cls, alpha, F: Field, coeffs: dict) -> "HyperplaneSection":
        known = set(map(tuple, nabla(alpha)))
        extra = [b for b in coeffs if tuple(b) not in known]
        if extra:
            raise ValueError(f"{extra} not in nabla({tuple(alpha)})")
        return cls(alpha, F, tuple(int(coeffs.get(tuple(b), 0)) for b in nabla(alpha)))

    def as_dict(self) -> dict:
        return {tuple(b): c for b, c in zip(nabla(self.alpha), self.coeffs) if c}

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def scale(self, c: int) -> "HyperplaneSection":
        return HyperplaneSection(self.alpha, self.field, tuple(self.field.mul(c, x) for x in self.coeffs))

    def normalized(self) -> "HyperplaneSection":
        return HyperplaneSection(self.alpha, self.field, normalize_projective(self.field, self.coeffs))

    def format(self) -> str:
        return format_functional(self)


def normalize_projective(F: Field, vec) -> tuple[int, ...]:
    lead = next((x for x in vec if x), None)
    if lead is None:
        return tuple(vec)
    s = F.inv(lead)
    return tuple(F.mul(s, x) for x in vec)


def format_functional(H: HyperplaneSection) -> str:
    terms = [f"{c}*X[{','.join(map(str, b))}]" for b, c in H.as_dict().items()]
    return " + ".join(terms) if terms else "0"


def parse_functional(text: str, alpha, F: Field) -> HyperplaneSection:
    """Parse '1*X[1,2] + 2*X[2,4]'; a bare 'X[..]' means coefficient 1."""
    coeffs: dict = {}
    for term in text.replace(" ", "").split("+"):
        if not term:
            continue
        if "*" in term:
            c, x = term.split("*", 1)
            c = int(c)
        else:
            c, x = 1, term
        if not (x.startswith("X[") and x.endswith("]")):
            raise ValueError(f"cannot parse term {term!r}")
        beta = tuple(int(t) for t in x[2:-1].split(","))
        coeffs[beta] = F.add(coeffs.get(beta, 0), c % F.q)
    return HyperplaneSection.from_dict(alpha, F, coeffs)


def hyperplane_multivector(H: HyperplaneSection) -> Multivector:
    """c_beta X_beta -> c_beta v_{beta^C}, a plain relabeling."""
    if H.is_zero():
        raise ValueError("zero functional")
    m = H.alpha[-1]
    ell = len(H.alpha)
    coeffs = {tuple(complement_tuple(b, m)): c for b, c in H.as_dict().items()}
    return Multivector(m - ell, m, H.field, coeffs)


def multivector_hyperplane(z: Multivector, alpha) -> HyperplaneSection:
    """Inverse relabeling, restricted to nabla(alpha)."""
    m = z.m
    coeffs = {tuple(b): z.coeffs.get(tuple(complement_tuple(b, m)), 0) for b in nabla(alpha)}
    return HyperplaneSection.from_dict(alpha, z.field, coeffs)


def multivector_functional(z: Multivector, alpha) -> HyperplaneSection:
    """The functional L -> z ^ L (wedge pairing), restricted to nabla(alpha)."""
    F = z.field
    m = z.m
    coeffs = {}
    for b in nabla(alpha):
        c = z.coeffs.get(tuple(complement_tuple(b, m)), 0)
        coeffs[tuple(b)] = F.neg(c) if pairing_sign(b, m) else c
    return HyperplaneSection.from_dict(alpha, F, coeffs)


def evaluate(H: HyperplaneSection, P: PluckerVector) -> int:
    if P.alpha is not None and tuple(P.alpha) != H.alpha:
        raise ValueError("alpha tag mismatch")
    F = H.field
    acc = 0
    for b, c in zip(nabla(H.alpha), H.coeffs):
        if c:
            acc = F.add(acc, F.mul(c, P[b]))
    return acc


def wedge_evaluate(z: Multivector, rows) -> int:
    """Coefficient of v_1^...^v_m in z ^ w_1 ^ ... ^ w_l."""
    out = z
    for r in rows:
        out = wedge(out, list(r))
    return out.coeffs.get(tuple(range(1, z.m + 1)), 0)


# -- Schubert decomposability of hyperplanes by dual-Grassmannian scan --------

@dataclass(frozen=True)
class Verdict:
    schubert_decomposable: bool
    decomposable: bool
    witness: tuple | None  # basis rows of W, as tuples of codes

    def __bool__(self):
        return self.schubert_decomposable


class DualScan:
    """All (m-l)-subspaces W of F_q^m with their induced functionals on nabla(alpha).

    For each W: z_W is the wedge of its echelon basis, the functional is the
    wedge pairing with z_W, and the Schubert flag conditions are read off the
    pivots (for a right-RREF basis, dim(W cap V_j) = #pivots <= j).
    """

    def __init__(self, alpha, F: Field, cap: int | None = None, force: bool = False):
        self.alpha = tuple(alpha)
        self.field = F
        m = self.alpha[-1]
        ell = len(self.alpha)
        d = m - ell
        self.m, self.ell, self.d = m, ell, d
        size = gaussian_binomial(m, d, F.q)
        cap = dual_cap() if cap is None else cap
        if size > cap and not force:
            raise CapExceeded(f"dual Grassmannian has {size} points, cap {cap}")
        self.size = size
        nab = nabla(self.alpha)
        if d == 0:
            self.W = np.zeros((1, 0, m), dtype=F.dtype)
            z = np.ones((1, 1), dtype=F.dtype)
            comps = [()]
        else:
            top = tuple(range(ell + 1, m + 1))
            self.W, _ = variety_array(top, F, m=m, force=True)
            comps = enumerate_index_tuples(d, m)
            z = minors_array(self.W, F, comps)
        comp_index = {tuple(c): i for i, c in enumerate(comps)}
        cols = [comp_index[tuple(complement_tuple(b, m))] for b in nab]
        func = z[:, cols]
        neg_mask = np.array([pairing_sign(b, m) for b in nab], dtype=bool)
        if neg_mask.any():
            func[:, neg_mask] = F.vneg(func[:, neg_mask])
        self.functionals = func
        self.schubert_ok = self._flag_conditions()
        self._index = None

    def _flag_conditions(self) -> np.ndarray:
        N = self.W.shape[0]
        if self.d == 0:
            return np.ones(N, dtype=bool)
        m = self.m
        nz = self.W != 0
        piv = m - np.argmax(nz[..., ::-1], axis=-1)  # (N, d), 1-based
        ok = np.ones(N, dtype=bool)
        for p in block_structure(self.alpha).breakpoints():
            a = self.alpha[p - 1]
            ok &= (piv <= a).sum(axis=1) == a - p
        return ok

    @cached_property
    def normalized(self) -> np.ndarray:
        return normalize_rows(self.field, self.functionals)

    def index(self) -> dict:
        """normalized restricted functional -> (first W index, first Schubert-ok W index)."""
        if self._index is None:
            idx: dict = {}
            rows = self.normalized
            nonzero = rows.any(axis=1)
            for i in range(rows.shape[0]):
                if not nonzero[i]:
                    continue
                key = rows[i].tobytes()
                first, first_ok = idx.get(key, (None, None))
                if first is None or self._w_key(i) < self._w_key(first):
                    first = i
                if self.schubert_ok[i] and (first_ok is None or self._w_key(i) < self._w_key(first_ok)):
                    first_ok = i
                idx[key] = (first, first_ok)
            self._index = idx
        return self._index

    def _w_key(self, i: int) -> tuple:
        return tuple(int(x) for x in self.W[i].ravel())

    def witness_rows(self, i: int) -> tuple:
        return tuple(tuple(int(x) for x in r) for r in self.W[i])

    def verdict(self, H: HyperplaneSection) -> Verdict:
        if H.is_zero():
            raise ValueError("zero functional")
        key = np.array(normalize_projective(self.field, H.coeffs), dtype=self.field.dtype).tobytes()
        first, first_ok = self.index().get(key, (None, None))
        if first_ok is not None:
            return Verdict(True, True, self.witness_rows(first_ok))
        return Verdict(False, first is not None, None)

    def schubert_decomposable_functionals(self) -> list[tuple[tuple[int, ...], int]]:
        """Distinct normalized nonzero functionals from Schubert-ok W, with a witness index."""
        out = []
        for key, (_, first_ok) in sorted(self.index().items(), key=lambda kv: kv[0]):
            if first_ok is not None:
                out.append((tuple(int(x) for x in self.normalized[first_ok]), first_ok))
        return sorted(out)


def normalize_rows(F: Field, arr: np.ndarray) -> np.ndarray:
    """Scale each row so its first nonzero entry is 1 (zero rows unchanged)."""
    arr = np.asarray(arr, dtype=F.dtype)
    nz = arr != 0
    has = nz.any(axis=1)
    first = np.argmax(nz, axis=1)
    lead = arr[np.arange(arr.shape[0]), first]
    lead = np.where(has, lead, 1)
    s = F.inv_table[lead]
    return F.vmul(s[:, None].repeat(arr.shape[1], axis=1), arr)


def hyperplane_is_schubert_decomposable(H: HyperplaneSection, cap: int | None = None,
                                        scan: DualScan | None = None) -> Verdict:
    scan = scan if scan is not None else DualScan(H.alpha, H.field, cap)
    return scan.verdict(H)
