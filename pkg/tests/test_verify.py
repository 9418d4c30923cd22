import itertools
import json

import pytest

from schubcode.combinat import (
    alpha_prime,
    delta,
    enumerate_index_tuples,
    is_consecutive,
    kink_index,
    missing_cells,
    point_count,
    q0,
)
from schubcode.gf import GF, rank
from schubcode.verify import (
    CheckResult,
    GridConfig,
    Instance,
    check_count_recursion,
    check_hyperplane_lemma_dc,
    check_inequalities,
    check_q0,
    check_string_bijections,
    check_strict_family,
    projective_vectors,
    report_json,
    run_checks,
    run_grid,
    summarize,
)


def by_id(results):
    return {r.check_id: r for r in results}


def first_departure(alpha):
    """Smallest j with alpha_j > j."""
    return next(j for j, a in enumerate(alpha, 1) if a > j)


def lb_b_should_fail(alpha):
    ell, m = len(alpha), alpha[-1]
    k = kink_index(alpha)
    return first_departure(alpha) == k == ell - 1 and alpha != tuple(range(1, ell)) + (m,)


def test_count_recursion_examples():
    r = by_id(check_count_recursion((2, 4), 2))
    assert r["count_recursion"].lhs == 19 == 7 + 4 * 3
    assert r["count_buckets"].status == "pass"
    r = by_id(check_count_recursion((1, 2, 6), 2))
    assert r["count_recursion"].ok
    assert point_count((1,), 2) == 1
    [s] = check_count_recursion((2, 3), 2)
    assert s.status == "skipped" and s.note == "consecutive"


def test_count_buckets_skipped_over_cap():
    res = check_count_recursion((2, 4), 3, Instance((2, 4), 3, cap=10))
    r = by_id(res)
    assert r["count_recursion"].ok and r["count_buckets"].status == "skipped"


def test_lem_ineq_example():
    r = by_id(check_inequalities((2, 4), 3))
    assert (r["lem_ineq"].lhs, r["lem_ineq"].rhs) == (4 * 1323, 9 * 729)
    assert r["ineq_prel"].status == "pass"
    assert r["ineq_prel"].lhs == 3 ** 1 * (49 - 3 * 13)


def test_lhs_matches_missing_cell_sum():
    # independent path: the lift raises delta by l - k, so what remains is the missing cells
    for ell in (2, 3, 4):
        for m in range(ell + 1, 8):
            for a in enumerate_index_tuples(ell, m):
                a = tuple(a)
                if a[-1] != m or is_consecutive(a):
                    continue
                k = kink_index(a)
                for q in (2, 3):
                    lhs = by_id(check_inequalities(a, q))["lb_b"].lhs
                    cells = sum(q ** delta(g) for g in missing_cells(a))
                    assert lhs == q ** (a[k] - a[k - 1] - 1) * cells


def test_lb_b_first_branch_holds():
    for ell in (2, 3, 4, 5):
        a = tuple(range(1, ell)) + (ell + 3,)
        for q in (2, 3, 5):
            r = by_id(check_inequalities(a, q))["lb_b"]
            assert r.ok and r.rhs == q ** delta(a)


def test_lb_b_documented_failure():
    r = by_id(check_inequalities((2, 4), 2))["lb_b"]
    assert r.status == "fail" and (r.lhs, r.rhs) == (10, 12)
    assert missing_cells((2, 4)) == ((1, 2), (2, 3))


def test_lb_b_failure_characterization():
    # the second branch fails exactly when the first departure from (1, 2, ...) sits at k = l - 1
    seen = 0
    for ell in (2, 3, 4, 5):
        for m in range(ell + 1, 9):
            for a in enumerate_index_tuples(ell, m):
                a = tuple(a)
                if a[-1] != m or is_consecutive(a):
                    continue
                for q in (2, 3, 4, 7):
                    r = by_id(check_inequalities(a, q))
                    assert (r["lb_b"].status == "fail") == lb_b_should_fail(a), (a, q)
                    seen += r["lb_b"].status == "fail"
                    if exceeds(q, ell):
                        for cid in ("ineq_prel", "aux", "ineq_dec_b"):
                            assert r[cid].status == "pass", (cid, a, q)
                    assert r["lb_a"].ok and r["aux_identity"].ok and r["upp"].ok
    assert seen > 0


def exceeds(q, ell):
    return q > q0(ell)


def test_below_q0_is_skipped_with_values():
    r = by_id(check_inequalities((2, 3, 5), 3))
    assert r["ineq_prel"].status == "skipped"
    assert r["ineq_prel"].lhs is not None and "q0(3)" in r["ineq_prel"].note


def test_string_bijections():
    res = check_string_bijections((2, 4), 2)
    assert all(r.ok for r in res)
    ids = {r.check_id for r in res}
    assert {"pivot_identity", "lemcell", "string_fibers", "string_membership"} <= ids
    r = by_id(res)["string_fibers"]
    assert r.status == "pass"


def brute_hyperplanes_containing(F, m, ak):
    """Oracle: (m-1)-subspaces containing V_ak, found as kernels of projective functionals."""
    count = 0
    for h in itertools.product(range(F.q), repeat=m):
        if next((c for c in h if c), None) != 1:
            continue
        if all(h[i] == 0 for i in range(ak)):
            count += 1
    return count


@pytest.mark.parametrize("alpha,q", [((2, 4), 2), ((2, 4), 3), ((1, 3, 5), 2), ((2, 5), 2)])
def test_strict_family(alpha, q):
    res = by_id(check_strict_family(alpha, q))
    assert all(r.ok for r in res.values())
    k = kink_index(alpha)
    fc = res["family_count"]
    assert fc.lhs == fc.rhs == (q ** (alpha[-1] - alpha[k - 1]) - 1) // (q - 1)
    assert fc.lhs == brute_hyperplanes_containing(GF(q), alpha[-1], alpha[k - 1])


def test_strict_family_example_size():
    fc = by_id(check_strict_family((2, 4), 2))["family_count"]
    assert fc.lhs == 3


def test_projective_vectors():
    F = GF(3)
    V = projective_vectors(F, 3)
    assert V.shape == (13, 3)
    assert len({tuple(v) for v in V.tolist()}) == 13
    for v in V.tolist():
        assert next(c for c in v if c) == 1


def test_lemma_dc():
    res = check_hyperplane_lemma_dc((2, 4), 2, draws=20, seed=0)
    assert res and all(r.ok for r in res)
    assert all(r.seed == 0 for r in res if r.seed is not None)


def test_q0_checks():
    r = by_id(check_q0())
    assert r["q0_2"].status == "pass"
    assert r["q0_monotone"].status == "pass"
    assert r["q0_asymptotic"].status == "pass"
    assert r["q0_exact_path"].status == "pass"
    assert r["q0_3_printed"].rhs == 3.14 and abs(r["q0_3_printed"].lhs - 3.414214) < 1e-6


def test_run_checks_sorted_and_deterministic():
    cfg = GridConfig(ells=(2,), m_max=4, qs=(2, 3))
    a = run_grid(cfg)
    b = run_grid(GridConfig(ells=(2,), m_max=4, qs=(2, 3), workers=2))
    assert [r.to_json() for r in a] == [r.to_json() for r in b]
    assert a == sorted(a, key=CheckResult.sort_key)
    ja = json.dumps(report_json(a, cfg), sort_keys=True)
    jb = json.dumps(report_json(b, GridConfig(ells=(2,), m_max=4, qs=(2, 3), workers=2)), sort_keys=True)
    assert ja == jb


def test_small_grid_failures_are_only_lb_b():
    res = run_grid(GridConfig(ells=(2, 3), m_max=5, qs=(2, 3)))
    s = summarize(res)
    assert s["total"] == s["pass"] + s["fail"] + s["skipped"]
    fails = [r for r in res if r.status == "fail"]
    assert fails and {r.check_id for r in fails} == {"lb_b"}
    for r in fails:
        assert lb_b_should_fail(tuple(r.instance["alpha"]))
        assert r.lhs is not None and r.rhs is not None


def test_grid_instances():
    inst = GridConfig(ells=(2,), m_max=4, qs=(2,)).instances()
    assert inst == [((1, 3), 2), ((1, 4), 2), ((2, 4), 2)]
    assert all(not is_consecutive(a) for a, _ in GridConfig().instances())


def test_check_result_line():
    r = by_id(check_inequalities((2, 4), 2))["lb_b"]
    line = r.line()
    assert line.startswith("[FAIL") and "lhs=10 rhs=12" in line
