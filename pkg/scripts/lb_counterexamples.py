"""Census of instances where the two-term lower bound on the missing-cell sum fails.

The sum is q^(alpha_{k+1} - alpha_k - 1) * (|Omega_alpha| - q^(l-k) |Omega_alpha'|),
which equals the same power of q times the sum of q^delta over missing cells.
For alpha != (1, ..., l-1, m) the claimed bound is q^delta(alpha) + q^delta(alpha').
The script tabulates failures and checks them against the predicate
"first departure from (1, 2, ...) at position k = l - 1".
"""

import argparse

from schubcode.combinat import (
    alpha_prime,
    delta,
    enumerate_index_tuples,
    is_consecutive,
    kink_index,
    missing_cells,
    point_count,
)


def first_departure(alpha):
    return next(j for j, a in enumerate(alpha, 1) if a > j)


def main():
    ap = argparse.ArgumentParser(description="lower-bound counterexample census")
    ap.add_argument("--l-max", type=int, default=6)
    ap.add_argument("--m-max", type=int, default=10)
    ap.add_argument("--qs", default="2,3,4,5,7,8,9")
    ap.add_argument("--show", type=int, default=12)
    args = ap.parse_args()
    qs = [int(x) for x in args.qs.split(",")]

    total = fails = mismatch = 0
    shown = 0
    for ell in range(2, args.l_max + 1):
        for m in range(ell + 1, args.m_max + 1):
            for a in enumerate_index_tuples(ell, m):
                a = tuple(a)
                if a[-1] != m or is_consecutive(a):
                    continue
                k = kink_index(a)
                alpha0 = tuple(range(1, ell)) + (m,)
                predicted = first_departure(a) == k == ell - 1 and a != alpha0
                for q in qs:
                    gap = a[k] - a[k - 1] - 1
                    lhs = q**gap * (point_count(a, q) - q ** (ell - k) * point_count(alpha_prime(a), q))
                    assert lhs == q**gap * sum(q ** delta(g) for g in missing_cells(a))
                    rhs = q ** delta(a) if a == alpha0 else q ** delta(a) + q ** delta(alpha_prime(a))
                    total += 1
                    failed = lhs < rhs
                    fails += failed
                    mismatch += failed != predicted
                    if failed and shown < args.show:
                        cells = [tuple(g) for g in missing_cells(a)]
                        print(f"alpha={a} q={q}: lhs={lhs} rhs={rhs} missing cells {cells}")
                        shown += 1
    print(f"\n{fails} of {total} instances fail; {mismatch} disagree with the predicate")


if __name__ == "__main__":
    main()
