"""Minimum distance and minimum-weight codeword classification over a grid.

For each (alpha, q) with a feasible scan, prints n, k, d, q^delta and, when
requested, how many minimizers are Schubert decomposable and whether every
Schubert-decomposable functional has minimum weight.
"""

import argparse
import time

from schubcode.code import build_code, min_weight, mwcc_check
from schubcode.combinat import delta, enumerate_index_tuples, exceeds_q0, is_consecutive, k_alpha
from schubcode.gf import GF


def main():
    ap = argparse.ArgumentParser(description="d and MWCC survey")
    ap.add_argument("--ells", default="2,3")
    ap.add_argument("--m-max", type=int, default=6)
    ap.add_argument("--qs", default="2,3")
    ap.add_argument("--scan-limit", type=int, default=10**6)
    ap.add_argument("--mwcc", action="store_true")
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()

    hdr = f"{'alpha':14s} {'q':>2s} {'n':>6s} {'k':>3s} {'d':>5s} {'q^d':>5s}"
    if args.mwcc:
        hdr += f" {'#min':>5s} {'sdec':>5s} {'conv':>9s} {'q>q0':>5s}"
    print(hdr)
    bad = 0
    t0 = time.perf_counter()
    for ell in (int(x) for x in args.ells.split(",")):
        for m in range(ell + 1, args.m_max + 1):
            for a in enumerate_index_tuples(ell, m):
                a = tuple(a)
                if a[-1] != m or is_consecutive(a):
                    continue
                for q in (int(x) for x in args.qs.split(",")):
                    if (q ** k_alpha(a) - 1) // (q - 1) > args.scan_limit:
                        continue
                    C = build_code(a, GF(q))
                    rep = min_weight(C, workers=args.workers)
                    bad += rep.d != q ** delta(a)
                    line = f"{str(a):14s} {q:2d} {C.n:6d} {C.k:3d} {rep.d:5d} {q ** delta(a):5d}"
                    if args.mwcc:
                        mwcc_check(C, rep)
                        sd = sum(v["schubert_decomposable"] for v in rep.mwcc)
                        conv = f"{rep.converse['checked'] - len(rep.converse['failures'])}/{rep.converse['checked']}"
                        line += f" {len(rep.minimizers):5d} {sd:5d} {conv:>9s} {str(exceeds_q0(q, ell)):>5s}"
                    print(line)
    print(f"\n{bad} instances with d != q^delta  ({time.perf_counter() - t0:.1f}s)")


if __name__ == "__main__":
    main()
