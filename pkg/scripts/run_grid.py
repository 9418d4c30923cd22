"""Run the verification grid and write a JSON report.

    python3 scripts/run_grid.py --out results/grid.json --qs 2,3,4 --m-max 6
"""

import argparse
import json
import time
from dataclasses import asdict

from schubcode.verify import CHECK_GROUPS, GridConfig, report_json, run_grid, summarize


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--ells", default="2,3")
    ap.add_argument("--m-max", type=int, default=6)
    ap.add_argument("--qs", default="2,3,4")
    ap.add_argument("--checks", default=",".join(CHECK_GROUPS))
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", default=None)
    args = ap.parse_args()

    cfg = GridConfig(
        ells=tuple(int(x) for x in args.ells.split(",")),
        m_max=args.m_max,
        qs=tuple(int(x) for x in args.qs.split(",")),
        checks=tuple(args.checks.split(",")),
        workers=args.workers,
        seed=args.seed,
    )
    t0 = time.perf_counter()
    res = run_grid(cfg)
    dt = time.perf_counter() - t0

    by_check: dict = {}
    for r in res:
        c = by_check.setdefault(r.check_id, {"pass": 0, "fail": 0, "skipped": 0})
        c[r.status] += 1
    print(f"{'check':24s} {'pass':>6s} {'fail':>6s} {'skip':>6s}")
    for cid, c in sorted(by_check.items()):
        print(f"{cid:24s} {c['pass']:6d} {c['fail']:6d} {c['skipped']:6d}")
    s = summarize(res)
    print(f"\n{s['pass']} passed, {s['fail']} failed, {s['skipped']} skipped in {dt:.1f}s")
    for r in res:
        if r.status == "fail":
            print(r.line())
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(report_json(res, cfg), fh, indent=2, sort_keys=True)
            fh.write("\n")


if __name__ == "__main__":
    main()
