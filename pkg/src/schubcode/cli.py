"""Command-line front end.

    schubcode params    --alpha 2,4 --q 3
    schubcode enumerate --alpha 2,4 --q 2 [--cells | --strings] [--json out.json]
    schubcode code      --alpha 2,4 --q 3 --minweight [--distribution] [--mwcc]
                        [--assert-paper] [--json out.json] [--csv gen.csv]
    schubcode verify    --grid default | --alpha 2,4 --q 2,3 [--checks count,ineq]
    schubcode mwcc      --alpha 2,4 --q 3

Exit codes: 0 ok, 1 check failure, 2 bad input, 3 cap exceeded, 4 internal error.
JSON output is canonical (sorted keys, fixed indent) and never depends on the
worker count.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field

import numpy as np

from . import code as codemod
from . import verify as vmod
from .combinat import (
    alpha_check,
    alpha_prime,
    delta,
    exceeds_q0,
    is_consecutive,
    nabla,
    parse_alpha,
    point_count,
    profile_json,
    q0,
    reduce_alpha,
)
from .gf import FieldError, field_json, parse_q
from .schubert import (
    CapExceeded,
    cell_offsets,
    minors_array,
    pivots_of_array,
    string_projection_array,
    variety_array,
)

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_CAP, EXIT_INTERNAL = 0, 1, 2, 3, 4


class BadInput(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    alpha: tuple | None = None
    q: int | None = None
    m_input: int | None = None
    point_cap: int | None = None
    scan_cap: int | None = None
    dual_cap: int | None = None
    workers: int = 1
    output: str | None = None
    csv: str | None = None
    format: str = "text"
    seed: int = 0
    force: bool = False
    flags: dict = field(default_factory=dict)


def dump_json(obj, path: str | None):
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _fmt_point(arr) -> str:
    return " | ".join(" ".join(str(int(x)) for x in row) for row in arr)


def _alpha_arg(text: str, m: int | None):
    try:
        a = parse_alpha(text)
    except ValueError as exc:
        raise BadInput(str(exc)) from exc
    if not a:
        raise BadInput("alpha must be nonempty")
    if m is not None and a[-1] > m:
        raise BadInput(f"alpha {tuple(a)} does not fit in m={m}")
    red, orig = reduce_alpha(a, m)
    if orig != red[-1]:
        print(f"note: reducing (alpha={tuple(a)}, m={orig}) to m={red[-1]}", file=sys.stderr)
    return red, orig


# -- commands ---------------------------------------------------------------

def cmd_params(cfg: RunConfig) -> int:
    F = parse_q(cfg.q)
    a = cfg.alpha
    ell = len(a)
    prof = profile_json(a, F.q)
    out = dict(prof)
    out["m_input"] = cfg.m_input
    out["d_claim"] = F.q ** delta(a)
    out["e_claim"] = point_count(a, F.q) - F.q ** delta(a)
    out["consecutive"] = is_consecutive(a)
    out["field"] = field_json(F)
    if ell >= 2:
        out["q0"] = q0(ell)
        out["q_exceeds_q0"] = exceeds_q0(F.q, ell)
    if not is_consecutive(a):
        out["alpha_prime"] = list(alpha_prime(a))
        out["alpha_check"] = list(alpha_check(a))
    if cfg.output:
        dump_json(out, cfg.output)
        if cfg.output == "-":
            return EXIT_OK
    print(f"alpha = {tuple(a)}  l = {ell}  m = {a[-1]}  q = {F.q}")
    print(f"n = {prof['n_alpha']}")
    print(f"k = {prof['k_alpha']}")
    print(f"delta = {prof['delta']}")
    print(f"d_claim = {out['d_claim']}")
    print(f"profile a = {prof['a']}")
    if ell >= 2:
        print(f"q0 = {out['q0']:.6f}  (q > q0: {out['q_exceeds_q0']})")
    return EXIT_OK


def cmd_enumerate(cfg: RunConfig) -> int:
    F = parse_q(cfg.q)
    a = cfg.alpha
    pts, cells = variety_array(a, F, cap=cfg.point_cap, force=cfg.force)
    m = a[-1]
    if cfg.output:
        P = minors_array(pts, F, nabla(a))
        piv = pivots_of_array(pts)
        rows = [{"pivots": [int(x) for x in piv[i]],
                 "rows": pts[i].astype(int).tolist(),
                 "plucker": P[i].astype(int).tolist()} for i in range(pts.shape[0])]
        dump_json({"alpha": list(a), "q": F.q, "field": field_json(F),
                   "plucker_order": [list(b) for b in nabla(a)], "points": rows}, cfg.output)
        if cfg.output == "-":
            return EXIT_OK
    w = sys.stdout.write
    if cfg.flags.get("strings"):
        if is_consecutive(a):
            raise BadInput("strings need a non-consecutive alpha")
        piv = pivots_of_array(pts)
        low = piv[:, -1] < m
        w(f"# Omega_alpha' block alpha'={tuple(alpha_prime(a))} size {int(low.sum())}\n")
        for p in pts[low]:
            w(_fmt_point(p) + "\n")
        groups: dict = {}
        for i in np.flatnonzero(~low):
            lab = tuple(int(x) for x in string_projection_array(pts[i:i + 1], tuple(piv[i]))[0])
            groups.setdefault(lab, []).append(i)
        for lab in sorted(groups):
            w(f"# string nu={lab} size {len(groups[lab])}\n")
            for i in groups[lab]:
                w(_fmt_point(pts[i]) + "\n")
    elif cfg.flags.get("cells"):
        offs = cell_offsets(cells, F.q)
        for b, s, e in zip(cells, offs, offs[1:]):
            w(f"# cell {tuple(b)} dim {delta(b)} count {e - s}\n")
            for p in pts[s:e]:
                w(_fmt_point(p) + "\n")
    else:
        for p in pts:
            w(_fmt_point(p) + "\n")
    return EXIT_OK


def _code_report(cfg: RunConfig, mwcc: bool):
    F = parse_q(cfg.q)
    C = codemod.build_code(cfg.alpha, F, cap=cfg.point_cap, force=cfg.force)
    fl = cfg.flags
    rep = codemod.min_weight(C, distribution=fl.get("distribution", False), workers=cfg.workers,
                             cap=cfg.scan_cap, force=cfg.force)
    if mwcc:
        codemod.mwcc_check(C, rep, dual_cap=cfg.dual_cap, force=cfg.force)
    return C, rep


def _code_json(C, rep, cfg: RunConfig) -> dict:
    out = rep.to_json()
    out["field"] = field_json(C.field)
    out["m_input"] = cfg.m_input
    out["singleton_ok"] = rep.d <= C.n - C.k + 1
    out["case1"] = codemod.case1_check(C, rep)
    return out


def _code_text(C, rep) -> None:
    print(f"alpha = {C.alpha}  q = {C.q}  n = {C.n}  k = {C.k}")
    print(f"d = {rep.d}  e = {rep.e}  q^delta = {rep.q_delta}  minimizers = {len(rep.minimizers)}")
    if rep.distribution is not None:
        print("distribution: " + ", ".join(f"{w}:{c}" for w, c in sorted(rep.distribution.items())))
    if rep.mwcc is not None:
        bad = rep.counterexamples()
        print(f"mwcc: {len(rep.mwcc) - len(bad)}/{len(rep.mwcc)} minimizers Schubert decomposable")
        for v in bad:
            print(f"  COUNTEREXAMPLE coeffs={v['coeffs']} decomposable={v['decomposable']}")
        conv = rep.converse
        print(f"converse: {conv['checked']} Schubert-decomposable functionals, "
              f"{len(conv['failures'])} with weight != q^delta")


def cmd_code(cfg: RunConfig, mwcc: bool | None = None) -> int:
    fl = cfg.flags
    mwcc = fl.get("mwcc", False) if mwcc is None else mwcc
    if not (fl.get("minweight") or fl.get("distribution") or mwcc or cfg.csv):
        fl["minweight"] = True
    if cfg.csv and not (fl.get("minweight") or fl.get("distribution") or mwcc):
        C = codemod.build_code(cfg.alpha, parse_q(cfg.q), cap=cfg.point_cap, force=cfg.force)
        _write_csv(C, cfg.csv)
        return EXIT_OK
    C, rep = _code_report(cfg, mwcc)
    if cfg.csv:
        _write_csv(C, cfg.csv)
    if cfg.output:
        dump_json(_code_json(C, rep, cfg), cfg.output)
    if cfg.output != "-":
        _code_text(C, rep)
    status = EXIT_OK
    if fl.get("assert_paper") and rep.d != rep.q_delta:
        print(f"FAIL: d = {rep.d} != q^delta = {rep.q_delta}", file=sys.stderr)
        status = EXIT_FAIL
    if rep.mwcc is not None and (rep.counterexamples() or rep.converse["failures"]):
        print("FAIL: minimum-weight codeword classification violated", file=sys.stderr)
        status = EXIT_FAIL
    return status


def _write_csv(C, path: str):
    text = C.generator_csv()
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def cmd_verify(cfg: RunConfig) -> int:
    fl = cfg.flags
    checks = tuple(fl.get("checks") or vmod.CHECK_GROUPS)
    unknown = [c for c in checks if c not in vmod.CHECK_GROUPS]
    if unknown:
        raise BadInput(f"unknown checks {unknown}; choose from {', '.join(vmod.CHECK_GROUPS)}")
    gcfg = vmod.GridConfig(checks=checks, seed=cfg.seed, workers=cfg.workers,
                           draws=fl.get("draws", 100))
    if cfg.point_cap is not None:
        gcfg.point_cap = cfg.point_cap
    if cfg.alpha is not None:
        qs = fl.get("qs") or [2]
        results = vmod.run_checks([(tuple(cfg.alpha), q) for q in qs], checks, gcfg)
    else:
        if fl.get("grid", "default") != "default":
            raise BadInput(f"unknown grid {fl.get('grid')!r}")
        results = vmod.run_grid(gcfg)
    if cfg.output:
        dump_json(vmod.report_json(results, gcfg), cfg.output)
    if cfg.output != "-":
        for r in results:
            if r.status == "fail" or fl.get("verbose"):
                print(r.line())
        s = vmod.summarize(results)
        print(f"{s['pass']} passed, {s['fail']} failed, {s['skipped']} skipped")
    return EXIT_FAIL if any(r.status == "fail" for r in results) else EXIT_OK


# -- argument parsing ---------------------------------------------------------

def _qs(text: str) -> list[int]:
    try:
        return [parse_q(t).q for t in text.split(",") if t]
    except FieldError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="schubcode", description="Schubert codes over small finite fields")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, need_alpha=True):
        p.add_argument("--alpha", required=need_alpha, help="comma-separated index tuple, e.g. 2,4")
        p.add_argument("--m", type=int, default=None, help="ambient dimension (reduced to alpha_l)")
        p.add_argument("--json", dest="output", default=None, help="write JSON here ('-' for stdout)")
        p.add_argument("--point-cap", type=int, default=None)
        p.add_argument("--force", action="store_true", help="ignore caps")
        p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("params", help="counts and claims from formulas only")
    common(p)
    p.add_argument("--q", required=True)

    p = sub.add_parser("enumerate", help="list the points of a Schubert variety")
    common(p)
    p.add_argument("--q", required=True)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--cells", action="store_true")
    g.add_argument("--strings", action="store_true")

    for name in ("code", "mwcc"):
        p = sub.add_parser(name, help="build the code and scan weights" if name == "code"
                           else "minimum weight plus codeword classification")
        common(p)
        p.add_argument("--q", required=True)
        p.add_argument("--scan-cap", type=int, default=None)
        p.add_argument("--dual-cap", type=int, default=None)
        p.add_argument("--csv", default=None, help="write the generator matrix as CSV")
        p.add_argument("--distribution", action="store_true")
        p.add_argument("--assert-paper", action="store_true", help="fail unless d = q^delta")
        if name == "code":
            p.add_argument("--minweight", action="store_true")
            p.add_argument("--mwcc", action="store_true")

    p = sub.add_parser("verify", help="run identity and inequality checks")
    common(p, need_alpha=False)
    p.add_argument("--q", type=_qs, default=None, help="comma-separated field sizes")
    p.add_argument("--grid", default=None)
    p.add_argument("--checks", default=None, help=",".join(vmod.CHECK_GROUPS))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--draws", type=int, default=100)
    p.add_argument("-v", "--verbose", action="store_true")
    return ap


def config_from_args(ns) -> RunConfig:
    if getattr(ns, "workers", 1) < 1:
        raise BadInput("--workers must be positive")
    for cap in ("point_cap", "scan_cap", "dual_cap"):
        v = getattr(ns, cap, None)
        if v is not None and v < 1:
            raise BadInput(f"--{cap.replace('_', '-')} must be positive")
    alpha = m_input = None
    if ns.alpha is not None:
        alpha, m_input = _alpha_arg(ns.alpha, ns.m)
    flags = {}
    for key in ("cells", "strings", "minweight", "distribution", "mwcc", "assert_paper",
                "grid", "draws", "verbose"):
        if hasattr(ns, key):
            flags[key] = getattr(ns, key)
    q = ns.q
    if ns.command == "verify":
        flags["qs"] = q
        flags["checks"] = [c for c in ns.checks.split(",") if c] if ns.checks else None
        q = None
        if alpha is None and ns.q is not None:
            raise BadInput("--q needs --alpha for verify; use --grid default for the full grid")
    return RunConfig(
        command=ns.command, alpha=alpha, q=q, m_input=m_input,
        point_cap=ns.point_cap, scan_cap=getattr(ns, "scan_cap", None),
        dual_cap=getattr(ns, "dual_cap", None), workers=ns.workers, output=ns.output,
        csv=getattr(ns, "csv", None), seed=getattr(ns, "seed", 0), force=ns.force, flags=flags,
    )


def run(cfg: RunConfig) -> int:
    if cfg.command == "params":
        return cmd_params(cfg)
    if cfg.command == "enumerate":
        return cmd_enumerate(cfg)
    if cfg.command == "code":
        return cmd_code(cfg)
    if cfg.command == "mwcc":
        cfg.flags["minweight"] = True
        return cmd_code(cfg, mwcc=True)
    if cfg.command == "verify":
        return cmd_verify(cfg)
    raise BadInput(f"unknown command {cfg.command}")


def main(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        return run(config_from_args(ns))
    except CapExceeded as exc:
        print(f"cap exceeded: {exc} (use --force or raise the cap)", file=sys.stderr)
        return EXIT_CAP
    except (BadInput, FieldError, ValueError) as exc:
        print(f"bad input: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except Exception as exc:  # noqa: BLE001
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
