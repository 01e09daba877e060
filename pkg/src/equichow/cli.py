"""Command-line front end: ``equichow {replay,invariants,eval,ring-check,selftest}``.

Exit status is 0 when every report passes (or is reported-only), 1 when an
assertion or golden comparison fails, and 2 on usage, parse or domain errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import List, Optional, Sequence

from . import __version__
from .errors import EquichowError
from .ledger import inv_Hg, poincare_series, table_to_csv, table_to_json
from .parser import parse_expr
from .replay import LEMMAS, LemmaReport
from .ring import parse_ring_dsl

EXIT_OK, EXIT_FAIL, EXIT_ERROR = 0, 1, 2
GOLDEN_ENV = "EQUICHOW_GOLDEN"


@dataclass
class RunConfig:
    command: str
    ns: Sequence[int] = ()
    gs: Sequence[int] = ()
    p: int = 2
    fmt: str = "text"
    golden: Optional[str] = None
    bless: bool = False
    plot: Optional[str] = None
    jobs: int = 1
    verbose: bool = False


def parse_range(text: str) -> List[int]:
    """``"3..6"``, ``"3,5,9"`` or ``"4"`` into a sorted, non-empty list."""
    out = set()
    for part in text.split(","):
        part = part.strip()
        if ".." in part:
            lo, hi = part.split("..", 1)
            lo, hi = int(lo), int(hi)
            if lo > hi:
                raise argparse.ArgumentTypeError(f"empty range {part!r}")
            out.update(range(lo, hi + 1))
        elif part:
            out.add(int(part))
    if not out:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return sorted(out)


def _range_arg(text):
    try:
        return parse_range(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"invalid range {text!r}: {e}")


def _golden_dir(cfg: RunConfig) -> Optional[str]:
    return os.environ.get(GOLDEN_ENV) or cfg.golden


# -- rendering ---------------------------------------------------------------

def _params(r: LemmaReport) -> str:
    return " ".join(f"{k}={v}" for k, v in r.params.items())


def render_text(r: LemmaReport, verbose: bool = False) -> str:
    d = r.to_dict()
    lines = [f"[{d['status']}] {d['lemma']} {_params(r)}".rstrip()]
    lines.append(f"  result:   {d['result']}")
    lines.append(f"  expected: {d['expected']}")
    if verbose:
        for k, v in d["intermediates"].items():
            lines.append(f"  {k}: {v}")
    for c in d["checks"]:
        if verbose or not c["ok"]:
            lines.append(f"  {'ok  ' if c['ok'] else 'FAIL'} {c['name']}")
    for note in d["notes"]:
        lines.append(f"  note: {note}")
    if d["status"] == "reported-only":
        lines.append("  NOTE: reported-only value; it is not asserted and does not fail the run")
    return "\n".join(lines)


def render_csv(reports: List[LemmaReport]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(("lemma", "n", "p", "status", "result", "expected"))
    for r in reports:
        d = r.to_dict()
        w.writerow((d["lemma"], r.params.get("n", ""), r.params.get("p", ""), d["status"],
                    d["result"], d["expected"]))
    return buf.getvalue()


def golden_name(r: LemmaReport) -> str:
    parts = [r.lemma] + [f"{k}{v}" for k, v in r.params.items()]
    return "_".join(parts) + ".txt"


def check_golden(reports: List[LemmaReport], directory: str, bless: bool, out) -> bool:
    ok = True
    for r in reports:
        path = os.path.join(directory, golden_name(r))
        text = render_text(r, verbose=True) + "\n"
        if bless:
            os.makedirs(directory, exist_ok=True)
            with open(path, "w") as fh:
                fh.write(text)
            continue
        if not os.path.exists(path):
            print(f"golden missing: {path} (rerun with --bless)", file=out)
            ok = False
            continue
        with open(path) as fh:
            if fh.read() != text:
                print(f"golden mismatch: {path}", file=out)
                ok = False
    return ok


# -- commands ----------------------------------------------------------------

def _run_one(args):
    lemma, n, p = args
    return LEMMAS[lemma](n, p)


def _class_size(r: LemmaReport) -> int:
    for key in ("xi0", "integral", "D''"):
        v = r.intermediates.get(key)
        if v is not None and hasattr(v, "value"):
            return len(v.value)
    return len(r.result.value) if hasattr(r.result, "value") else 0


def cmd_replay(cfg: RunConfig, lemma: str, out=sys.stdout) -> int:
    ns = [None] if lemma == "E_blowup" else list(cfg.ns)
    work = [(lemma, n, cfg.p) for n in ns]
    if cfg.jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            reports = list(pool.map(_run_one, work))
    else:
        reports = [_run_one(w) for w in work]

    if cfg.fmt == "json":
        for r in reports:
            print(r.to_json(), file=out)
    elif cfg.fmt == "csv":
        out.write(render_csv(reports))
    else:
        for r in reports:
            print(render_text(r, cfg.verbose), file=out)

    ok = all(r.ok for r in reports)
    golden = _golden_dir(cfg)
    if golden:
        ok = check_golden(reports, golden, cfg.bless, sys.stderr) and ok
    if cfg.plot and lemma != "E_blowup":
        from .plotting import plot_sweep
        path = plot_sweep(lemma, ns, [_class_size(r) for r in reports], [r.status for r in reports],
                          os.path.join(cfg.plot, f"sweep_{lemma}_p{cfg.p}.png"))
        print(f"figure: {path}", file=sys.stderr)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_invariants(cfg: RunConfig, out=sys.stdout) -> int:
    tables = {}
    for g in cfg.gs:
        t = inv_Hg(g, cfg.p)
        tables[f"g={g}"] = t
        if cfg.fmt == "json":
            print(table_to_json(t, g=g), file=out)
        elif cfg.fmt == "csv":
            out.write(f"# g={g}\n")
            out.write(table_to_csv(t))
        else:
            print(f"g={g} p={cfg.p}: {t}", file=out)
            print(f"  poincare: {poincare_series(t)}", file=out)
            print(f"  size: {t.size()} (without 1: {t.size(include_identity=False)})", file=out)
    if cfg.plot:
        from .plotting import plot_poincare
        path = plot_poincare(tables, os.path.join(cfg.plot, f"poincare_p{cfg.p}.png"))
        print(f"figure: {path}", file=sys.stderr)
    return EXIT_OK


def _read(path):
    with open(path) as fh:
        return fh.read()


def cmd_eval(ring_file: str, expr: str, out=sys.stdout) -> int:
    ring = parse_ring_dsl(_read(ring_file))
    poly = parse_expr(expr, ring.table, ring.domain)
    print(ring.normal_form(poly), file=out)
    return EXIT_OK


def cmd_ring_check(ring_file: str, out=sys.stdout) -> int:
    ring = parse_ring_dsl(_read(ring_file))
    out.write(ring.to_dsl())
    return EXIT_OK


def cmd_selftest(out=sys.stdout) -> int:
    from .replay import key_lemma_audit
    failures = 0
    for n in range(3, 7):
        r = key_lemma_audit(n)
        print(f"[{r.status}] key_audit n={n}", file=out)
        failures += not r.ok
    neg = key_lemma_audit(3, perturb="D1_zero")
    print(f"[{'pass' if not neg.ok else 'fail'}] negative control rejected", file=out)
    failures += neg.ok
    t = inv_Hg(3, 2)
    good = poincare_series(t) == [1, 1, 2, 1, 1, 1]
    print(f"[{'pass' if good else 'fail'}] invariants g=3 p=2", file=out)
    failures += not good
    return EXIT_OK if failures == 0 else EXIT_FAIL


# -- entry point -------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="equichow", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"equichow {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", dest="fmt", choices=("text", "json", "csv"), default="text")
    common.add_argument("--plot", metavar="DIR", help="write figures into DIR")
    common.add_argument("-v", "--verbose", action="store_true")

    rp = sub.add_parser("replay", parents=[common], help="replay a cycle-class computation")
    rp.add_argument("--lemma", required=True, choices=sorted(LEMMAS))
    rp.add_argument("--n", type=_range_arg, default=[3], help="n or range such as 3..12")
    rp.add_argument("--p", type=int, default=2, help="0 or a prime")
    rp.add_argument("--golden", metavar="DIR", help=f"compare against golden files (env {GOLDEN_ENV} wins)")
    rp.add_argument("--bless", action="store_true", help="rewrite golden files instead of comparing")
    rp.add_argument("--jobs", type=int, default=1)

    iv = sub.add_parser("invariants", parents=[common], help="invariant tables and Poincare series")
    iv.add_argument("--g", type=_range_arg, required=True)
    iv.add_argument("--p", type=int, default=2)

    ev = sub.add_parser("eval", help="normal form of an expression in a ring file")
    ev.add_argument("ring_file")
    ev.add_argument("expr")

    rc = sub.add_parser("ring-check", help="validate a ring file and print its canonical form")
    rc.add_argument("ring_file")

    sub.add_parser("selftest", help="quick end-to-end check")
    return ap


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        if args.command == "replay":
            cfg = RunConfig("replay", ns=args.n, p=args.p, fmt=args.fmt, golden=args.golden,
                            bless=args.bless, plot=args.plot, jobs=args.jobs, verbose=args.verbose)
            return cmd_replay(cfg, args.lemma, out)
        if args.command == "invariants":
            cfg = RunConfig("invariants", gs=args.g, p=args.p, fmt=args.fmt, plot=args.plot)
            return cmd_invariants(cfg, out)
        if args.command == "eval":
            return cmd_eval(args.ring_file, args.expr, out)
        if args.command == "ring-check":
            return cmd_ring_check(args.ring_file, out)
        return cmd_selftest(out)
    except (EquichowError, OSError) as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_ERROR


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
