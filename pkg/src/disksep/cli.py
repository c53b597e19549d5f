"""Command-line interface.

Exit codes: 0 success, 1 invalid input, 2 packing did not converge,
3 verification failed.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

from . import formats
from .errors import BelowRecursionBaseError, ConvergenceError, DiskSepError, InvalidInputError
from .graph import Graph, balance_limit, generate_apollonian, size_limit, verify_separator
from .packing import ANGLE_TOL, MAX_ITER, VALIDATION_TOL, compute_packing, validate_packing
from .render import render_svg
from .separator import (
    DERANDOMIZED,
    RANDOMIZED,
    certificate,
    estimate_expected_size,
    normalize,
    select_derandomized,
    select_random,
)

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_CONVERGENCE = 2
EXIT_VERIFY = 3

MODES = {"rand": RANDOMIZED, "derand": DERANDOMIZED}
BENCH_SCHEMA = "# disksep-bench v1"
BENCH_FIELDS = [
    "n", "trial", "seed", "S_derand", "size_limit", "mean_S_rand", "std_S_rand",
    "expected_exact", "sum_rho_sq", "expected_bound", "cs_bound", "theorem_bound",
    "max_component", "balance_limit", "inside", "outside", "valid",
    "pack_seconds", "normalize_seconds", "select_seconds",
]


@dataclass
class RunConfig:
    command: str
    seed: int = 0
    samples: int = 10_000
    tol: float = ANGLE_TOL
    mode: str = DERANDOMIZED
    paths: dict = field(default_factory=dict)

    def validate(self) -> None:
        if self.samples < 1:
            raise InvalidInputError("--samples must be >= 1")
        if not self.tol > 0:
            raise InvalidInputError("--tol must be > 0")


class _Parser(argparse.ArgumentParser):
    # usage errors are input errors, not "non-convergence"
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _emit(text: str, out: str | None) -> None:
    if out:
        formats.write_text(out, text)
    else:
        sys.stdout.write(text)


def cell_seed(seed: int, n: int, trial: int) -> int:
    """Per-(n, trial) seed: ``seed XOR hash(n, trial)``, stable across runs and platforms."""
    h = int.from_bytes(hashlib.blake2b(f"{n}:{trial}".encode(), digest_size=8).digest(), "little")
    return (int(seed) ^ h) & ((1 << 64) - 1)


def cmd_gen(args) -> int:
    t = generate_apollonian(args.n, args.seed)
    _emit(formats.dumps_triangulation(t), args.out)
    return EXIT_OK


def cmd_pack(args) -> int:
    t = formats.read_triangulation(args.input)
    try:
        p = compute_packing(t, args.tol, args.max_iter)
    except ConvergenceError as exc:
        print(f"error: {exc} (max residual {exc.max_residual:.3e})", file=sys.stderr)
        return EXIT_CONVERGENCE
    rep = validate_packing(p, t)
    _emit(formats.dumps_packing(p), args.out)
    if not rep.ok:
        print(f"error: packing failed validation: {rep}", file=sys.stderr)
        return EXIT_VERIFY
    return EXIT_OK


def _report_json(rep, result, cert) -> str:
    doc = {"verify": asdict(rep), "x": result.x, "mode": result.mode}
    if cert is not None:
        doc["certificate"] = {
            "sum_rho_sq": cert.sum_rho_sq,
            "expected_exact": cert.expected_exact,
            "expected_bound": cert.expected_bound,
            "cs_bound": cert.cs_bound,
            "theorem_bound": cert.theorem_bound,
        }
    return json.dumps(doc, sort_keys=True)


def cmd_separate(args) -> int:
    g = formats.read_graph(args.graph)
    p = formats.read_packing(args.packing)
    rep = validate_packing(p, g, args.tol)
    if not rep.ok:
        raise InvalidInputError(
            f"packing does not realize the graph (tangency residual {rep.max_tangency_residual:.3e}, "
            f"separation slack {rep.min_separation_slack:.3e})"
        )
    np_ = normalize(p)
    mode = MODES[args.mode]
    result = select_derandomized(np_) if mode == DERANDOMIZED else select_random(np_, args.seed)
    vrep = verify_separator(g, result)
    _emit(formats.dumps_separator(result), args.out)
    print(_report_json(vrep, result, result.certificate))
    if not vrep.valid or (mode == DERANDOMIZED and not (vrep.size_ok and vrep.balance_ok)):
        return EXIT_VERIFY
    return EXIT_OK


def cmd_verify(args) -> int:
    g = formats.read_graph(args.graph)
    result = formats.read_separator(args.separator)
    vrep = verify_separator(g, result)
    print(_report_json(vrep, result, None))
    return EXIT_OK if vrep.ok else EXIT_VERIFY


def bench_cell(n: int, trial: int, seed: int, samples: int, timings: bool = True) -> dict:
    s = cell_seed(seed, n, trial)
    t = generate_apollonian(n, s)
    t0 = time.perf_counter()
    p = compute_packing(t)
    t1 = time.perf_counter()
    np_ = normalize(p)
    t2 = time.perf_counter()
    res = select_derandomized(np_)
    t3 = time.perf_counter()
    est = estimate_expected_size(np_, samples, s)
    cert = res.certificate or certificate(np_)
    rep = verify_separator(Graph.from_triangulation(t), res)
    fmt = formats.fmt_float
    return {
        "n": n, "trial": trial, "seed": s,
        "S_derand": len(res.S), "size_limit": size_limit(n),
        "mean_S_rand": fmt(est.mean), "std_S_rand": fmt(est.std),
        "expected_exact": fmt(cert.expected_exact), "sum_rho_sq": fmt(cert.sum_rho_sq),
        "expected_bound": fmt(cert.expected_bound), "cs_bound": fmt(cert.cs_bound),
        "theorem_bound": fmt(cert.theorem_bound),
        "max_component": rep.max_component, "balance_limit": balance_limit(n),
        "inside": len(res.inside), "outside": len(res.outside), "valid": int(rep.valid),
        "pack_seconds": f"{t1 - t0:.4f}" if timings else "",
        "normalize_seconds": f"{t2 - t1:.4f}" if timings else "",
        "select_seconds": f"{t3 - t2:.4f}" if timings else "",
    }


def cmd_bench(args) -> int:
    cells = [(n, trial) for n in args.n for trial in range(args.trials)]
    for n, _ in cells:
        if n < 11:
            raise InvalidInputError(f"bench needs n >= 11, got {n}")
    call = [(n, tr, args.seed, args.samples, not args.no_timings) for n, tr in cells]
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            rows = list(pool.map(bench_cell, *zip(*call)))
    else:
        rows = [bench_cell(*c) for c in call]
    buf = io.StringIO()
    buf.write(BENCH_SCHEMA + "\n")
    writer = csv.DictWriter(buf, fieldnames=BENCH_FIELDS, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    _emit(buf.getvalue(), args.out)
    bad = [r for r in rows if r["S_derand"] > r["size_limit"] or not r["valid"]
           or r["max_component"] > r["balance_limit"]]
    return EXIT_VERIFY if bad else EXIT_OK


def cmd_render(args) -> int:
    p = formats.read_packing(args.packing)
    result = formats.read_separator(args.separator) if args.separator else None
    np_ = normalize(p)
    if result is not None:
        ids = sorted((*result.S, *result.inside, *result.outside))
        if ids != list(range(p.n)):
            raise InvalidInputError("separator file does not partition the packing's vertices")
    _emit(render_svg(np_, result), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="disksep", description="Kissing-disk planar separators.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("gen", help="random Apollonian triangulation")
    g.add_argument("n", type=int)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out")
    g.set_defaults(func=cmd_gen)

    pk = sub.add_parser("pack", help="kissing-disk packing of a triangulation")
    pk.add_argument("input")
    pk.add_argument("--tol", type=float, default=ANGLE_TOL, help="angle-sum tolerance (radians)")
    pk.add_argument("--max-iter", type=int, default=MAX_ITER)
    pk.add_argument("--out")
    pk.set_defaults(func=cmd_pack)

    sp = sub.add_parser("separate", help="cutting-circle separator of a packed graph")
    sp.add_argument("graph", help="graph or triangulation file")
    sp.add_argument("packing")
    sp.add_argument("--mode", choices=sorted(MODES), default="derand")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--tol", type=float, default=VALIDATION_TOL, help="packing validation tolerance")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_separate)

    vf = sub.add_parser("verify", help="check a separator file against a graph")
    vf.add_argument("graph")
    vf.add_argument("separator")
    vf.set_defaults(func=cmd_verify)

    bn = sub.add_parser("bench", help="CSV of separator statistics on random instances")
    bn.add_argument("--n", type=int, nargs="+", default=[100, 500, 1000])
    bn.add_argument("--trials", type=int, default=5)
    bn.add_argument("--seed", type=int, default=0)
    bn.add_argument("--samples", type=int, default=10_000)
    bn.add_argument("--jobs", type=int, default=1)
    bn.add_argument("--no-timings", action="store_true", help="blank the runtime columns")
    bn.add_argument("--out")
    bn.set_defaults(func=cmd_bench)

    rd = sub.add_parser("render", help="SVG of the normalized packing and separator")
    rd.add_argument("packing")
    rd.add_argument("separator", nargs="?")
    rd.add_argument("--out")
    rd.set_defaults(func=cmd_render)
    return ap


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        RunConfig(
            command=args.command,
            seed=getattr(args, "seed", 0),
            samples=getattr(args, "samples", 1),
            tol=getattr(args, "tol", ANGLE_TOL),
            mode=MODES.get(getattr(args, "mode", "derand"), DERANDOMIZED),
            paths={k: getattr(args, k) for k in ("input", "graph", "packing", "separator", "out")
                   if getattr(args, k, None)},
        ).validate()
        return args.func(args)
    except BelowRecursionBaseError as exc:
        print(f"error: {exc}; the whole graph is already small", file=sys.stderr)
        return EXIT_INPUT
    except (InvalidInputError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except DiskSepError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def main() -> None:
    sys.exit(run())
