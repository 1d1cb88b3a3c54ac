"""Command-line front end.

Exit codes: 0 success, 1 usage or file error, 2 synthesis did not reach the target.
"""
from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import _backend
from .gatelib import GATE_HELP, custom_gate, gate_matrix, parse_gate, read_matrix_file
from .holonomy import HolonomyConfig, holonomy
from .loops import LoopFormatError, atomic_write_text, export_path, load_loop, save_loop
from .matcore import MatrixError, frob_dist, unitarity_defect
from .model import System
from .optimizer import SynthesisConfig, landscape_section, section_axes, synthesize
from .verify import run_checks

EXIT_OK, EXIT_USAGE, EXIT_NOT_CONVERGED = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def format_complex(z: complex) -> str:
    # 12 significant digits; adding 0.0 turns -0.0 into +0.0
    return f"{z.real + 0.0:+.11e}{z.imag + 0.0:+.11e}i"


def format_matrix(m: np.ndarray) -> str:
    return "\n".join("  ".join(format_complex(z) for z in row) for row in m)


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def _cmd_evaluate(args) -> int:
    loop = load_loop(args.loop)
    cfg = HolonomyConfig(args.steps, args.rule)
    u = holonomy(loop, cfg=cfg)
    print(f"system: {loop.system.value}  k: {loop.k}  steps/edge: {cfg.steps_per_edge}  rule: {cfg.rule}")
    print(format_matrix(u))
    print(f"unitarity defect: {unitarity_defect(u):.3e}")
    gate = loop.metadata.get("gate")
    if gate and gate != "custom":
        try:
            spec = parse_gate(gate, loop.system)
        except ValueError:
            return EXIT_OK
        print(f"f vs {gate}: {float(frob_dist(gate_matrix(spec), u))!r}")
    return EXIT_OK


def _target_from_args(args, system):
    if (args.gate is None) == (args.matrix is None):
        raise UsageError("give exactly one of --gate or --matrix")
    if args.gate is not None:
        return parse_gate(args.gate, system)
    return custom_gate(read_matrix_file(args.matrix), system)


def _cmd_synthesize(args) -> int:
    target = _target_from_args(args, args.system)
    cfg = SynthesisConfig(
        k=args.k,
        system=target.system,
        steps_per_edge=args.steps,
        rule=args.rule,
        target_f=args.target_f,
        max_restarts=args.restarts,
        max_iterations_per_start=args.max_iter,
        seed=args.seed,
        workers=args.workers,
        batch_size=args.batch,
        max_refinement_gap=None if args.max_gap < 0 else args.max_gap,
    )

    def report(out):
        if args.verbose:
            gap = "" if out.refined is None else f", refinement gap {out.gap:.1e}"
            print(f"restart {out.index}: f = {out.fun:.3e} ({out.evaluations} evaluations{gap})", file=sys.stderr)

    result = synthesize(target, cfg, progress=report)
    save_loop(result.loop, args.out)
    print(json.dumps({"gate": target.label, "out": str(args.out), **result.summary()}, indent=2))
    return EXIT_OK if result.converged else EXIT_NOT_CONVERGED


def _cmd_verify(args) -> int:
    checks = run_checks(args.steps, args.rule, args.seed)
    width = max(len(c.name) for c in checks)
    for c in checks:
        print(f"{'PASS' if c.passed else 'FAIL'}  {c.name:<{width}}  {c.value:.3e} <= {c.tol:.0e}")
    failed = sum(not c.passed for c in checks)
    print(f"{len(checks) - failed}/{len(checks)} checks passed (backend: {_backend.BACKEND})")
    return EXIT_OK if failed == 0 else EXIT_USAGE


def _cmd_export_path(args) -> int:
    loop = load_loop(args.loop)
    export_path(loop, args.out, args.steps)
    print(f"wrote {args.steps * loop.n_edges} rows to {args.out}")
    return EXIT_OK


def _cmd_gates(args) -> int:
    for name, text in GATE_HELP.items():
        print(f"{name:<14} {text}")
    print("custom         --matrix FILE: re im pairs, row-major")
    return EXIT_OK


def _cmd_landscape(args) -> int:
    a, b = load_loop(args.min1), load_loop(args.min2)
    if a.system is not b.system or a.k != b.k:
        raise UsageError(f"minima differ in shape: {a.system.value} k={a.k} vs {b.system.value} k={b.k}")
    target = parse_gate(args.gate, a.system)
    cfg = SynthesisConfig(k=a.k, system=a.system, steps_per_edge=args.steps)
    origin, axis1, axis2 = section_axes(a.flat(), b.flat(), args.seed)
    s, t, values = landscape_section(target, cfg, origin, axis1, axis2, args.grid, args.span)
    rows = ["s\tt\tf"]
    rows += [f"{float(si)!r}\t{float(tj)!r}\t{float(values[i, j])!r}" for i, si in enumerate(s) for j, tj in enumerate(t)]
    atomic_write_text(args.out, "\n".join(rows) + "\n")
    print(f"wrote {args.grid}x{args.grid} section to {args.out}; min {values.min():.3e}, max {values.max():.3e}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="holoqc", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    ev = sub.add_parser("evaluate", help="print the holonomy of a loop file")
    ev.add_argument("--loop", required=True)
    ev.add_argument("--steps", type=_positive_int, default=200)
    ev.add_argument("--rule", choices=["midpoint", "left"], default="midpoint")
    ev.set_defaults(func=_cmd_evaluate)

    sy = sub.add_parser("synthesize", help="search for a loop realizing a gate")
    sy.add_argument("--gate")
    sy.add_argument("--matrix")
    sy.add_argument("--k", type=_positive_int, default=3)
    sy.add_argument("--system", choices=["one", "two"], default=None)
    sy.add_argument("--seed", type=int, default=0)
    sy.add_argument("--restarts", type=_positive_int, default=None)
    sy.add_argument("--target-f", type=float, default=1e-8)
    sy.add_argument("--steps", type=_positive_int, default=200)
    sy.add_argument("--rule", choices=["midpoint", "left"], default="midpoint")
    sy.add_argument("--max-iter", type=_positive_int, default=200_000, help="Nelder-Mead iterations per start")
    sy.add_argument("--workers", type=_positive_int, default=1)
    sy.add_argument("--batch", type=_positive_int, default=1, help="restarts per round")
    sy.add_argument(
        "--max-gap",
        type=float,
        default=1e-4,
        help="reject optima whose objective moves by more than this at 4x steps (negative: off)",
    )
    sy.add_argument("--out", required=True)
    sy.add_argument("-v", "--verbose", action="store_true")
    sy.set_defaults(func=_cmd_synthesize)

    ve = sub.add_parser("verify", help="run the closed-form check suite")
    ve.add_argument("--steps", type=_positive_int, default=200)
    ve.add_argument("--rule", choices=["midpoint", "left"], default="midpoint")
    ve.add_argument("--seed", type=int, default=2024)
    ve.set_defaults(func=_cmd_verify)

    ex = sub.add_parser("export-path", help="write the discretized loop as a table")
    ex.add_argument("--loop", required=True)
    ex.add_argument("--steps", type=_positive_int, default=200)
    ex.add_argument("--out", required=True)
    ex.set_defaults(func=_cmd_export_path)

    ga = sub.add_parser("gates", help="list gate names")
    ga.set_defaults(func=_cmd_gates)

    la = sub.add_parser("landscape", help="objective on a 2-D section through two minima")
    la.add_argument("--gate", required=True)
    la.add_argument("--min1", required=True)
    la.add_argument("--min2", required=True)
    la.add_argument("--grid", type=_positive_int, default=41)
    la.add_argument("--span", type=float, default=1.0)
    la.add_argument("--seed", type=int, default=0)
    la.add_argument("--steps", type=_positive_int, default=200)
    la.add_argument("--out", required=True)
    la.set_defaults(func=_cmd_landscape)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, LoopFormatError, MatrixError, ValueError, OSError) as exc:
        print(f"holoqc {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
