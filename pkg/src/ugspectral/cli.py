"""Command line interface.

Subcommands: gen, solve, oracle, spectrum, diagnose, kv-spectrum.  Reports
are single JSON objects on stdout with an embedded run manifest; logs go to
stderr.  Exit codes: 0 success, 1 usage/contract error, 2 numeric or
budget error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import subprocess
import sys
import time

import numpy as np

from . import generators, maxlin, oracle, recover
from .config import numeric_config
from .core import (
    UGError,
    load_instance,
    save_instance,
    serialize_instance,
    value,
)
from .label_extended import build_label_extended, build_laplacian
from .linalg import NumericError, eigendecompose
from .oracle import BudgetExceededError
from .recover import (
    DegenerateSpectrumError,
    DimensionAbortError,
    NetTooLargeError,
    SolveParams,
)

NUMERIC_ERRORS = (
    NetTooLargeError,
    BudgetExceededError,
    DimensionAbortError,
    DegenerateSpectrumError,
    NumericError,
)


def _git_describe():
    try:
        out = subprocess.run(
            ["git", "describe", "--always", "--dirty"],
            capture_output=True, text=True, timeout=5,
        )
        return out.stdout.strip() if out.returncode == 0 else ""
    except Exception:
        return ""


def _file_hash(path):
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        h.update(fh.read())
    return h.hexdigest()


def make_manifest(args, input_path=None, seed=None, t0=None):
    return {
        "command_line": sys.argv[1:] if sys.argv[0] else list(sys.argv),
        "input_hash": _file_hash(input_path) if input_path else None,
        "seed": seed,
        "numeric_config": numeric_config().to_dict(),
        "git_describe": _git_describe(),
        "wall_clock_s": time.perf_counter() - t0 if t0 is not None else None,
    }


def _emit(report: dict):
    json.dump(report, sys.stdout, indent=2)
    sys.stdout.write("\n")


def _parse_labels(text):
    return np.array([int(x) for x in text.replace(",", " ").split()], dtype=np.int64)


def cmd_gen(args, t0):
    if args.kind == "kv":
        spec = generators.KVSpec(args.kappa, args.eps)
        inst = generators.kv_instance(spec)
        planted = None
    elif args.kind == "regular":
        edges, lam2 = generators.random_regular_graph(args.n, args.d, seed=args.seed)
        from .core import Permutation, UGEdge, UGInstance

        inst = UGInstance.create(
            args.n, 1, [UGEdge(u, v, 1.0, Permutation.identity(1)) for u, v in edges]
        )
        print(f"second adjacency eigenvalue: {lam2:.6f}", file=sys.stderr)
        planted = None
    else:  # planted
        inst, planted, lam2 = generators.planted_regular_instance(
            args.n, args.d, args.k, seed=args.seed, constraint_family=args.family
        )
        print(f"second adjacency eigenvalue: {lam2:.6f}", file=sys.stderr)
        if args.perturb > 0:
            family = "maxlin" if args.family == "maxlin" else "general-permutation"
            inst = generators.perturb(
                inst, planted, args.perturb, seed=args.seed + 17, constraint_family=family
            )
    if args.out:
        save_instance(inst, args.out)
    else:
        sys.stdout.write(serialize_instance(inst))
    if planted is not None and args.planted_out:
        with open(args.planted_out, "w", encoding="utf-8") as fh:
            fh.write(",".join(str(int(x)) for x in planted) + "\n")
    return 0


def cmd_solve(args, t0):
    inst = load_instance(args.file)
    if args.maxlin:
        ml = maxlin.MaxLinInstance.from_instance(inst)
        params = maxlin.MaxLinParams(
            epsilon=args.epsilon,
            gamma=args.gamma,
            theta=args.theta,
            uniformity_C=args.uniformity_c,
            max_dim=args.max_dim,
            net_step_override=args.net_step,
            yes_constant=args.yes_constant,
        )
        report = maxlin.solve_maxlin(ml, params)
    else:
        params = SolveParams(
            epsilon=args.epsilon,
            gamma=args.gamma,
            max_dim=args.max_dim,
            mode=args.mode,
            net_step_override=args.net_step,
            yes_constant=args.yes_constant,
        )
        report = recover.recover_solution(inst, params)
    out = report.to_dict()
    out["manifest"] = make_manifest(args, input_path=args.file, seed=args.seed, t0=t0)
    _emit(out)
    return 0


def cmd_oracle(args, t0):
    inst = load_instance(args.file)
    res = oracle.brute_force(inst, budget=args.budget)
    out = res.to_dict()
    out["manifest"] = make_manifest(args, input_path=args.file, t0=t0)
    _emit(out)
    return 0


def cmd_spectrum(args, t0):
    inst = load_instance(args.file)
    lem = build_laplacian(inst) if args.laplacian else build_label_extended(inst)
    vals, _ = eigendecompose(lem.matrix)
    for i, lam in enumerate(vals):
        sys.stdout.write(f"{i} {format(lam, '.17g')}\n")
    return 0


def cmd_diagnose(args, t0):
    inst = load_instance(args.file)
    if args.planted_file:
        with open(args.planted_file, "r", encoding="utf-8") as fh:
            planted = _parse_labels(fh.read())
    elif args.planted:
        planted = _parse_labels(args.planted)
    else:
        raise UGError("diagnose needs --planted or --planted-file")

    if args.maxlin:
        if not args.completion:
            raise UGError("--maxlin diagnosis needs --completion <file>")
        ml = maxlin.MaxLinInstance.from_instance(inst)
        comp = maxlin.MaxLinInstance.from_instance(load_instance(args.completion))
        M = build_label_extended(inst)
        vals, vecs = eigendecompose(M.matrix)
        rep = maxlin.sin_theta_report(ml, comp, vecs[:, 0], args.gamma)
        out = rep.to_dict()
    else:
        params = SolveParams(
            epsilon=args.epsilon, gamma=args.gamma, mode=args.mode, max_dim=10**9
        )
        alpha, beta = recover.closeness_diagnostic(inst, planted, params)
        out = {
            "alpha": alpha,
            "beta": beta,
            "beta_bound": float(np.sqrt(2 * args.epsilon / args.gamma)),
            "planted_value": value(inst, planted),
        }
    out["manifest"] = make_manifest(args, input_path=args.file, t0=t0)
    _emit(out)
    return 0


def cmd_kv_spectrum(args, t0):
    kappa = int(np.log2(args.n))
    if 2**kappa != args.n:
        raise UGError("--n must be a power of two")
    spec = generators.KVSpec(kappa, args.eps)
    for lam, mult in generators.kv_spectrum(spec):
        sys.stdout.write(f"{format(lam, '.17g')} {mult}\n")
    return 0


def build_parser():
    p = argparse.ArgumentParser(prog="ugspectral")
    sub = p.add_subparsers(dest="cmd", required=True)

    g = sub.add_parser("gen", help="generate instances")
    gs = g.add_subparsers(dest="kind", required=True)
    gp = gs.add_parser("planted")
    gp.add_argument("--n", type=int, required=True)
    gp.add_argument("--d", type=int, required=True)
    gp.add_argument("--k", type=int, required=True)
    gp.add_argument("--family", choices=["general-permutation", "maxlin"],
                    default="general-permutation")
    gp.add_argument("--perturb", type=float, default=0.0)
    gp.add_argument("--seed", type=int, default=0)
    gp.add_argument("--out")
    gp.add_argument("--planted-out")
    gk = gs.add_parser("kv")
    gk.add_argument("--kappa", type=int, required=True)
    gk.add_argument("--eps", type=float, required=True)
    gk.add_argument("--out")
    gk.add_argument("--planted-out")
    gr = gs.add_parser("regular")
    gr.add_argument("--n", type=int, required=True)
    gr.add_argument("--d", type=int, required=True)
    gr.add_argument("--seed", type=int, default=0)
    gr.add_argument("--out")
    gr.add_argument("--planted-out")
    g.set_defaults(func=cmd_gen)

    s = sub.add_parser("solve", help="run the spectral solver")
    s.add_argument("file")
    s.add_argument("--epsilon", type=float, required=True)
    s.add_argument("--gamma", type=float, required=True)
    s.add_argument("--mode", choices=["adjacency", "laplacian"], default="adjacency")
    s.add_argument("--max-dim", type=int, default=8)
    s.add_argument("--net-step", type=float, default=None)
    s.add_argument("--yes-constant", type=float, default=10.0)
    s.add_argument("--threads", type=int, default=1)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--maxlin", action="store_true")
    s.add_argument("--theta", type=float, default=None)
    s.add_argument("--uniformity-c", type=float, default=2.0)
    s.set_defaults(func=cmd_solve)

    o = sub.add_parser("oracle", help="exact brute-force optimum")
    o.add_argument("file")
    o.add_argument("--budget", type=int, default=None)
    o.set_defaults(func=cmd_oracle)

    sp = sub.add_parser("spectrum", help="dump the label-extended spectrum")
    sp.add_argument("file")
    sp.add_argument("--laplacian", action="store_true")
    sp.set_defaults(func=cmd_spectrum)

    d = sub.add_parser("diagnose", help="closeness / perturbation diagnostics")
    d.add_argument("file")
    d.add_argument("--epsilon", type=float, default=0.01)
    d.add_argument("--gamma", type=float, default=0.5)
    d.add_argument("--mode", choices=["adjacency", "laplacian"], default="adjacency")
    d.add_argument("--planted")
    d.add_argument("--planted-file")
    d.add_argument("--maxlin", action="store_true")
    d.add_argument("--completion")
    d.set_defaults(func=cmd_diagnose)

    kv = sub.add_parser("kv-spectrum", help="closed-form KV spectrum table")
    kv.add_argument("--n", type=int, required=True)
    kv.add_argument("--eps", type=float, required=True)
    kv.set_defaults(func=cmd_kv_spectrum)

    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code not in (0, None) else 0
    t0 = time.perf_counter()
    try:
        return args.func(args, t0)
    except NUMERIC_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except UGError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
