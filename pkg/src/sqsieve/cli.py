"""Command-line front end: one subcommand per experiment.

Exit status: 0 on success, 1 when a checked invariant fails, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import math
import sys
from fractions import Fraction
from typing import Callable

import numpy as np

from . import __version__, analysis, bounds, congruence, expsum, farey, gauss
from .arith import omega
from .parallel import default_threads
from .report import render

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class Outcome:
    """Rows plus meta for one subcommand run; ok=False maps to exit 1."""

    def __init__(self, rows, meta=None, ok: bool = True, summary: str = ""):
        self.rows = list(rows)
        self.meta = dict(meta or {})
        self.ok = ok
        self.summary = summary


def _floats(s: str) -> float:
    return float(Fraction(s)) if "/" in s else float(s)


# ---------------------------------------------------------------- subcommands


def cmd_farey(args) -> Outcome:
    q0 = args.q0
    if args.list:
        rows = [{"q": f.q, "a": f.a, "value": f.value} for f in farey.enumerate_block(q0)]
        return Outcome(rows, {"block_size": len(rows)})
    if not args.delta:
        raise UsageError("farey needs --list, or --delta with --alpha or --kdelta")
    if args.alpha is not None:
        rows = [
            {"alpha": args.alpha, "delta": d, "q0": q0, "count": farey.count_in_interval(args.alpha, d, q0)}
            for d in args.delta
        ]
        return Outcome(rows)
    rows, ok = [], True
    for d in args.delta:
        wc = farey.k_delta(d, q0)
        recount = farey.count_in_interval(wc.argmax_alpha, d, q0) if wc.block_size else 0
        ok &= recount == wc.max_count
        rows.append({
            "delta": d, "q0": q0, "max_count": wc.max_count,
            "argmax": float(wc.argmax_alpha), "block_size": wc.block_size,
        })
    return Outcome(rows, ok=ok, summary="" if ok else "argmax recount disagrees with K(Delta)")


def cmd_approx(args) -> Outcome:
    alpha = Fraction(args.alpha) if "/" in args.alpha else float(args.alpha)
    ra = farey.dirichlet_approx(alpha, args.tau)
    ok = ra.satisfies_contract() and ra.alpha == Fraction(alpha)
    row = {"alpha": float(alpha), "tau": args.tau, "b": ra.b, "r": ra.r, "z": float(ra.z),
           "z_bound": 1 / (ra.r * args.tau), "ok": ok}
    return Outcome([row], ok=ok)


def cmd_gauss_scan(args) -> Outcome:
    rep = gauss.gauss_bound_scan(args.cmax, threads=args.threads)
    rows = [
        {"c": r.c, "k": r.k, "l": r.l, "re": r.value.real, "im": r.value.imag, "ratio": r.ratio}
        for r in rep.rows
    ]
    meta = {"max_ratio": rep.max_ratio, "argmax": list(rep.argmax), "attaining": rep.attaining}
    return Outcome(rows, meta, rep.ok, f"max |G|/sqrt(2c) = {rep.max_ratio:.12f} at {rep.argmax}")


def cmd_roots(args) -> Outcome:
    if args.kmax is not None:
        rng = np.random.default_rng(args.seed)
        rows, ok = [], True
        for k in range(1, args.kmax + 1):
            worst = 0
            for _ in range(args.samples):
                l = int(rng.integers(0, k))
                while math.gcd(l, k) != 1:
                    l = int(rng.integers(0, k))
                worst = max(worst, len(congruence.square_roots_mod(l, k)))
            bound = 2 ** (omega(k) + 1)
            ok &= worst <= bound
            rows.append({"k": k, "omega": omega(k), "max_roots": worst, "bound": bound})
        return Outcome(rows, ok=ok)
    if args.k is None or args.l is None:
        raise UsageError("roots needs --l and --k, or --kmax")
    if args.g is not None:
        n = congruence.count_scaled_roots(args.g, args.l, args.k)
        return Outcome([{"g": args.g, "c": args.l, "k": args.k, "count": n}])
    roots = congruence.square_roots_mod(args.l, args.k)
    bound = 2 ** (omega(args.k) + 1)
    ok = len(roots) <= bound and all((x * x - args.l) % args.k == 0 for x in roots)
    rows = [{"l": args.l, "k": args.k, "x": x} for x in roots]
    return Outcome(rows, {"count": len(roots), "bound": bound}, ok)


KERNEL_S = (0.0, 0.25, 0.5, 0.9, 1.0, 1.5, 2.0)
POISSON_CASES = ((0.3, 0.0), (0.3, 0.37), (1.0, 0.0), (1.0, 0.37), (3.0, 0.0), (3.0, 0.37))


def cmd_kernel_check(args) -> Outcome:
    rows, ok = [], True
    for s in KERNEL_S:
        num = analysis.numeric_fourier_phi(s, args.cutoff, args.tol)
        ex = analysis.phi_hat(s)
        good = abs(num - ex) <= 5e-3
        ok &= good
        rows.append({"check": "fourier", "x": s, "y": None, "numeric": num, "exact": ex,
                     "diff": abs(num - ex), "ok": good})
    xs = np.linspace(-0.5, 0.5, 1000)
    low = float(np.min(analysis.phi(xs)))
    ok &= low >= 1
    rows.append({"check": "phi>=1", "x": -0.5, "y": 0.5, "numeric": low, "exact": 1.0,
                 "diff": low - 1.0, "ok": low >= 1})
    for w, c in POISSON_CASES:
        pc = analysis.poisson_check(w, c)
        good = pc.diff <= 1e-6
        ok &= good
        rows.append({"check": "poisson", "x": w, "y": c, "numeric": pc.lhs, "exact": pc.rhs,
                     "diff": pc.diff, "ok": good})
    return Outcome(rows, ok=ok)


def _integral_task(p):
    j, l, rs, z, q0 = p
    val = analysis.oscillatory_integral(j, l, rs, z, q0, tol=1e-7)
    bound = min(q0, analysis.integral_case_bounds(j, l, rs, z, q0))
    return {"j": j, "l": l, "r_star": rs, "z": z, "q0": q0, "abs_integral": abs(val),
            "bound": bound, "ratio": abs(val) / bound, "ok": abs(val) <= bound + 1e-6}


def integral_grid(jmax=8, lmax=8, r_stars=(1, 2, 3, 5), zs=(1e-3, 1e-2), q0s=(100.0, 1000.0)):
    return [
        (j, l, rs, z, q0)
        for q0 in q0s for z in zs for rs in r_stars
        for j in range(-jmax, jmax + 1) for l in range(-lmax, lmax + 1)
    ]


def cmd_integral_check(args) -> Outcome:
    grid = integral_grid(args.jmax, args.lmax, tuple(args.r_star), tuple(args.z), tuple(args.q0))
    from .parallel import parallel_map
    rows = parallel_map(_integral_task, grid, args.threads)
    ok = all(r["ok"] for r in rows)
    worst = max(rows, key=lambda r: r["ratio"])
    return Outcome(rows, {"max_ratio": worst["ratio"]}, ok, f"max |I|/bound = {worst['ratio']:.6f}")


def cmd_lemma2(args) -> Outcome:
    rows, ok = [], True
    for draw, rep in bounds.lemma2_random_check(args.draws, args.seed, args.q0max):
        ok &= rep.ok
        rows.append({
            "q0": draw.q0, "Delta": float(draw.delta_window), "b": draw.approx.b, "r": draw.approx.r,
            "z": float(draw.approx.z), "delta": float(draw.delta_param), "counted": rep.counted,
            "diagonal": rep.diagonal, "violations": len(rep.violations),
        })
    return Outcome(rows, ok=ok, summary=f"{sum(r['violations'] for r in rows)} violations")


def cmd_p_bounds(args) -> Outcome:
    grid = bounds.PGrid(tuple(args.q0), tuple(args.delta), args.alphas, args.seed, args.eps)
    rows = []
    chain_ok = True
    for pt in bounds.p_bound_scan(grid, threads=args.threads):
        chain_ok &= pt.chain.ok
        for rep in pt.reports:
            row = {"alpha": pt.alpha, "b": pt.b, "r": pt.r, "z_raw": pt.z}
            row.update(rep.as_row())
            rows.append(row)
    chain = bounds.chain_grid(args.q0, args.delta)
    bad = [c for c in chain if not c.ok]
    ok = chain_ok and not bad
    meta = {"chain_points": len(chain), "chain_failures": len(bad)}
    return Outcome(rows, meta, ok, f"chain checks: {len(chain)} points, {len(bad)} failures")


def _load_seq(args) -> expsum.CoefficientSequence:
    if args.coeff_file:
        return expsum.load_coefficients(args.coeff_file)
    if args.n is None:
        raise UsageError("sieve needs --n (with --gen) or --coeff-file")
    return expsum.generate(args.gen, args.n, args.seed)


def cmd_sieve(args) -> Outcome:
    seq = _load_seq(args)
    if args.q0 is not None:
        lhs = expsum.sieve_sum_dyadic(seq, args.q0)
        row = {"N": seq.n_max, "q0": args.q0, "Z": seq.z_value, "lhs": lhs}
        return Outcome([row])
    if args.qmax is None:
        raise UsageError("sieve needs --qmax or --q0")
    lhs = expsum.sieve_sum_squares(seq, args.qmax)
    ceiling = (seq.n_max + args.qmax**4) * seq.z_value
    ok = lhs <= ceiling
    row = {"N": seq.n_max, "Q": args.qmax, "Z": seq.z_value, "lhs": lhs, "spacing_ceiling": ceiling}
    return Outcome([row], ok=ok)


def cmd_ratio_grid(args) -> Outcome:
    pts = bounds.sieve_ratio_grid(args.n, args.q, args.seeds, args.eps, args.gen, args.threads)
    rows, ok = [], True
    for p in pts:
        good = p.lhs <= p.spacing.shape_value
        ok &= good
        rows.append({
            "N": p.n, "Q": p.q, "seed": p.seed, "Z": p.z_value, "lhs": p.lhs,
            "thm2_shape": p.thm2.shape_value, "thm2_ratio": p.thm2.ratio,
            "zhao_shape": p.zhao.shape_value, "zhao_ratio": p.zhao.ratio,
            "spacing_shape": p.spacing.shape_value, "spacing_ok": good,
        })
    return Outcome(rows, {"eps": args.eps, "log_factor": "log Q for Q >= 2, 1 at Q = 1"}, ok)


# ---------------------------------------------------------------- parser


class UsageError(Exception):
    pass


def _global_flags(p: argparse.ArgumentParser, suppress: bool) -> None:
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p.add_argument("--seed", type=int, default=d(0), help="RNG seed (default 0)")
    p.add_argument("--format", choices=("csv", "json"), default=d("csv"))
    p.add_argument("--out", default=d("-"), help="output path (default: stdout)")
    p.add_argument("--threads", type=int, default=d(None),
                   help="worker processes (default: all cores); never changes results")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sqsieve", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    _global_flags(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add(name: str, fn: Callable, help: str) -> argparse.ArgumentParser:
        sp = sub.add_parser(name, help=help)
        _global_flags(sp, suppress=True)
        sp.set_defaults(func=fn)
        return sp

    sp = add("farey", cmd_farey, "enumerate a block, count P(alpha), or compute K(Delta)")
    sp.add_argument("--q0", type=_floats, required=True)
    sp.add_argument("--list", action="store_true", help="dump the block fractions")
    sp.add_argument("--delta", type=_floats, nargs="+")
    sp.add_argument("--alpha", type=_floats, help="count fractions within delta of alpha")
    sp.add_argument("--kdelta", action="store_true", help="compute K(Delta) (default with --delta)")

    sp = add("approx", cmd_approx, "Dirichlet approximation alpha = b/r + z")
    sp.add_argument("--alpha", required=True, help="real or p/q")
    sp.add_argument("--tau", type=float, required=True)

    sp = add("gauss-scan", cmd_gauss_scan, "exhaustive |G| <= sqrt(2c) scan")
    sp.add_argument("--cmax", type=int, required=True)

    sp = add("roots", cmd_roots, "square roots mod k, scaled counts, or the 2^(omega+1) scan")
    sp.add_argument("--l", type=int)
    sp.add_argument("--k", type=int)
    sp.add_argument("--g", type=int, help="count g*x^2 = l (mod k) instead")
    sp.add_argument("--kmax", type=int, help="scan every k <= kmax")
    sp.add_argument("--samples", type=int, default=200)

    sp = add("kernel-check", cmd_kernel_check, "phi / phi-hat Fourier pair and Poisson checks")
    sp.add_argument("--cutoff", type=float, default=1e4)
    sp.add_argument("--tol", type=float, default=1e-3)

    sp = add("integral-check", cmd_integral_check, "oscillatory integrals vs case bounds")
    sp.add_argument("--jmax", type=int, default=8)
    sp.add_argument("--lmax", type=int, default=8)
    sp.add_argument("--r-star", type=int, nargs="+", default=[1, 2, 3, 5])
    sp.add_argument("--z", type=float, nargs="+", default=[1e-3, 1e-2])
    sp.add_argument("--q0", type=float, nargs="+", default=[100.0, 1000.0])

    sp = add("lemma2-verify", cmd_lemma2, "inclusion check on random admissible parameters")
    sp.add_argument("--draws", type=int, default=1000)
    sp.add_argument("--q0max", type=int, default=2000)

    sp = add("p-bounds", cmd_p_bounds, "exact P(alpha) against the bound shapes")
    sp.add_argument("--q0", type=float, nargs="+", default=[10.0, 100.0, 1000.0])
    sp.add_argument("--delta", type=float, nargs="+", default=[1e-2, 1e-3, 1e-4, 1e-5, 1e-6])
    sp.add_argument("--alphas", type=int, default=4, help="random alphas per (Q0, Delta)")
    sp.add_argument("--eps", type=float, default=bounds.DEFAULT_EPS)

    sp = add("sieve", cmd_sieve, "square-moduli sieve sum for one coefficient sequence")
    sp.add_argument("--n", type=int)
    sp.add_argument("--gen", choices=sorted(expsum.GENERATORS), default="random")
    sp.add_argument("--coeff-file", help="one 're im' pair per line")
    sp.add_argument("--qmax", type=int)
    sp.add_argument("--q0", type=_floats, help="restrict to the block Q0 <= q^2 <= 2 Q0")

    sp = add("ratio-grid", cmd_ratio_grid, "sieve sums against the thm2, zhao and spacing shapes")
    sp.add_argument("--n", type=int, nargs="+", default=[64, 128, 256, 512, 1024])
    sp.add_argument("--q", type=int, nargs="+", default=[2, 4, 8, 16, 32])
    sp.add_argument("--seeds", type=int, nargs="+", default=[0])
    sp.add_argument("--gen", choices=sorted(expsum.GENERATORS), default="random")
    sp.add_argument("--eps", type=float, default=bounds.DEFAULT_EPS)
    return parser


def run(argv: list[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    if args.threads is None:
        args.threads = default_threads()
    try:
        res = args.func(args)
    except UsageError as e:
        parser.print_usage(stderr)
        print(f"sqsieve {args.command}: error: {e}", file=stderr)
        return EXIT_USAGE
    except (ValueError, ArithmeticError) as e:
        print(f"sqsieve {args.command}: error: {e}", file=stderr)
        return EXIT_USAGE
    flags = {k: v for k, v in vars(args).items() if k not in ("func", "threads", "out")}
    meta = {"version": __version__, "command": args.command, "seed": args.seed, "flags": flags}
    meta.update(res.meta)
    meta["ok"] = res.ok
    text = render(res.rows, meta, args.format)
    if args.out == "-":
        stdout.write(text)
    else:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    if res.summary:
        print(res.summary, file=stderr)
    if not res.ok:
        print(f"sqsieve {args.command}: verification FAILED", file=stderr)
        return EXIT_FAIL
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
