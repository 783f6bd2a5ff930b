"""Bound shapes, the Farey-window inclusion check, and ratio scans.

Every unspecified absolute constant is set to 1. What a scan reports is the
measured ratio exact / shape, never a pass/fail against an invented constant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from . import expsum
from .farey import (
    RationalApprox,
    block,
    count_in_interval,
    dirichlet_approx,
    k_delta,
    window_indices,
)
from .parallel import parallel_map

DEFAULT_EPS = 0.05
CHAIN_RTOL = 1e-12

# required symbols per bound kind; eps is optional everywhere it appears
KIND_PARAMS: dict[str, tuple[str, ...]] = {
    "thm1": ("K", "N", "delta", "Z"),
    "zhao": ("N", "Q", "Z", "eps"),
    "thm2": ("N", "Q", "Z", "eps"),
    "thm3": ("q0", "delta", "r", "z", "eps"),
    "thm4": ("q0", "delta", "r", "z", "eps"),
    "E1": ("q0", "delta", "r", "z", "eps"),
    "E4": ("q0", "delta", "eps"),
    "E5": ("q0", "N", "Z", "eps"),
    "spacing": ("N", "Q", "Z"),
}


class BoundParamError(ValueError):
    pass


@dataclass(frozen=True)
class BoundReport:
    kind: str
    params: Mapping[str, float]
    shape_value: float
    exact_value: float = 0.0
    ratio: float = math.nan

    def as_row(self) -> dict:
        row = {"kind": self.kind}
        row.update(self.params)
        row.update(shape_value=self.shape_value, exact_value=self.exact_value, ratio=self.ratio)
        return row


def thm2_log_factor(q: float) -> float:
    """log Q, except that Q = 1 uses 1 so the shape does not vanish."""
    return math.log(q) if q >= 2 else 1.0


def _validate(kind: str, params: Mapping[str, float]) -> dict[str, float]:
    try:
        names = KIND_PARAMS[kind]
    except KeyError:
        raise BoundParamError(f"unknown bound kind {kind!r}") from None
    p = dict(params)
    if "eps" in names:
        p.setdefault("eps", DEFAULT_EPS)
    missing = [n for n in names if n not in p]
    extra = [n for n in p if n not in names]
    if missing or extra:
        raise BoundParamError(f"{kind}: missing {missing}, unexpected {extra}")
    checks = {
        "delta": lambda v: 0 < v <= 0.5,
        "r": lambda v: v >= 1,
        "z": lambda v: v > 0,
        "N": lambda v: v >= 1,
        "Q": lambda v: v >= 1,
        "q0": lambda v: v >= 1,
        "Z": lambda v: v >= 0,
        "K": lambda v: v >= 0,
        "eps": lambda v: v >= 0,
    }
    for name, v in p.items():
        if not checks[name](v):
            raise BoundParamError(f"{kind}: {name}={v} out of range")
    return p


def _shape(kind: str, p: Mapping[str, float]) -> float:
    eps = p.get("eps", 0.0)
    if kind == "thm1":
        return p["K"] * (p["N"] + 1 / p["delta"]) * p["Z"]
    if kind == "zhao":
        n, q = p["N"], p["Q"]
        return math.log(2 * q) * (q**3 + (n * math.sqrt(q) + math.sqrt(n) * q * q) * n**eps) * p["Z"]
    if kind == "thm2":
        n, q = p["N"], p["Q"]
        return thm2_log_factor(q) * n**eps * (q**3 + n**1.25) * p["Z"]
    if kind == "spacing":
        return (p["N"] + p["Q"] ** 4) * p["Z"]
    if kind == "E5":
        n = p["N"]
        return n**eps * (p["q0"] ** 1.5 + n**1.25) * p["Z"]
    q0, d = p["q0"], p["delta"]
    lead = d**-eps
    if kind == "E4":
        return lead * (q0**1.5 * d + d**-0.25)
    r, z = p["r"], p["z"]
    qq_mid = math.sqrt(q0) * d / (math.sqrt(r) * z)
    r2_mid = q0 * r * z
    if kind == "thm3":
        return lead * (q0**1.5 * d + qq_mid + d**-0.25)
    if kind == "thm4":
        return lead * (1 + r2_mid + q0**1.5 * d)
    if kind == "E1":
        return lead * (q0**1.5 * d + min(r2_mid, qq_mid) + d**-0.25)
    raise BoundParamError(kind)  # pragma: no cover


def evaluate_bound(kind: str, params: Mapping[str, float], exact: float | None = None) -> BoundReport:
    """Evaluate one bound shape with constants 1; attach the measured value if given."""
    p = _validate(kind, params)
    shape = _shape(kind, p)
    if exact is None:
        return BoundReport(kind, p, shape)
    ratio = exact / shape if shape > 0 else math.nan
    return BoundReport(kind, p, shape, float(exact), ratio)


# ---------------------------------------------------------------- lemma 2


class PreconditionError(ValueError):
    pass


@dataclass
class InclusionReport:
    counted: int
    diagonal: int = 0
    violations: list[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def _fr(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def check_lemma2_preconditions(q0, delta_param, approx: RationalApprox, delta_window) -> None:
    """Raise PreconditionError unless tau = 1/sqrt(Delta), z >= Delta and Q0*Delta/z <= delta <= Q0."""
    big_d, q0f, dp = _fr(delta_window), _fr(q0), _fr(delta_param)
    z, r, b = approx.z, approx.r, approx.b
    if not 0 < big_d <= Fraction(1, 2):
        raise PreconditionError(f"Delta={delta_window} not in (0, 1/2]")
    if math.gcd(b, r) != 1 or r < 1 or r * r * big_d > 1:
        raise PreconditionError(f"need r <= 1/sqrt(Delta) and gcd(b, r) = 1, got b={b}, r={r}")
    if z * z * r * r > big_d:
        raise PreconditionError("|z| exceeds sqrt(Delta)/r")
    if z < big_d:
        raise PreconditionError(f"z={float(z)} < Delta={delta_window}")
    if not q0f * big_d / z <= dp <= q0f:
        raise PreconditionError(f"delta={delta_param} outside [Q0*Delta/z, Q0]")


def verify_lemma2_inclusion(q0, delta_param, approx: RationalApprox, delta_window) -> InclusionReport:
    """Check that every fraction counted by P(b/r + z) lands in the m-sum.

    For each counted a/q^2 (lifted so that a/q^2 lies in [alpha - Delta,
    alpha + Delta] on the line), m = a r - b q^2 must be 0 with r = q^2, or
    satisfy m = -b q^2 (mod r) and (y - 4 delta) r z <= m <= (y + 4 delta) r z,
    with q inside the root window around sqrt(y). Each y in
    [q^2 - delta, q^2 + delta] clipped to [Q0, 2 Q0] must work; the
    conditions are monotone in y, so the endpoints and q^2 are tested.
    """
    check_lemma2_preconditions(q0, delta_param, approx, delta_window)
    big_d, q0f, dp = _fr(delta_window), _fr(q0), _fr(delta_param)
    b, r, z = approx.b, approx.r, approx.z
    alpha = approx.alpha
    blk = block(q0)
    idx = window_indices(alpha, delta_window, q0)
    rep = InclusionReport(counted=len(idx))
    half_root = float(dp) / math.sqrt(float(q0f))
    for i in idx:
        a, d, q = int(blk.a[i]), int(blk.d[i]), int(blk.q[i])
        shift = math.floor(alpha - Fraction(a, d) + Fraction(1, 2))
        a_line = a + shift * d
        where = {"a": a_line, "q": q, "m": None}
        if abs(Fraction(a_line, d) - alpha) > big_d:
            rep.violations.append(dict(where, failed="lift"))
            continue
        m = a_line * r - b * d
        where["m"] = m
        if m == 0:
            rep.diagonal += 1
            if r != d:
                rep.violations.append(dict(where, failed="m=0 but r != q^2"))
            continue
        if (m + b * d) % r:
            rep.violations.append(dict(where, failed="congruence"))
        ys = {max(q0f, d - dp), Fraction(d), min(2 * q0f, d + dp)}
        for y in sorted(ys):
            if not (y - dp <= d <= y + dp):
                continue
            if not (y - dp) * r * (z - big_d) <= m <= (y + dp) * r * (z + big_d):
                rep.violations.append(dict(where, y=float(y), failed="raw m-range"))
            if not (y - 4 * dp) * r * z <= m <= (y + 4 * dp) * r * z:
                rep.violations.append(dict(where, y=float(y), failed="widened m-range"))
            root = math.sqrt(float(y))
            slack = 1e-9 * root
            if not root - half_root - slack <= q <= root + half_root + slack:
                rep.violations.append(dict(where, y=float(y), failed="root window"))
    return rep


@dataclass(frozen=True)
class Lemma2Draw:
    q0: int
    delta_window: Fraction
    approx: RationalApprox
    delta_param: Fraction


def random_lemma2_draw(rng: np.random.Generator, q0_max: int = 2000) -> Lemma2Draw:
    """Parameters with tau = 1/sqrt(Delta), z in [Delta, sqrt(Delta)/r], delta = Q0*Delta/z."""
    q0 = int(rng.integers(1, q0_max + 1))
    big_d = Fraction(float(10 ** rng.uniform(-6, -2)))
    tau = 1 / math.sqrt(big_d)
    r = int(rng.integers(1, math.floor(tau) + 1))
    while r * r * big_d > 1:
        r -= 1
    if r == 1:
        b = int(rng.integers(0, 2))
    else:
        b = int(rng.integers(1, r))
        while math.gcd(b, r) != 1:
            b = int(rng.integers(1, r))
    z_hi = math.sqrt(big_d) / r
    z = Fraction(float(rng.uniform(float(big_d), z_hi)))
    z = max(z, big_d)
    while z * z * r * r > big_d:
        z = Fraction(math.nextafter(float(z), 0.0))
    z = max(z, big_d)
    approx = RationalApprox(b, r, z, tau)
    return Lemma2Draw(q0, big_d, approx, q0 * big_d / z)


def lemma2_random_check(n_draws: int, seed: int = 0, q0_max: int = 2000) -> list[tuple[Lemma2Draw, InclusionReport]]:
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(n_draws):
        draw = random_lemma2_draw(rng, q0_max)
        rep = verify_lemma2_inclusion(draw.q0, draw.delta_param, draw.approx, draw.delta_window)
        out.append((draw, rep))
    return out


# ---------------------------------------------------------------- section 5 chain


@dataclass(frozen=True)
class ChainCheck:
    q0: float
    delta: float
    r: int
    z: float
    min_middle: float
    e2_rhs: float
    e3_rhs: float

    @property
    def e2_ok(self) -> bool:
        return self.min_middle <= self.e2_rhs * (1 + CHAIN_RTOL)

    @property
    def e3_ok(self) -> bool:
        return self.e2_rhs <= self.e3_rhs * (1 + CHAIN_RTOL)

    @property
    def ok(self) -> bool:
        return self.e2_ok and self.e3_ok


def chain_check(q0: float, delta: float, r: int, z: float) -> ChainCheck:
    """min{Q0 r z, Q0^(1/2) Delta r^(-1/2) / z} <= Q0^(3/4) Delta^(3/8) <= Q0^(3/2) Delta + Delta^(-1/4)."""
    mid = min(q0 * r * z, math.sqrt(q0) * delta / (math.sqrt(r) * z))
    e2 = q0**0.75 * delta**0.375
    e3 = q0**1.5 * delta + delta**-0.25
    return ChainCheck(q0, delta, r, z, mid, e2, e3)


def crossover_z(q0: float, delta: float, r: int) -> float:
    """z where Q0 r z equals Q0^(1/2) Delta r^(-1/2) / z."""
    return math.sqrt(delta) * q0**-0.25 * r**-0.75


def chain_grid(q0_values: Sequence[float], delta_values: Sequence[float], n_r: int = 12, n_z: int = 12) -> list[ChainCheck]:
    """Chain checks over r <= 1/sqrt(Delta) and z in [Delta, sqrt(Delta)/r].

    r runs over a log-spaced set that always includes 1 and floor(1/sqrt(Delta));
    z over a log-spaced set with both endpoints and the crossover point.
    """
    out = []
    for q0 in q0_values:
        for d in delta_values:
            r_top = math.floor(1 / math.sqrt(d))
            while r_top * r_top * d > 1:
                r_top -= 1
            rs = sorted({1, r_top, *np.unique(np.geomspace(1, r_top, n_r).astype(int)).tolist()})
            for r in rs:
                z_hi = math.sqrt(d) / r
                zs = set(np.geomspace(d, z_hi, n_z).tolist()) | {d, z_hi}
                zc = crossover_z(q0, d, r)
                if d <= zc <= z_hi:
                    zs.add(zc)
                out.extend(chain_check(q0, d, r, z) for z in sorted(zs))
    return out


# ---------------------------------------------------------------- P-bound scan


@dataclass(frozen=True)
class PGrid:
    q0_values: tuple[float, ...] = (10.0, 100.0, 1000.0)
    delta_values: tuple[float, ...] = (1e-2, 1e-3, 1e-4, 1e-5, 1e-6)
    n_random: int = 4
    seed: int = 0
    eps: float = DEFAULT_EPS


@dataclass
class PPoint:
    q0: float
    delta: float
    alpha: float
    b: int
    r: int
    z: float
    z_eff: float
    count: int
    reports: list[BoundReport]
    chain: ChainCheck


def p_point(q0: float, delta: float, alpha, eps: float = DEFAULT_EPS) -> PPoint:
    """Exact P(alpha) against the (QQ), (R2), (E1) and (E4) shapes.

    alpha is split as b/r + z at tau = 1/sqrt(Delta). The shapes assume
    z >= Delta; smaller |z| is evaluated at z = Delta, the reduction used
    to justify that assumption.
    """
    approx = dirichlet_approx(alpha, 1 / math.sqrt(delta))
    z = float(approx.z)
    z_eff = max(abs(z), delta)
    count = count_in_interval(alpha, delta, q0)
    common = {"q0": q0, "delta": delta, "eps": eps}
    full = dict(common, r=approx.r, z=z_eff)
    reports = [
        evaluate_bound("thm3", full, count),
        evaluate_bound("thm4", full, count),
        evaluate_bound("E1", full, count),
        evaluate_bound("E4", common, count),
    ]
    return PPoint(q0, delta, float(alpha), approx.b, approx.r, z, z_eff, count, reports,
                  chain_check(q0, delta, approx.r, z_eff))


def _p_task(args) -> list[PPoint]:
    q0, delta, alphas, eps = args
    return [p_point(q0, delta, a, eps) for a in alphas]


def p_bound_scan(grid: PGrid, threads: int = 1) -> list[PPoint]:
    """Grid of exact P counts versus the bound shapes.

    For each (Q0, Delta) the maximizing alpha of K(Delta) is always included,
    followed by grid.n_random uniform alphas from a seeded generator.
    """
    rng = np.random.default_rng(grid.seed)
    tasks = []
    for q0 in grid.q0_values:
        for d in grid.delta_values:
            if not 0 < d <= 0.5:
                raise BoundParamError(f"delta={d} out of range")
            alphas = [k_delta(d, q0).argmax_alpha] + rng.random(grid.n_random).tolist()
            tasks.append((q0, d, alphas, grid.eps))
    out: list[PPoint] = []
    for pts in parallel_map(_p_task, tasks, threads):
        out.extend(pts)
    return out


# ---------------------------------------------------------------- sieve ratios


@dataclass
class SievePoint:
    n: int
    q: int
    seed: int
    z_value: float
    lhs: float
    thm2: BoundReport
    zhao: BoundReport
    spacing: BoundReport


def sieve_point(n: int, q: int, seed: int, eps: float = DEFAULT_EPS, gen: str = "random") -> SievePoint:
    seq = expsum.generate(gen, n, seed)
    lhs = expsum.sieve_sum_squares(seq, q)
    z = seq.z_value
    base = {"N": n, "Q": q, "Z": z}
    return SievePoint(
        n, q, seed, z, lhs,
        evaluate_bound("thm2", dict(base, eps=eps), lhs),
        evaluate_bound("zhao", dict(base, eps=eps), lhs),
        evaluate_bound("spacing", base, lhs),
    )


def _sieve_task(args) -> SievePoint:
    return sieve_point(*args)


def sieve_ratio_grid(
    n_list: Sequence[int],
    q_list: Sequence[int],
    seeds: Sequence[int],
    eps: float = DEFAULT_EPS,
    gen: str = "random",
    threads: int = 1,
) -> list[SievePoint]:
    """Exact square-moduli sieve sums against the thm2, zhao and spacing shapes."""
    if not seeds:
        raise ValueError("need at least one seed")
    for n in n_list:
        if not 1 <= n <= 2**14:
            raise ValueError(f"N={n} outside [1, 2**14]")
    for q in q_list:
        if not 1 <= q <= 64:
            raise ValueError(f"Q={q} outside [1, 64]")
    tasks = [(n, q, s, eps, gen) for n in n_list for q in q_list for s in seeds]
    return parallel_map(_sieve_task, tasks, threads)
