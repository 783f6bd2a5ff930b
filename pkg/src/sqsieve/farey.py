"""Farey fractions a/q^2 in dyadic blocks, short-interval counts and K(Delta).

A block is every reduced a/q^2 with Q0 <= q^2 <= 2*Q0 and 1 <= a <= q^2.
Counting happens on the circle R/Z with closed windows. The only block
containing the point 1/1 (== 0 on the circle) is the one with q = 1.

Floats are used for speed; any comparison whose float margin is below
EXACT_MARGIN is redone in exact rational arithmetic, so counts are exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Union

import numpy as np

from .arith import split_ft_gt

Real = Union[float, int, Fraction]

EXACT_MARGIN = 1e-11
# float sort order is exact while 4*Q0^2 stays well inside 2^53
MAX_Q0 = 2**24


@dataclass(frozen=True, order=False)
class FareyFraction:
    a: int
    q: int

    def __post_init__(self):
        if not 1 <= self.a <= self.q * self.q or math.gcd(self.a, self.q) != 1:
            raise ValueError(f"{self.a}/{self.q}^2 is not a reduced block fraction")

    @property
    def denominator(self) -> int:
        return self.q * self.q

    @property
    def value(self) -> float:
        return self.a / (self.q * self.q)

    def exact(self) -> Fraction:
        return Fraction(self.a, self.q * self.q)

    def __lt__(self, other: "FareyFraction") -> bool:
        return self.a * other.q * other.q < other.a * self.q * self.q


@dataclass(frozen=True)
class RationalApprox:
    """alpha = b/r + z with r <= tau, gcd(b, r) = 1 and |z| <= 1/(r*tau).

    z is kept as an exact Fraction so the contract can be checked exactly.
    """

    b: int
    r: int
    z: Fraction
    tau: float

    @property
    def alpha(self) -> Fraction:
        return Fraction(self.b, self.r) + self.z

    def satisfies_contract(self) -> bool:
        return (
            self.r >= 1
            and self.r <= self.tau
            and math.gcd(self.b, self.r) == 1
            and abs(self.z) * self.r * Fraction(self.tau) <= 1
        )


@dataclass(frozen=True)
class WindowCount:
    delta: float
    q0: float
    max_count: int
    argmax_alpha: Fraction
    block_size: int


@dataclass(frozen=True)
class Block:
    """Sorted block arrays: numerators, denominators q^2, roots q and float values."""

    q0: float
    a: np.ndarray
    d: np.ndarray
    q: np.ndarray
    values: np.ndarray

    def __len__(self) -> int:
        return len(self.values)

    def exact(self, i: int) -> Fraction:
        return Fraction(int(self.a[i]), int(self.d[i]))


def block_moduli(q0: Real) -> range:
    """Root moduli q with Q0 <= q^2 <= 2*Q0."""
    q0 = Fraction(q0)
    lo = math.isqrt(math.ceil(q0))
    while lo * lo < q0:
        lo += 1
    hi = math.isqrt(math.floor(2 * q0))
    return range(lo, hi + 1)


def _check_q0(q0: Real) -> None:
    if not q0 >= 1:
        raise ValueError(f"q0 must be >= 1, got {q0}")
    if q0 > MAX_Q0:
        raise ValueError(f"q0 must be <= 2**24, got {q0}")


@lru_cache(maxsize=64)
def block(q0: Real) -> Block:
    _check_q0(q0)
    parts_a, parts_q = [], []
    for q in block_moduli(q0):
        a = np.arange(1, q * q + 1, dtype=np.int64)
        a = a[np.gcd(a, q) == 1]
        parts_a.append(a)
        parts_q.append(np.full(len(a), q, dtype=np.int64))
    if parts_a:
        a = np.concatenate(parts_a)
        q = np.concatenate(parts_q)
    else:
        a = q = np.zeros(0, dtype=np.int64)
    d = q * q
    values = a / d
    order = np.argsort(values, kind="stable")
    arrays = [x[order] for x in (a, d, q, values)]
    for x in arrays:
        x.setflags(write=False)
    return Block(float(q0), *arrays)


def enumerate_block(q0: Real) -> list[FareyFraction]:
    """All reduced a/q^2 with Q0 <= q^2 <= 2*Q0, sorted by value."""
    b = block(q0)
    return [FareyFraction(int(a), int(q)) for a, q in zip(b.a, b.q)]


def _check_delta(delta: Real) -> None:
    if not 0 < delta <= 0.5:
        raise ValueError(f"delta must lie in (0, 1/2], got {delta}")


def _reduce_alpha(alpha: Real) -> tuple[Fraction, float]:
    # x - floor(x) is exact for floats, and Fraction handles the rest
    fa = Fraction(alpha)
    fa -= math.floor(fa)
    return fa, float(fa)


def circle_distance(x: Fraction) -> Fraction:
    x -= math.floor(x)
    return min(x, 1 - x)


def window_indices(alpha: Real, delta: Real, q0: Real) -> np.ndarray:
    """Indices into block(q0) of the fractions with ||a/q^2 - alpha|| <= delta."""
    _check_delta(delta)
    b = block(q0)
    if delta >= 0.5:
        return np.arange(len(b))
    fa, xa = _reduce_alpha(alpha)
    fd = Fraction(delta)
    x = np.mod(b.values - xa, 1.0)
    dist = np.minimum(x, 1.0 - x)
    sure = dist < float(delta) - EXACT_MARGIN
    for i in np.flatnonzero(np.abs(dist - float(delta)) <= EXACT_MARGIN):
        sure[i] = circle_distance(b.exact(i) - fa) <= fd
    return np.flatnonzero(sure)


def count_in_interval(alpha: Real, delta: Real, q0: Real) -> int:
    """P(alpha): block fractions with ||a/q^2 - alpha|| <= delta."""
    return len(window_indices(alpha, delta, q0))


def k_delta(delta: Real, q0: Real) -> WindowCount:
    """K(Delta) for one block by a circular two-pointer sweep.

    A closed window of length 2*Delta can always slide right until its left
    end meets a fraction without losing points, so anchoring left ends at
    fraction values finds the exact maximum.
    """
    _check_delta(delta)
    b = block(q0)
    n = len(b)
    if n == 0:
        return WindowCount(float(delta), float(q0), 0, Fraction(delta), 0)
    if delta >= 0.5:
        return WindowCount(float(delta), float(q0), n, Fraction(1, 2), n)

    width = 2 * float(delta)
    fwidth = 2 * Fraction(delta)
    vals = b.values.tolist()
    ext = vals + [v + 1.0 for v in vals]

    def inside(i: int, j: int) -> bool:
        gap = ext[j] - vals[i]
        if gap < width - EXACT_MARGIN:
            return True
        if gap > width + EXACT_MARGIN:
            return False
        jj, wrap = (j, 0) if j < n else (j - n, 1)
        return b.exact(jj) + wrap - b.exact(i) <= fwidth

    best, best_i = 0, 0
    j = 0
    for i in range(n):
        if j < i + 1:
            j = i + 1
        # window length < 1, so j never reaches i + n
        while j < i + n and inside(i, j):
            j += 1
        if j - i > best:
            best, best_i = j - i, i
    center = b.exact(best_i) + Fraction(delta)
    center -= math.floor(center)
    return WindowCount(float(delta), float(q0), best, center, n)


def dirichlet_approx(alpha: Real, tau: Real) -> RationalApprox:
    """Last continued-fraction convergent b/r of alpha with r <= tau."""
    if not tau >= 1:
        raise ValueError(f"tau must be >= 1, got {tau}")
    x = Fraction(alpha)
    h_prev, h = 0, 1
    k_prev, k = 1, 0
    rest = x
    while True:
        a_i = math.floor(rest)
        h_next = a_i * h + h_prev
        k_next = a_i * k + k_prev
        if k_next > tau:
            break
        h_prev, h, k_prev, k = h, h_next, k, k_next
        frac = rest - a_i
        if frac == 0:
            break
        rest = 1 / frac
    return RationalApprox(h, k, x - Fraction(h, k), float(tau))


def _root_window(y: Real, delta: Real, q0: Real) -> tuple[int, int]:
    """Integer q range [lo, hi] with sqrt(y) - delta/sqrt(Q0) <= q <= sqrt(y) + delta/sqrt(Q0)."""
    half = float(delta) / math.sqrt(float(q0))
    root = math.sqrt(float(y))
    return max(1, math.ceil(root - half)), math.floor(root + half)


def s_t_set(t: int, y: Real, delta: Real, q0: Real) -> list[int]:
    """{q^2/t : q in the Taylor window around sqrt(y), t | q^2}, built as q1^2 * g_t.

    The Taylor constant of the window is taken as 1.
    """
    if t < 1:
        raise ValueError(f"t must be >= 1, got {t}")
    _check_q0(q0)
    if not delta > 0:
        raise ValueError(f"delta must be > 0, got {delta}")
    lo, hi = _root_window(y, delta, q0)
    sp = split_ft_gt(t)
    q1_lo = -(-lo // sp.f_t)
    q1_hi = hi // sp.f_t
    return [q1 * q1 * sp.g_t for q1 in range(q1_lo, q1_hi + 1)]
