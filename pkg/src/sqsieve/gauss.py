"""Quadratic Gauss sums G(k, l; c) = sum_{d=1}^{c} e((k d^2 + l d) / c)."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .parallel import parallel_map

TWO_PI = 2.0 * math.pi
TIE_RTOL = 1e-12


def _e(num: int, den: int) -> complex:
    t = TWO_PI * num / den
    return complex(math.cos(t), math.sin(t))


def gauss_sum(k: int, l: int, c: int) -> complex:
    """Direct summation of the quadratic Gauss sum.

    The phase k d^2 + l d is reduced mod c in integers before dividing, and
    real and imaginary parts are accumulated with math.fsum.
    """
    if c < 1:
        raise ValueError(f"c must be >= 1, got {c}")
    if math.gcd(k, c) != 1:
        raise ValueError(f"gcd({k}, {c}) > 1: the sqrt(2c) bound does not apply")
    k %= c
    l %= c
    re, im = [], []
    for d in range(1, c + 1):
        z = _e((k * d * d + l * d) % c, c)
        re.append(z.real)
        im.append(z.imag)
    return complex(math.fsum(re), math.fsum(im))


def gauss_sums_all_l(k: int, c: int) -> np.ndarray:
    """G(k, l; c) for l = 0..c-1 at once.

    For fixed k the map l -> G(k, l; c) is a length-c DFT of e(k d^2 / c).
    """
    d = np.arange(c, dtype=np.int64)
    w = np.exp(1j * TWO_PI * ((k * (d * d % c)) % c) / c)
    return np.fft.ifft(w) * c


@dataclass
class GaussScanRow:
    c: int
    k: int
    l: int
    value: complex
    ratio: float
    # every (k, l) within rounding of this modulus' maximum
    ties: tuple[tuple[int, int], ...] = ()


@dataclass
class GaussScanReport:
    c_max: int
    max_ratio: float
    argmax: tuple[int, int, int]
    rows: list[GaussScanRow] = field(default_factory=list)
    attaining: list[tuple[int, int, int]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.max_ratio <= 1 + 1e-9


def _units(c: int) -> np.ndarray:
    if c == 1:
        return np.array([0], dtype=np.int64)
    ks = np.arange(1, c, dtype=np.int64)
    return ks[np.gcd(ks, c) == 1]


def scan_modulus(c: int) -> GaussScanRow:
    """Largest |G|/sqrt(2c) over all units k and all l for one modulus c."""
    ks = _units(c)
    d = np.arange(c, dtype=np.int64)
    sq = d * d % c
    phases = (ks[:, None] * sq[None, :]) % c
    vals = np.fft.ifft(np.exp(1j * TWO_PI * phases / c), axis=1) * c
    mags = np.abs(vals)
    i, l = np.unravel_index(int(np.argmax(mags)), mags.shape)
    v = complex(vals[i, l])
    near = np.argwhere(mags >= mags[i, l] * (1 - TIE_RTOL))
    ties = tuple((int(ks[a]), int(b)) for a, b in near)
    return GaussScanRow(c, int(ks[i]), int(l), v, abs(v) / math.sqrt(2 * c), ties)


def gauss_bound_scan(c_max: int, threads: int = 1) -> GaussScanReport:
    """Exhaustive check of |G| <= sqrt(2c) for c <= c_max.

    Returns one row per modulus (its worst (k, l)) and the overall maximum.
    """
    if c_max < 1:
        raise ValueError(f"c_max must be >= 1, got {c_max}")
    rows = parallel_map(scan_modulus, range(1, c_max + 1), threads)
    best = max(rows, key=lambda r: (r.ratio, -r.c))
    attaining = [
        (r.c, k, l)
        for r in rows
        if r.ratio >= best.ratio * (1 - TIE_RTOL)
        for k, l in r.ties
    ]
    return GaussScanReport(c_max, best.ratio, (best.c, best.k, best.l), rows, attaining)
