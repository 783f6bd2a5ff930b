"""Fourier-analytic toolkit: the Fejer-type kernel phi, its transform, and
oscillatory integrals together with first/second derivative test bounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np

TWO_PI = 2.0 * math.pi
PI2_4 = math.pi**2 / 4

# documented constants for the derivative-test shapes
FIRST_DERIV_CONST = 4.0 / math.pi
SECOND_DERIV_CONST = 8.0

_SERIES_CUTOFF = 1e-4


class QuadratureError(RuntimeError):
    """Adaptive quadrature did not reach the requested tolerance."""


def phi(x):
    """phi(x) = (sin(pi x) / (2x))^2, with phi(0) = pi^2/4.

    Accepts scalars or arrays. Near 0 a short series avoids 0/0.
    """
    x = np.asarray(x, dtype=float)
    u2 = (math.pi * x) ** 2
    small = np.abs(x) < _SERIES_CUTOFF
    safe = np.where(small, 1.0, x)
    direct = (np.sin(math.pi * safe) / (2 * safe)) ** 2
    series = PI2_4 * (1 - u2 / 3 + 2 * u2 * u2 / 45)
    out = np.where(small, series, direct)
    return float(out) if out.ndim == 0 else out


def phi_hat(s):
    """Fourier transform of phi: (pi^2/4) * max(1 - |s|, 0)."""
    s = np.asarray(s, dtype=float)
    out = PI2_4 * np.maximum(1 - np.abs(s), 0.0)
    return float(out) if out.ndim == 0 else out


@lru_cache(maxsize=8)
def _legendre(n: int) -> tuple[np.ndarray, np.ndarray]:
    return np.polynomial.legendre.leggauss(n)


@dataclass(frozen=True)
class QuadResult:
    value: complex
    error: float
    panels: int


def adaptive_gauss(
    f: Callable[[np.ndarray], np.ndarray],
    breaks: np.ndarray,
    tol: float,
    order: int = 16,
    max_rounds: int = 30,
) -> QuadResult:
    """Integrate f over [breaks[0], breaks[-1]] with per-panel Gauss rules.

    Each panel is integrated with Gauss-Legendre rules of `order` and
    2*`order` points; their difference is the panel error estimate. Panels
    whose estimate exceeds their share of `tol` (by length) are bisected.
    Accepted panel values are summed with math.fsum, so the result does not
    depend on evaluation order.
    """
    x1, w1 = _legendre(order)
    x2, w2 = _legendre(2 * order)
    breaks = np.asarray(breaks, dtype=float)
    lo, hi = breaks[:-1], breaks[1:]
    total_len = float(breaks[-1] - breaks[0])
    if total_len == 0:
        return QuadResult(0j, 0.0, 0)
    re_parts: list[float] = []
    im_parts: list[float] = []
    err_parts: list[float] = []
    n_panels = 0
    for _ in range(max_rounds):
        mid = 0.5 * (lo + hi)
        half = 0.5 * (hi - lo)
        g1 = (f(mid[:, None] + half[:, None] * x1) * w1).sum(axis=1) * half
        g2 = (f(mid[:, None] + half[:, None] * x2) * w2).sum(axis=1) * half
        err = np.abs(g2 - g1)
        share = tol * (hi - lo) / total_len
        ok = err <= share
        n_panels += int(ok.sum())
        g2 = np.asarray(g2, dtype=complex)
        re_parts.extend(g2.real[ok].tolist())
        im_parts.extend(g2.imag[ok].tolist())
        err_parts.extend(err[ok].tolist())
        if ok.all():
            return QuadResult(complex(math.fsum(re_parts), math.fsum(im_parts)), math.fsum(err_parts), n_panels)
        lo_bad, hi_bad, mid_bad = lo[~ok], hi[~ok], mid[~ok]
        lo = np.concatenate([lo_bad, mid_bad])
        hi = np.concatenate([mid_bad, hi_bad])
    raise QuadratureError(f"no convergence to {tol} after {max_rounds} bisection rounds")


def numeric_fourier_phi(s: float, cutoff: float = 1e4, tol: float = 1e-3) -> float:
    """Truncated transform int_{-T}^{T} phi(y) e(s y) dy by quadrature.

    phi is even, so only the cosine part survives. The neglected tails
    contribute at most 1/(2T); that is added to the error estimate, and the
    call fails when the estimate exceeds tol.
    """
    if cutoff < 1e3:
        raise ValueError(f"cutoff must be >= 1e3, got {cutoff}")
    if tol <= 0:
        raise ValueError("tol must be positive")
    tail = 1.0 / (2 * cutoff)
    quad_tol = tol - tail
    if quad_tol <= 0:
        raise QuadratureError(f"tail bound {tail} alone exceeds tol {tol}")
    breaks = np.arange(0.0, math.floor(cutoff) + 1.0)
    if breaks[-1] < cutoff:
        breaks = np.append(breaks, cutoff)
    res = adaptive_gauss(lambda y: phi(y) * np.cos(TWO_PI * s * y), breaks, quad_tol / 2)
    if 2 * res.error + tail > tol:
        raise QuadratureError(f"error estimate {2 * res.error + tail} exceeds {tol}")
    return 2 * res.value.real


def r_star(r: int, j: int) -> int:
    """r / gcd(r, j); gcd(r, 0) = r, so j = 0 gives 1."""
    return r // math.gcd(r, j)


def oscillatory_integral(j: int, l: int, r_star: int, z: float, q0: float, tol: float = 1e-8) -> complex:
    """int_{Q0}^{2Q0} e(j y z - l sqrt(y) / r*) dy by adaptive quadrature.

    Panels are sized to at most a quarter period of the phase.
    """
    if q0 < 1 or tol <= 0 or r_star < 1:
        raise ValueError("need q0 >= 1, tol > 0, r_star >= 1")
    a, b = float(q0), 2.0 * float(q0)
    slope = abs(j * z) + abs(l) / (2 * r_star * math.sqrt(a))
    n_panels = max(4, math.ceil(4 * slope * (b - a)))
    breaks = np.linspace(a, b, n_panels + 1)

    def f(y):
        return np.exp(1j * TWO_PI * (j * z * y - l * np.sqrt(y) / r_star))

    res = adaptive_gauss(f, breaks, tol)
    if res.error > tol:
        raise QuadratureError(f"error estimate {res.error} exceeds {tol}")
    return res.value


def integral_case_bounds(j: int, l: int, r_star: int, z: float, q0: float) -> float:
    """Case bound on |oscillatory_integral|, with explicit constants.

    (0, 0): Q0.  (j, 0): 1/(pi |j| z), exact for a linear phase.
    (0, l): (4/pi) sqrt(Q0) r* / |l|, first-derivative test.
    (j, l): 8 sqrt(r*) Q0^(3/4) / sqrt(|l|), second-derivative test.
    """
    if j == 0 and l == 0:
        return float(q0)
    if l == 0:
        return math.inf if z == 0 else 1.0 / (math.pi * abs(j * z))
    if j == 0:
        return FIRST_DERIV_CONST * math.sqrt(q0) * r_star / abs(l)
    return SECOND_DERIV_CONST * math.sqrt(r_star) * q0**0.75 / math.sqrt(abs(l))


@dataclass(frozen=True)
class PoissonCheck:
    w: float
    c: float
    lhs: float
    rhs: float
    tail_bound: float

    @property
    def diff(self) -> float:
        return abs(self.lhs - self.rhs)


def poisson_check(w: float, c: float, tail_tol: float = 2e-7, chunk: int = 1 << 20) -> PoissonCheck:
    """Both sides of sum_n phi((n - c)/w) = w sum_m e(m c) phi_hat(m w).

    The right side is a finite sum (phi_hat vanishes for |m w| >= 1). The
    left side is summed over |n - c| <= M, with M chosen so that the
    neglected part, at most w^2 / (2M), stays below tail_tol.
    """
    if w <= 0:
        raise ValueError("w must be positive")
    m_max = math.ceil(1 / w)
    rhs = math.fsum(
        w * math.cos(TWO_PI * m * c) * phi_hat(m * w) for m in range(-m_max, m_max + 1)
    )
    big = math.ceil(w * w / (2 * tail_tol)) + math.ceil(abs(c)) + 1
    parts = []
    start = -big
    while start <= big:
        n = np.arange(start, min(start + chunk, big + 1), dtype=float)
        parts.append(math.fsum(phi((n - c) / w).tolist()))
        start += chunk
    lhs = math.fsum(parts)
    return PoissonCheck(w, c, lhs, rhs, w * w / (2 * (big - abs(c) - 1)))
