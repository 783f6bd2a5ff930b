"""Integer utilities: factorization, omega, modular inverses and the f_t/g_t split.

Everything here works on plain Python ints but enforces the signed 64-bit
range, so an out-of-range input raises instead of quietly growing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

INT64_MAX = 2**63 - 1
FACTOR_LIMIT = 2**62

# offsets of the residues mod 30 coprime to 30, starting at 7
_WHEEL = (4, 2, 4, 2, 4, 6, 2, 6)
# trial division stops here; the remaining cofactor goes to Miller-Rabin / rho
_TRIAL_BOUND = 1 << 16
# deterministic for n < 3.3e24
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


class NotInvertibleError(ArithmeticError):
    """Raised when a modular inverse does not exist."""


def check_int64(*values: int) -> None:
    for v in values:
        if not -INT64_MAX - 1 <= v <= INT64_MAX:
            raise OverflowError(f"{v} outside the signed 64-bit range")


@dataclass(frozen=True)
class FactoredInt:
    n: int
    factors: tuple[tuple[int, int], ...]

    def __post_init__(self):
        prod = 1
        last = 1
        for p, e in self.factors:
            if p <= last or e < 1:
                raise ValueError(f"malformed factorization {self.factors}")
            last = p
            prod *= p**e
        if prod != self.n:
            raise ValueError(f"factors multiply to {prod}, not {self.n}")

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)


@dataclass(frozen=True)
class SplitFactors:
    """t | q^2 exactly when f_t | q; g_t = f_t^2 / t is squarefree."""

    t: int
    f_t: int
    g_t: int


def is_probable_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_brent(n: int) -> int:
    """Return a nontrivial factor of the odd composite n."""
    for c in range(1, 100):
        y, m, g, r, q = 2, 128, 1, 1, 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
    raise ArithmeticError(f"rho failed on {n}")  # pragma: no cover


def _split_large(n: int, out: dict[int, int]) -> None:
    if n == 1:
        return
    if is_probable_prime(n):
        out[n] = out.get(n, 0) + 1
        return
    d = _pollard_brent(n)
    _split_large(d, out)
    _split_large(n // d, out)


@lru_cache(maxsize=1 << 16)
def factorize(n: int) -> FactoredInt:
    """Prime factorization by wheel-30 trial division.

    Trial division runs up to min(sqrt(n), 2**16); a cofactor left over
    after that is finished with deterministic Miller-Rabin and Pollard-Brent.
    """
    if n < 1:
        raise ValueError(f"factorize needs n >= 1, got {n}")
    if n >= FACTOR_LIMIT:
        raise OverflowError(f"factorize needs n < 2**62, got {n}")
    found: dict[int, int] = {}
    m = n
    for p in (2, 3, 5):
        while m % p == 0:
            found[p] = found.get(p, 0) + 1
            m //= p
    p, i = 7, 0
    while p * p <= m and p <= _TRIAL_BOUND:
        while m % p == 0:
            found[p] = found.get(p, 0) + 1
            m //= p
        p += _WHEEL[i]
        i = (i + 1) & 7
    if m > 1:
        if p * p > m:
            found[m] = found.get(m, 0) + 1
        else:
            _split_large(m, found)
    return FactoredInt(n, tuple(sorted(found.items())))


def omega(n: int) -> int:
    """Number of distinct prime divisors of n."""
    return len(factorize(n).factors)


def mod_inverse(a: int, m: int) -> int:
    """Inverse of a modulo m, in [1, m)."""
    if m < 2:
        raise ValueError(f"modulus must be >= 2, got {m}")
    check_int64(a, m)
    if math.gcd(a, m) != 1:
        raise NotInvertibleError(f"{a} is not invertible mod {m}")
    return pow(a, -1, m)


@lru_cache(maxsize=1 << 14)
def split_ft_gt(t: int) -> SplitFactors:
    """Smallest f_t with (t | q^2 iff f_t | q), and g_t = f_t^2 / t."""
    if t < 1:
        raise ValueError(f"split_ft_gt needs t >= 1, got {t}")
    f = g = 1
    for p, v in factorize(t).factors:
        u = v + (v & 1)
        f *= p ** (u // 2)
        g *= p ** (u - v)
    return SplitFactors(t, f, g)


def is_squarefree(n: int) -> bool:
    return all(e == 1 for _, e in factorize(n).factors)
