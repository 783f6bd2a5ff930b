"""Square roots of units modulo k and counts for g*x^2 = c (mod k)."""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from .arith import check_int64, factorize, mod_inverse

BRUTE_FORCE_LIMIT = 10**6


class UnsupportedCongruence(ValueError):
    """The congruence falls outside the cases this module solves."""


def _sqrt_mod_prime(a: int, p: int) -> int | None:
    """One root of x^2 = a (mod p) for an odd prime p and a unit a, or None."""
    a %= p
    if pow(a, (p - 1) // 2, p) != 1:
        return None
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    # Tonelli-Shanks
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return r


def _roots_odd_prime_power(a: int, p: int, e: int) -> list[int]:
    x = _sqrt_mod_prime(a, p)
    if x is None:
        return []
    pk = p
    for _ in range(1, e):
        pk *= p
        # Hensel: f'(x) = 2x is a unit, so the lift is unique
        x = (x - (x * x - a) * pow(2 * x, -1, pk)) % pk
    return sorted({x, (-x) % pk})


def _roots_power_of_two(a: int, e: int) -> list[int]:
    m = 1 << e
    a %= m
    if e == 1:
        return [1]
    if e == 2:
        return [1, 3] if a == 1 else []
    if a % 8 != 1:
        return []
    x = 1
    for i in range(3, e):
        # x^2 = a mod 2^i; fix the next bit
        if (x * x - a) % (1 << (i + 1)):
            x += 1 << (i - 1)
    half = m >> 1
    return sorted({x % m, (-x) % m, (x + half) % m, (half - x) % m})


def _crt_pair(r1: list[int], m1: int, r2: list[int], m2: int) -> list[int]:
    inv = pow(m1, -1, m2)
    out = []
    for x in r1:
        for y in r2:
            out.append(x + m1 * ((y - x) * inv % m2))
    return out


@lru_cache(maxsize=1 << 16)
def _square_roots_cached(l: int, k: int) -> tuple[int, ...]:
    roots, mod = [0], 1
    for p, e in factorize(k).factors:
        pe = p**e
        local = _roots_power_of_two(l, e) if p == 2 else _roots_odd_prime_power(l, p, e)
        if not local:
            return ()
        roots = _crt_pair(roots, mod, local, pe)
        mod *= pe
    roots.sort()
    for x in roots:
        if (x * x - l) % k:
            raise AssertionError(f"bad root {x} of x^2={l} mod {k}")  # pragma: no cover
    return tuple(roots)


def square_roots_mod(l: int, k: int) -> list[int]:
    """All x in [0, k) with x^2 = l (mod k), for l coprime to k.

    Odd prime powers use Tonelli-Shanks plus Hensel lifting; powers of two
    are classified directly (at most 4 roots); the pieces are glued by CRT.
    """
    if k < 1:
        raise ValueError(f"modulus must be >= 1, got {k}")
    check_int64(l, k)
    if math.gcd(l, k) != 1:
        raise UnsupportedCongruence(f"gcd({l}, {k}) > 1")
    return list(_square_roots_cached(l % k, k))


def brute_force_count(g: int, c: int, k: int) -> int:
    """Count x in [0, k) with g*x^2 = c (mod k) by scanning."""
    x = np.arange(k, dtype=np.int64)
    return int(np.count_nonzero((x * x % k) * (g % k) % k == c % k))


def count_scaled_roots(g: int, c: int, k: int) -> int:
    """Number of x in [0, k) with g*x^2 = c (mod k)."""
    if k < 1:
        raise ValueError(f"modulus must be >= 1, got {k}")
    check_int64(g, c, k)
    if k == 1:
        return 1
    if math.gcd(g, k) == 1:
        l = c * mod_inverse(g, k) % k
        if math.gcd(l, k) == 1:
            return len(_square_roots_cached(l, k))
    elif math.gcd(c, k) == 1:
        # a common factor of g and k would have to divide c
        return 0
    if k > BRUTE_FORCE_LIMIT:
        raise UnsupportedCongruence(
            f"non-unit case g={g}, c={c} needs brute force, k={k} too large"
        )
    return brute_force_count(g, c, k)
