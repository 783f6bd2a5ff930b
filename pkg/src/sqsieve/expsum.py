"""Trigonometric polynomials S(alpha) = sum_{n<=N} a_n e(n alpha) and sieve sums.

Two evaluation routes exist on purpose. eval_s sums the terms directly,
reducing n*alpha mod 1 before taking exp. The sieve sums instead fold the
coefficients mod q^2 and take one DFT per modulus, which yields S(a/q^2) for
every a at once. Tests hold one route against the other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence, Union

import numpy as np

from .farey import block_moduli

Real = Union[float, int, Fraction]
TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class CoefficientSequence:
    coeffs: np.ndarray
    z_value: float = field(init=False)

    def __post_init__(self):
        c = np.ascontiguousarray(self.coeffs, dtype=np.complex128)
        if c.ndim != 1 or len(c) < 1:
            raise ValueError("need a non-empty 1-d coefficient array")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)
        object.__setattr__(self, "z_value", math.fsum((c.real**2 + c.imag**2).tolist()))

    @property
    def n_max(self) -> int:
        return len(self.coeffs)

    def scaled(self, factor: complex) -> "CoefficientSequence":
        return CoefficientSequence(self.coeffs * factor)


def ones(n: int) -> CoefficientSequence:
    return CoefficientSequence(np.ones(n, dtype=np.complex128))


def random_phase(n: int, seed: int = 0) -> CoefficientSequence:
    """Unit-modulus coefficients e(theta_n), theta_n uniform; Z == N up to rounding."""
    rng = np.random.default_rng(seed)
    return CoefficientSequence(np.exp(1j * TWO_PI * rng.random(n)))


GENERATORS = {"ones": lambda n, seed: ones(n), "random": random_phase}


def generate(name: str, n: int, seed: int = 0) -> CoefficientSequence:
    try:
        gen = GENERATORS[name]
    except KeyError:
        raise ValueError(f"unknown generator {name!r}; choose from {sorted(GENERATORS)}") from None
    return gen(n, seed)


def load_coefficients(path: str | Path) -> CoefficientSequence:
    """Read one "re im" pair per line; blank lines and '#' comments are skipped."""
    vals = []
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ValueError(f"{path}:{lineno}: expected 're im', got {line!r}")
        vals.append(complex(float(parts[0]), float(parts[1])))
    return CoefficientSequence(np.array(vals))


def save_coefficients(seq: CoefficientSequence, path: str | Path) -> None:
    lines = [f"{c.real:.17g} {c.imag:.17g}" for c in seq.coeffs]
    Path(path).write_text("\n".join(lines) + "\n")


def _phases(n: np.ndarray, alpha: Real) -> np.ndarray:
    """n*alpha mod 1; exact integer reduction for rationals."""
    if isinstance(alpha, Fraction) or isinstance(alpha, int):
        fa = Fraction(alpha)
        num, den = fa.numerator % fa.denominator, fa.denominator
        if den < 2**31:
            return (n * num % den) / den
        alpha = float(fa)
    alpha -= math.floor(alpha)
    return np.mod(n * alpha, 1.0)


def eval_s(seq: CoefficientSequence, alpha: Real) -> complex:
    """S(alpha) by direct summation (pairwise-summed in numpy)."""
    n = np.arange(1, seq.n_max + 1, dtype=np.int64)
    terms = seq.coeffs * np.exp(1j * TWO_PI * _phases(n, alpha))
    return complex(terms.real.sum(), terms.imag.sum())


def eval_s_many(seq: CoefficientSequence, alphas: Iterable[Real]) -> np.ndarray:
    return np.array([eval_s(seq, a) for a in alphas])


def fold(seq: CoefficientSequence, m: int) -> np.ndarray:
    """A_rho = sum of a_n over n = rho (mod m), rho = 0..m-1."""
    n = np.arange(1, seq.n_max + 1, dtype=np.int64)
    out = np.zeros(m, dtype=np.complex128)
    np.add.at(out, n % m, seq.coeffs)
    return out


def values_at_modulus(seq: CoefficientSequence, m: int) -> np.ndarray:
    """S(a/m) for a = 0..m-1 via one inverse DFT of the folded coefficients."""
    return np.fft.ifft(fold(seq, m)) * m


def modulus_energy(seq: CoefficientSequence, q: int) -> float:
    """sum over a in [1, q^2] with gcd(a, q) = 1 of |S(a/q^2)|^2."""
    m = q * q
    vals = values_at_modulus(seq, m)
    a = np.arange(m, dtype=np.int64)
    # a = 0 stands for a = q^2, which is only reduced when q = 1
    mask = np.gcd(a, q) == 1
    if q == 1:
        mask[0] = True
    return math.fsum((np.abs(vals[mask]) ** 2).tolist())


def _total(seq: CoefficientSequence, qs: Sequence[int]) -> float:
    return math.fsum(modulus_energy(seq, q) for q in qs)


def sieve_sum_squares(seq: CoefficientSequence, q_max: int) -> float:
    """sum_{q <= Q} sum_{a <= q^2, (a,q)=1} |S(a/q^2)|^2."""
    if q_max < 1:
        raise ValueError(f"q_max must be >= 1, got {q_max}")
    return _total(seq, range(1, q_max + 1))


def sieve_sum_dyadic(seq: CoefficientSequence, q0: Real) -> float:
    """The sieve sum restricted to the block Q0 <= q^2 <= 2*Q0."""
    if not q0 >= 1:
        raise ValueError(f"q0 must be >= 1, got {q0}")
    return _total(seq, block_moduli(q0))


def dyadic_cover(q_max: int) -> list[int]:
    """Bases Q0 = 2^i <= q_max^2. Their blocks cover every modulus up to q_max.

    Neighbouring blocks can share a square endpoint; dyadic_blocks removes the overlap.
    """
    bases = []
    q0 = 1
    while q0 <= q_max * q_max:
        bases.append(q0)
        q0 *= 2
    return bases


def dyadic_blocks(q_max: int) -> list[tuple[int, list[int]]]:
    """Disjoint (Q0, moduli) pieces covering q = 1..q_max."""
    seen: set[int] = set()
    out = []
    for q0 in dyadic_cover(q_max):
        qs = [q for q in block_moduli(q0) if q <= q_max and q not in seen]
        seen.update(qs)
        out.append((q0, qs))
    return out


def sieve_sum_by_blocks(seq: CoefficientSequence, q_max: int) -> list[tuple[int, float]]:
    """Per-block contributions of a dyadic decomposition of the full sieve sum."""
    return [(q0, _total(seq, qs)) for q0, qs in dyadic_blocks(q_max)]


def parseval_average(seq: CoefficientSequence, m: int | None = None) -> float:
    """Mean of |S(j/M)|^2 over j = 0..M-1, evaluated directly; equals Z for M > N."""
    if m is None:
        m = 2 * seq.n_max + 1
    vals = eval_s_many(seq, (Fraction(j, m) for j in range(m)))
    return math.fsum((np.abs(vals) ** 2).tolist()) / m
