"""Classical oracles: division by an invariant integer, modular helpers and
Shor post-processing."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .errors import InvalidDivisor, NoInverse, QuotientOverflow


@dataclass(frozen=True)
class DividerConstants:
    """Per-divisor constants hardwired into the quantum divider."""

    n: int
    d: int
    l: int
    m_prime: int
    d_norm: int
    d_c: int


def div_constants(d: int, n: int) -> DividerConstants:
    if n < 1 or not 0 < d < (1 << n):
        raise InvalidDivisor(f"divisor must satisfy 0 < d < 2^{n}, got {d}")
    l = d.bit_length()  # 1 + floor(log2 d)
    m_prime = ((1 << n) * ((1 << l) - d) - 1) // d
    d_norm = d << (n - l)
    return DividerConstants(n, d, l, m_prime, d_norm, d_norm - (1 << n))


# n-bit word operations.  Words are stored as non-negative ints below 2^width;
# signed words use two's complement.


def _mask(width: int) -> int:
    return (1 << width) - 1


def sll(v: int, i: int, width: int) -> int:
    return (v << i) & _mask(width)


def srl(v: int, i: int, width: int) -> int:
    return (v & _mask(width)) >> i


def sra(v: int, i: int, width: int) -> int:
    return sll(to_signed(v, width) >> i, 0, width)


def xsign(v: int, width: int) -> int:
    """All-ones (i.e. -1) when the sign bit is set, else 0."""
    return _mask(width) if (v >> (width - 1)) & 1 else 0


def high(v: int, n: int) -> int:
    return (v >> n) & _mask(n)


def low(v: int, n: int) -> int:
    return v & _mask(n)


def to_signed(v: int, width: int) -> int:
    v &= _mask(width)
    return v - (1 << width) if v >> (width - 1) else v


def gm_divide(z: int, d: int, n: int) -> tuple[int, int]:
    """Quotient and remainder of ``z / d`` through the word-level
    Granlund-Montgomery sequence (dividend 2n bits, quotient n bits)."""
    k = div_constants(d, n)
    if not 0 <= z < (d << n):
        raise QuotientOverflow(f"z={z} needs 0 <= z < d*2^n = {d << n}")
    w, dw = n, 2 * n
    n2 = (sll(high(z, n), n - k.l, w) + srl(low(z, n), k.l, w)) & _mask(w)
    n10 = sll(low(z, n), n - k.l, w)
    sign = xsign(n10, w)  # all-ones when the top bit of n10 is set
    n1 = 1 if sign else 0
    n_adj = (n10 + (sign & k.d_c)) & _mask(w)
    q1 = (n2 + high(k.m_prime * ((n2 + n1) & _mask(w)) + n_adj, n)) & _mask(w)
    not_q1 = _mask(w) - q1  # 2^n - 1 - q1
    dr = (z - (d << n) + not_q1 * d) & _mask(dw)
    hi_dr = high(dr, n)  # all-ones iff dr < 0
    q = (hi_dr - not_q1) & _mask(w)
    r = (low(dr, n) + ((k.d - (1 << n)) & hi_dr)) & _mask(w)
    return q, r


def mod_inverse(a: int, modulus: int) -> int:
    g = gcd(a, modulus)
    if g != 1:
        raise NoInverse(a, modulus, g)
    return pow(a, -1, modulus)


def mod_exp_constants(a: int, modulus: int, n: int) -> list[int]:
    """``a^(2^i) mod N`` for i = 0 .. 2n-1 by repeated squaring."""
    out = []
    v = a % modulus
    for _ in range(2 * n):
        out.append(v)
        v = v * v % modulus
    return out


def continued_fraction_period(y: int, bits: int, modulus: int) -> int | None:
    """Smallest convergent denominator 1 < r < N of y/2^bits within tolerance."""
    if not 0 <= y < (1 << bits):
        raise ValueError(f"y must lie in [0, 2^{bits})")
    target = Fraction(y, 1 << bits)
    tol = Fraction(1, 1 << (bits // 2 + 1))
    # convergents from the continued-fraction terms of y / 2^bits
    h_prev, h = 0, 1
    k_prev, k = 1, 0
    num, den = y, 1 << bits
    while den:
        term, rem = divmod(num, den)
        h_prev, h = h, term * h + h_prev
        k_prev, k = k, term * k + k_prev
        if k >= modulus:
            break
        if k > 1 and abs(target - Fraction(h, k)) <= tol:
            return k
        num, den = den, rem
    return None


def extract_factors(a: int, r: int, modulus: int) -> tuple[int, int] | None:
    if r <= 0 or r % 2:
        return None
    half = pow(a, r // 2, modulus)
    if half == modulus - 1:
        return None
    p = gcd(half - 1, modulus)
    q = gcd(half + 1, modulus)
    if 1 < p < modulus and 1 < q < modulus:
        return (min(p, q), max(p, q))
    return None


def is_prime(v: int) -> bool:
    if v < 2:
        return False
    i = 2
    while i * i <= v:
        if v % i == 0:
            return False
        i += 1
    return True


def prime_power_base(v: int) -> int | None:
    """Return p when ``v = p**k`` for a prime p and k >= 1, else None."""
    for k in range(v.bit_length(), 0, -1):
        root = round(v ** (1.0 / k))
        for cand in (root - 1, root, root + 1):
            if cand > 1 and cand**k == v and is_prime(cand):
                return cand
    return None


@dataclass(frozen=True)
class ShorOutcome:
    a: int
    N: int
    measured_bits: int
    period_candidate: int | None = None
    factors: tuple[int, int] | None = None

    def __post_init__(self) -> None:
        if self.factors is not None:
            p, q = self.factors
            if p * q != self.N or p <= 1 or q <= 1:
                raise ValueError(f"bad factors {self.factors} for {self.N}")
