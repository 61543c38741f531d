"""Semiclassical order finding with a single recycled control qubit.

Each controlled multiplier is applied as the map ``y -> c*y mod N`` on the
work-register branch, which the circuit-level tests establish for the
corresponding ``build_phimul_mod`` blocks.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd

import numpy as np

from ..classical import (
    ShorOutcome,
    continued_fraction_period,
    extract_factors,
    mod_exp_constants,
    is_prime,
    prime_power_base,
)
from ..core import Angle


@dataclass
class SparseBranchState:
    """Work-register amplitudes keyed by basis value; the control is reset to |0>."""

    amplitudes: dict[int, complex] = field(default_factory=lambda: {1: 1.0 + 0j})

    def total_probability(self) -> float:
        return sum(abs(v) ** 2 for v in self.amplitudes.values())


def correction_angle(bits: list[int]) -> Angle:
    """Phase that removes the contribution of earlier (less significant) bits."""
    k = len(bits)
    low = sum(b << m for m, b in enumerate(bits))
    return Angle(-low, k + 1)


def functional_run_shor_step(
    state: SparseBranchState,
    cu_constant: int,
    modulus: int,
    phase_correction: Angle,
    rng: np.random.Generator,
) -> tuple[int, SparseBranchState]:
    """Control in |+>, controlled multiply, phase correction, H, measure, reset."""
    phase = np.exp(1j * phase_correction.radians)
    branch0 = state.amplitudes
    branch1: dict[int, complex] = {}
    for y, amp in branch0.items():
        key = cu_constant * y % modulus
        branch1[key] = branch1.get(key, 0) + amp * phase
    # after H the control reads m with amplitude (b0 + (-1)^m b1) / 2
    outcomes = []
    for sign in (1, -1):
        amps = {}
        for y in branch0.keys() | branch1.keys():
            v = (branch0.get(y, 0) + sign * branch1.get(y, 0)) / 2
            if abs(v) > 1e-15:
                amps[y] = v
        outcomes.append(amps)
    p1 = sum(abs(v) ** 2 for v in outcomes[1].values())
    p0 = sum(abs(v) ** 2 for v in outcomes[0].values())
    bit = int(rng.random() * (p0 + p1) < p1)
    norm = np.sqrt(p1 if bit else p0)
    return bit, SparseBranchState({y: v / norm for y, v in outcomes[bit].items()})


def measure_phase(a: int, modulus: int, n: int, rng: np.random.Generator) -> int:
    """One 2n-step run; returns the measured integer y (bit k is step k)."""
    consts = mod_exp_constants(a, modulus, n)
    state = SparseBranchState()
    bits: list[int] = []
    for k in range(2 * n):
        bit, state = functional_run_shor_step(state, consts[2 * n - 1 - k], modulus, correction_angle(bits), rng)
        bits.append(bit)
    return sum(b << m for m, b in enumerate(bits))


def order_from_measurement(y: int, a: int, modulus: int, n: int, max_multiple: int = 4) -> int | None:
    r = continued_fraction_period(y, 2 * n, modulus)
    if r is None:
        return None
    for k in range(1, max_multiple + 1):
        if pow(a, r * k, modulus) == 1:
            return r * k
    return None


def run_shor(modulus: int, a: int, rng: np.random.Generator, n: int | None = None) -> ShorOutcome:
    """One order-finding attempt with base ``a``."""
    n = n or modulus.bit_length()
    g = gcd(a, modulus)
    if g != 1:
        return ShorOutcome(a, modulus, 0, None, (min(g, modulus // g), max(g, modulus // g)))
    y = measure_phase(a, modulus, n, rng)
    r = order_from_measurement(y, a, modulus, n)
    factors = extract_factors(a, r, modulus) if r else None
    return ShorOutcome(a, modulus, y, r, factors)


def classical_shortcut(modulus: int) -> tuple[int, int] | None:
    """Factors found without order finding (even N or prime power)."""
    if modulus % 2 == 0 and modulus > 2:
        return (2, modulus // 2)
    p = prime_power_base(modulus)
    if p is not None and p != modulus:
        return (p, modulus // p)
    return None


def factor(modulus: int, rng: np.random.Generator, attempts: int = 20) -> tuple[tuple[int, int] | None, list[ShorOutcome]]:
    """Repeated attempts with random bases; returns the factor pair (or None) and the log."""
    if modulus < 4 or is_prime(modulus):
        raise ValueError(f"{modulus} has no nontrivial factorization")
    quick = classical_shortcut(modulus)
    if quick:
        return quick, []
    log = []
    for _ in range(attempts):
        a = int(rng.integers(2, modulus - 1))
        out = run_shor(modulus, a, rng)
        log.append(out)
        if out.factors:
            return out.factors, log
    return None, log
