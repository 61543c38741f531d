"""Quantum division by a classical constant (Granlund-Montgomery magic numbers).

Registers (n qubits each unless noted, LSB first):

  reg1, reg0  dividend z = reg0:reg1 on entry, remainder in reg1 on exit
  reg2        quotient
  reg3        saved q1
  reg4        n2 (+ n1)
  reg5:reg6   2n-bit product m'(n2 + n1) + n_adj; reg6 holds n10 first
  aqbit       sign bit n1

Every ancilla (reg3..reg6, aqbit) and reg0 return to zero.
"""

from __future__ import annotations

from dataclasses import dataclass

from .adders import ZERO, emit_cphi_add_const, emit_phi_add_const, emit_phi_add_generic, emit_qft
from .classical import DividerConstants, div_constants
from .core import Circuit, CircuitBuilder, Register, RegisterMap, invert_circuit
from .mac import emit_phimac_uncontrolled

MODES = ("generic", "constrained")


@dataclass(frozen=True)
class DividerLayout:
    reg0: tuple[int, ...]
    reg1: tuple[int, ...]
    reg2: tuple[int, ...]
    reg3: tuple[int, ...]
    reg4: tuple[int, ...]
    reg5: tuple[int, ...]
    reg6: tuple[int, ...]
    aqbit: int

    @classmethod
    def contiguous(cls, n: int, base: int = 0) -> DividerLayout:
        def reg(i: int) -> tuple[int, ...]:
            return tuple(range(base + i * n, base + (i + 1) * n))

        # reg1 first so the dividend reg1+reg0 is one contiguous LSB-first run
        return cls(reg(1), reg(0), reg(2), reg(3), reg(4), reg(5), reg(6), base + 7 * n)

    @property
    def dividend(self) -> tuple[int, ...]:
        return self.reg1 + self.reg0

    @property
    def product(self) -> tuple[int, ...]:
        return self.reg6 + self.reg5

    def registers(self) -> list[Register]:
        return [
            Register("z", self.dividend, "dividend"),
            Register("q", self.reg2, "quotient"),
            Register("reg3", self.reg3, "ancilla"),
            Register("reg4", self.reg4, "ancilla"),
            Register("reg5", self.reg5, "ancilla"),
            Register("reg6", self.reg6, "ancilla"),
            Register("aqbit", (self.aqbit,), "ancilla"),
        ]


def emit_gmphidiv(b: CircuitBuilder, k: DividerConstants, lay: DividerLayout) -> None:
    n, l, d = k.n, k.l, k.d
    r0, r1, r2, r3, r4, r5, r6, a = (
        list(lay.reg0), list(lay.reg1), list(lay.reg2), list(lay.reg3),
        list(lay.reg4), list(lay.reg5), list(lay.reg6), lay.aqbit,
    )
    z, prod = lay.dividend, lay.product
    src_high = [ZERO] * (n - l) + r0[:l]  # SLL(HIGH(z), n-l)
    src_srl = r1[l:] + [ZERO] * l  # SRL(LOW(z), l)
    src_n10 = [ZERO] * (n - l) + r1[:l]  # SLL(LOW(z), n-l)

    with b.block("div.fwd.n2_n10"):
        emit_qft(b, r4)
        emit_qft(b, r6)
        emit_phi_add_generic(b, src_high, r4)
        emit_phi_add_generic(b, src_srl, r4)
        emit_phi_add_generic(b, src_n10, r6)
        emit_qft(b, r6, inverse=True)
    with b.block("div.fwd.n1"):
        b.cx(r6[-1], a)
    with b.block("div.fwd.nadj"):
        emit_qft(b, r6)
        emit_cphi_add_const(b, a, r6, k.d_c)
        emit_cphi_add_const(b, a, r4, 1)
        emit_qft(b, r4, inverse=True)
        emit_qft(b, r6, inverse=True)
    with b.block("div.fwd.q1"):
        emit_qft(b, prod)
        emit_phimac_uncontrolled(b, k.m_prime, r4, prod)
        emit_qft(b, prod, inverse=True)
        for s, t in zip(r5, r2):
            b.cx(s, t)
        emit_qft(b, r2)
        emit_phi_add_generic(b, r4, r2)
        emit_cphi_add_const(b, a, r2, -1)
        emit_qft(b, r2, inverse=True)
        for s, t in zip(r2, r3):
            b.cx(s, t)
    with b.block("div.fwd.dr"):
        emit_qft(b, z)
        emit_phimac_uncontrolled(b, -d, r2, z)
        emit_phi_add_const(b, z, -d)
        emit_qft(b, z, inverse=True)
    with b.block("div.fwd.q"):
        msb = r0[-1]
        emit_qft(b, r2)
        b.x(msb)
        emit_cphi_add_const(b, msb, r2, 1)
        b.x(msb)
        emit_qft(b, r2, inverse=True)
    with b.block("div.fwd.z"):
        emit_qft(b, z)
        emit_phi_add_const(b, z, d)
        emit_phimac_uncontrolled(b, d, r3, z)
        emit_qft(b, z, inverse=True)

    # Ancilla clean-up, done while z is still available in reg0:reg1.
    with b.block("div.restore.reg3"):
        emit_qft(b, r3)
        emit_phi_add_generic(b, r4, r3, sign=-1)
        emit_cphi_add_const(b, a, r3, 1)
        emit_qft(b, r3, inverse=True)
        for s, t in zip(r5, r3):
            b.cx(s, t)
    with b.block("div.restore.reg5"):
        emit_qft(b, prod)
        emit_phimac_uncontrolled(b, -k.m_prime, r4, prod)
        emit_qft(b, prod, inverse=True)
    with b.block("div.restore.reg4"):
        emit_qft(b, r4)
        emit_phi_add_generic(b, src_high, r4, sign=-1)
        emit_phi_add_generic(b, src_srl, r4, sign=-1)
        emit_cphi_add_const(b, a, r4, -1)
    with b.block("div.restore.reg6"):
        emit_qft(b, r6)
        emit_cphi_add_const(b, a, r6, -k.d_c)
        emit_phi_add_generic(b, src_n10, r6, sign=-1)
        emit_qft(b, r6, inverse=True)
    with b.block("div.restore.aqbit"):
        emit_phi_add_generic(b, src_n10, r4)
        emit_qft(b, r4, inverse=True)
        b.cx(r4[-1], a)
        emit_qft(b, r4)
        emit_phi_add_generic(b, src_n10, r4, sign=-1)
        emit_qft(b, r4, inverse=True)

    with b.block("div.fwd.r"):
        emit_qft(b, z)
        emit_phimac_uncontrolled(b, -d, r2, z)
        emit_qft(b, z, inverse=True)


def build_gmphidiv(n: int, d: int, mode: str = "constrained") -> Circuit:
    """Divider on 7n+1 qubits.

    ``generic``: dividend below 2^n in reg1 (reg0 zero).  ``constrained``:
    full 2n-bit dividend with quotient below 2^n.  Both share one network;
    the mode fixes the input contract checked by :func:`valid_dividend`.
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    k = div_constants(d, n)
    lay = DividerLayout.contiguous(n)
    b = CircuitBuilder(7 * n + 1, RegisterMap(lay.registers()))
    emit_gmphidiv(b, k, lay)
    return b.freeze()


def build_gmphidiv_inverse(n: int, d: int, mode: str = "constrained") -> Circuit:
    return invert_circuit(build_gmphidiv(n, d, mode))


def dividend_bound(n: int, d: int, mode: str) -> int:
    """Exclusive upper bound on valid dividends for ``mode``."""
    return (1 << n) if mode == "generic" else d << n


def valid_dividend(z: int, n: int, d: int, mode: str) -> bool:
    return 0 <= z < dividend_bound(n, d, mode)
