"""Controlled modular multiplier/accumulators, in-place modular multipliers and
the modular exponentiation circuit.

Layouts (qubit 0 is the control ``c``):

  version 2: c | y (n) | r (n)  | divider at word n   (7n+1)  -> 9n+2
  version 1: c | y (n) | r (2n) | divider at word 2n  (14n+1) -> 17n+2

The product a*y accumulates into the divider's dividend.  Version 2 uses the
full 2n-bit dividend reg0:reg1 with the constrained contract (quotient below
2^n); version 1 uses only reg1 of the 2n-word divider (generic contract).
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .adders import emit_qft
from .classical import div_constants, mod_exp_constants, mod_inverse
from .core import Circuit, CircuitBuilder, Register, RegisterMap, invert_circuit
from .divider import DividerLayout, emit_gmphidiv
from .errors import InvalidConstant
from .mac import emit_phimac

VERSIONS = (1, 2)


@dataclass(frozen=True)
class ModmulLayout:
    n: int
    version: int
    control: int
    y: tuple[int, ...]
    r: tuple[int, ...]
    div: DividerLayout

    @classmethod
    def standard(cls, n: int, version: int) -> ModmulLayout:
        if version not in VERSIONS:
            raise ValueError("version must be 1 or 2")
        r_width = n if version == 2 else 2 * n
        y = tuple(range(1, n + 1))
        r = tuple(range(n + 1, n + 1 + r_width))
        word = n if version == 2 else 2 * n
        return cls(n, version, 0, y, r, DividerLayout.contiguous(word, base=n + 1 + r_width))

    @property
    def word(self) -> int:
        return len(self.div.reg1)

    @property
    def width(self) -> int:
        return self.div.aqbit + 1

    @property
    def accumulator(self) -> tuple[int, ...]:
        return self.div.dividend if self.version == 2 else self.div.reg1

    def registers(self) -> RegisterMap:
        regs = [
            Register("c", (self.control,), "control"),
            Register("y", self.y, "multiplicand"),
            Register("r", self.r, "result"),
        ]
        regs += [Register(f"div.{reg.name}", reg.qubits, "ancilla") for reg in self.div.registers()]
        return RegisterMap(regs)

    def ancillae(self) -> list[str]:
        return [name for name in self.registers() if name.startswith("div.")]


def _check_constants(a: int, modulus: int, n: int) -> None:
    if not 0 < modulus < (1 << n):
        raise InvalidConstant(f"modulus must satisfy 0 < N < 2^{n}, got {modulus}")
    if not 0 < a < modulus:
        raise InvalidConstant(f"multiplier must satisfy 0 < a < N, got a={a}, N={modulus}")


def _emit_mac_part(b: CircuitBuilder, a: int, lay: ModmulLayout) -> None:
    acc = lay.accumulator
    emit_qft(b, acc)
    emit_phimac(b, a, lay.control, lay.y, acc[: 2 * lay.n])
    emit_qft(b, acc, inverse=True)


def emit_phimac_mod(b: CircuitBuilder, a: int, modulus: int, lay: ModmulLayout) -> None:
    """r ^= (c ? a*y mod N : 0), leaving every divider qubit at zero."""
    k = div_constants(modulus, lay.word)
    with b.block("macmod.mac"):
        _emit_mac_part(b, a, lay)
    with b.block("macmod.div"):
        emit_gmphidiv(b, k, lay.div)
    with b.block("macmod.copy"):
        for s, t in zip(lay.div.reg1, lay.r):
            b.cx(s, t)
    # undo the divider and the product on the same ancillae
    sub = CircuitBuilder(b.width)
    emit_gmphidiv(sub, k, lay.div)
    with b.block("macmod.div_inv"):
        b.extend(invert_circuit(sub.freeze()))
    sub = CircuitBuilder(b.width)
    _emit_mac_part(sub, a, lay)
    with b.block("macmod.mac_inv"):
        b.extend(invert_circuit(sub.freeze()))


def build_phimac_mod(n: int, a: int, modulus: int, version: int = 2) -> Circuit:
    _check_constants(a, modulus, n)
    lay = ModmulLayout.standard(n, version)
    b = CircuitBuilder(lay.width, lay.registers())
    emit_phimac_mod(b, a, modulus, lay)
    return b.freeze()


def emit_phimul_mod(b: CircuitBuilder, a: int, modulus: int, lay: ModmulLayout) -> None:
    """y <- a^c * y mod N in place (for y < N); r and the divider end at zero."""
    a_inv = mod_inverse(a, modulus)
    with b.block("mulmod.mac"):
        emit_phimac_mod(b, a, modulus, lay)
    with b.block("mulmod.cswap"):
        for yq, rq in zip(lay.y, lay.r):
            b.cswap(lay.control, yq, rq)
    sub = CircuitBuilder(b.width)
    emit_phimac_mod(sub, a_inv, modulus, lay)
    with b.block("mulmod.unmac"):
        b.extend(invert_circuit(sub.freeze()))


def build_phimul_mod(n: int, a: int, modulus: int, version: int = 2) -> Circuit:
    _check_constants(a, modulus, n)
    lay = ModmulLayout.standard(n, version)
    b = CircuitBuilder(lay.width, lay.registers())
    emit_phimul_mod(b, a, modulus, lay)
    return b.freeze()


def build_modexp(n: int, a: int, modulus: int, version: int = 2) -> Circuit:
    """Work register <- a^x mod N for the 2n-bit upper register x.

    The 2n exponent qubits take the place of the single multiplier control,
    so the width is 2n + (multiplier width - 1).
    """
    _check_constants(a, modulus, n)
    if gcd(a, modulus) != 1:
        mod_inverse(a, modulus)  # raises NoInverse with the shared factor
    core = ModmulLayout.standard(n, version)
    shift = 2 * n - 1
    x = tuple(range(2 * n))

    def moved(qs: tuple[int, ...]) -> tuple[int, ...]:
        return tuple(q + shift for q in qs)

    d = core.div
    div = DividerLayout(
        moved(d.reg0), moved(d.reg1), moved(d.reg2), moved(d.reg3),
        moved(d.reg4), moved(d.reg5), moved(d.reg6), d.aqbit + shift,
    )
    regs = RegisterMap(
        [
            Register("x", x, "exponent"),
            Register("y", moved(core.y), "work"),
            Register("r", moved(core.r), "result"),
            *[Register(f"div.{reg.name}", reg.qubits, "ancilla") for reg in div.registers()],
        ]
    )
    b = CircuitBuilder(core.width + shift, regs)
    with b.block("modexp.init"):
        b.x(moved(core.y)[0])
    for i, const in enumerate(mod_exp_constants(a, modulus, n)):
        lay = ModmulLayout(n, version, x[i], moved(core.y), moved(core.r), div)
        # a^(2^i) mod N may be 1, which still yields a valid (identity) block
        with b.block(f"mulmod.{i}"):
            emit_phimul_mod(b, const, modulus, lay)
    return b.freeze()


def build_copy_layer(width: int) -> Circuit:
    """Stand-alone CNOT copy unit: ``width`` parallel CNOTs."""
    b = CircuitBuilder(2 * width)
    for i in range(width):
        b.cx(i, width + i)
    return b.freeze()


def build_cswap_layer(n: int) -> Circuit:
    """Stand-alone controlled-swap unit on control 0 and two n-qubit registers."""
    b = CircuitBuilder(2 * n + 1)
    for i in range(n):
        b.cswap(0, 1 + i, 1 + n + i)
    return b.freeze()
