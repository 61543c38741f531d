"""QFT, approximate QFT and the Fourier-space constant/quantum adders.

Fourier convention: after ``emit_qft`` on a register holding ``b``, qubit
``l`` carries the phase ``2*pi*b / 2**(l+1)``.  No terminal swaps are
emitted; every consumer addresses qubits by that convention.
"""

from __future__ import annotations

from typing import Sequence

from .core import Angle, Circuit, CircuitBuilder, Gate, GateKind, Register, RegisterMap, check_disjoint
from .errors import InvalidCutoff, RegisterOverlap

ZERO = None
"""Literal-zero entry for the source bus of :func:`emit_phi_add_generic`."""


def qft_gates(reg: Sequence[int], cutoff: int | None = None) -> list[Gate]:
    w = len(reg)
    if cutoff is not None and not 1 <= cutoff <= w:
        raise InvalidCutoff(f"cutoff must lie in [1, {w}], got {cutoff}")
    gates = []
    for l in range(w - 1, -1, -1):
        gates.append(Gate(GateKind.H, (reg[l],)))
        for m in range(l - 1, -1, -1):
            order = l - m + 1
            if cutoff is not None and order > cutoff:
                continue
            gates.append(Gate(GateKind.CPHASE, (reg[m], reg[l]), Angle(1, order)))
    return gates


def emit_qft(b: CircuitBuilder, reg: Sequence[int], cutoff: int | None = None, inverse: bool = False) -> None:
    gates = qft_gates(reg, cutoff)
    if inverse:
        gates = [g if g.angle is None else Gate(g.kind, g.qubits, -g.angle) for g in reversed(gates)]
    with b.block("iqft" if inverse else "qft"):
        b.gates.extend(gates)


def emit_phi_add_const(b: CircuitBuilder, reg: Sequence[int], k: int) -> None:
    """Add constant ``k`` (mod 2^len(reg)) to a Fourier register; depth 1."""
    with b.block("phiadd"):
        for l, q in enumerate(reg):
            angle = Angle(k, l + 1)
            if not angle.is_zero():
                b.p(q, angle)


def emit_cphi_add_const(b: CircuitBuilder, control: int, reg: Sequence[int], k: int) -> None:
    if control in reg:
        raise RegisterOverlap(f"control {control} lies in the target register")
    with b.block("cphiadd"):
        for l, q in enumerate(reg):
            angle = Angle(k, l + 1)
            if not angle.is_zero():
                b.cp(control, q, angle)


def emit_ccphi_add_const(
    b: CircuitBuilder, c1: int, c2: int, reg: Sequence[int], k: int, keep_zero: bool = False
) -> None:
    if c1 == c2:
        raise RegisterOverlap("the two controls must differ")
    check_disjoint([c1, c2], reg)
    with b.block("ccphiadd"):
        for l, q in enumerate(reg):
            angle = Angle(k, l + 1)
            if keep_zero or not angle.is_zero():
                b.ccp(c1, c2, q, angle)


def emit_phi_add_generic(
    b: CircuitBuilder, source: Sequence[int | None], reg: Sequence[int], sign: int = 1
) -> None:
    """Add the integer on ``source`` (LSB first; ``ZERO`` entries are constant
    0) into Fourier register ``reg``.  ``sign=-1`` subtracts.

    Shifts and half-word selections are expressed purely by the choice of
    source wiring.  Gates are emitted along diagonals ``l - j`` so the
    network has depth ``len(reg)``.
    """
    if len(source) != len(reg):
        raise ValueError("source bus must have the target register's width")
    check_disjoint(source, reg)
    w = len(reg)
    with b.block("phiadd_generic"):
        for diag in range(w):
            for j in range(w - diag):
                src = source[j]
                if src is ZERO:
                    continue
                l = j + diag
                b.cp(src, reg[l], Angle(sign << j, l + 1))


# Stand-alone builders with fixed layouts.


def build_qft(width: int, approx_cutoff: int | None = None, inverse: bool = False) -> Circuit:
    if width < 1:
        raise ValueError("width must be at least 1")
    regs = RegisterMap([Register("b", tuple(range(width)), "fourier")])
    b = CircuitBuilder(width, regs)
    emit_qft(b, range(width), approx_cutoff, inverse)
    return b.freeze()


def build_phi_add_const(width: int, k: int) -> Circuit:
    b = CircuitBuilder(width, RegisterMap([Register("b", tuple(range(width)), "fourier")]))
    emit_phi_add_const(b, range(width), k)
    return b.freeze()


def build_cphi_add_const(width: int, k: int, control: int | None = None) -> Circuit:
    control = width if control is None else control
    if 0 <= control < width:
        raise RegisterOverlap(f"control {control} lies in the target register")
    regs = RegisterMap([Register("b", tuple(range(width)), "fourier"), Register("c", (control,), "control")])
    b = CircuitBuilder(max(width, control + 1), regs)
    emit_cphi_add_const(b, control, range(width), k)
    return b.freeze()


def build_ccphi_add_const(width: int, k: int, c1: int | None = None, c2: int | None = None) -> Circuit:
    c1 = width if c1 is None else c1
    c2 = width + 1 if c2 is None else c2
    check_disjoint(range(width), [c1], [c2])
    regs = RegisterMap(
        [
            Register("b", tuple(range(width)), "fourier"),
            Register("c1", (c1,), "control"),
            Register("c2", (c2,), "control"),
        ]
    )
    b = CircuitBuilder(max(width, c1 + 1, c2 + 1), regs)
    emit_ccphi_add_const(b, c1, c2, range(width), k)
    return b.freeze()


def build_phi_add_generic(
    source: Sequence[int | None], target_width: int, target: Sequence[int] | None = None
) -> Circuit:
    """Generic adder on an explicit source bus.

    The target register defaults to the qubits just above the highest source
    qubit.
    """
    used = [q for q in source if q is not ZERO]
    if target is None:
        start = max(used, default=-1) + 1
        target = range(start, start + target_width)
    target = tuple(target)
    check_disjoint(used, target)
    width = max([*used, *target]) + 1
    regs = [Register("b", target, "fourier")]
    if used:
        regs.append(Register("a", tuple(sorted(set(used))), "source"))
    b = CircuitBuilder(width, RegisterMap(regs))
    emit_phi_add_generic(b, source, target)
    return b.freeze()


def in_fourier(c: Circuit, reg: Sequence[int], cutoff: int | None = None) -> Circuit:
    """Sandwich ``c`` between a QFT and an inverse QFT on ``reg``."""
    b = CircuitBuilder(c.width, c.registers)
    emit_qft(b, reg, cutoff)
    b.extend(c)
    emit_qft(b, reg, cutoff, inverse=True)
    return b.freeze()
