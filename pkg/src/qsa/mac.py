"""Multiplier/accumulators by a classical constant: b <- b + c*a*x (mod 2^2n).

Layout for the stand-alone builders: control on qubit 0, x on 1..n and the
2n-qubit Fourier-space accumulator on n+1..3n.
"""

from __future__ import annotations

from typing import Sequence

from .adders import emit_ccphi_add_const, emit_cphi_add_const
from .core import Angle, Circuit, CircuitBuilder, Gate, GateKind, Register, RegisterMap, check_disjoint, invert_circuit


def a_angle(a: int, j: int, l: int) -> Angle:
    """Rotation for weight 2^j*a on accumulator qubit l."""
    return Angle(a << j, l + 1)


def v_angle(a: int, j: int, l: int) -> Angle:
    """Square root of ``a_angle``: same numerator, one more halving."""
    return a_angle(a, j, l).half()


def w_angle(a: int, n: int, l: int) -> Angle:
    total = Angle.zero()
    for j in range(n):
        total = total + v_angle(a, j, l)
    return total


def phimac_schedule(a: int, control: int, x: Sequence[int], acc: Sequence[int]) -> list[tuple[int, Gate]]:
    """Timestep table of the decomposed controlled MAC.

    Steps (n = len(x), 0-based):
      [0, 2n)        x_j-controlled V on acc[(t+j) mod 2n], a Latin square
      2n + j         CNOT(control -> x_j)
      2n + j + 1 + s x_j-controlled V^dagger on acc[s], s < 2n
      6n - 1 - j     second CNOT(control -> x_j), issued in reverse j order
      6n + l         control-controlled W_l on acc[l]
    The longest chain is 8n steps.
    """
    n, m = len(x), len(acc)
    if m != 2 * n:
        raise ValueError("accumulator must have twice the width of x")
    check_disjoint([control], x, acc)
    table: list[tuple[int, Gate]] = []
    for t in range(m):
        for j in range(n):
            l = (t + j) % m
            table.append((t, Gate(GateKind.CPHASE, (x[j], acc[l]), v_angle(a, j, l))))
    for j in range(n):
        table.append((2 * n + j, Gate(GateKind.CNOT, (control, x[j]))))
        for s in range(m):
            table.append((2 * n + j + 1 + s, Gate(GateKind.CPHASE, (x[j], acc[s]), -v_angle(a, j, s))))
        table.append((6 * n - 1 - j, Gate(GateKind.CNOT, (control, x[j]))))
    for l in range(m):
        table.append((6 * n + l, Gate(GateKind.CPHASE, (control, acc[l]), w_angle(a, n, l))))
    table.sort(key=lambda item: item[0])
    return table


def emit_phimac(b: CircuitBuilder, a: int, control: int, x: Sequence[int], acc: Sequence[int]) -> None:
    """Decomposed controlled MAC with depth 8n; zero-angle gates are kept."""
    with b.block("phimac"):
        b.gates.extend(g for _, g in phimac_schedule(a, control, x, acc))


def emit_phimac_uncontrolled(b: CircuitBuilder, a: int, x: Sequence[int], acc: Sequence[int]) -> None:
    """b <- b + a*x with plain CPHASE gates arranged as a Latin square (depth 2n).

    Zero-angle entries are skipped.
    """
    n, m = len(x), len(acc)
    check_disjoint(x, acc)
    with b.block("phimac_u"):
        for t in range(m):
            for j in range(n):
                l = (t + j) % m
                angle = a_angle(a, j, l)
                if not angle.is_zero():
                    b.cp(x[j], acc[l], angle)


def emit_phimac_cascade(b: CircuitBuilder, a: int, control: int | None, x: Sequence[int], acc: Sequence[int]) -> None:
    with b.block("phimac_cascade"):
        for j, xj in enumerate(x):
            if control is None:
                emit_cphi_add_const(b, xj, acc, a << j)
            else:
                emit_ccphi_add_const(b, control, xj, acc, a << j, keep_zero=True)


def mac_registers(n: int) -> RegisterMap:
    return RegisterMap(
        [
            Register("c", (0,), "control"),
            Register("x", tuple(range(1, n + 1)), "multiplicand"),
            Register("b", tuple(range(n + 1, 3 * n + 1)), "fourier"),
        ]
    )


def _layout(n: int) -> tuple[CircuitBuilder, int, list[int], list[int]]:
    if n < 1:
        raise ValueError("n must be at least 1")
    regs = mac_registers(n)
    return CircuitBuilder(3 * n + 1, regs), 0, list(regs["x"].qubits), list(regs["b"].qubits)


def build_phimac_cascade(n: int, a: int, controlled: bool = True) -> Circuit:
    b, c, x, acc = _layout(n)
    emit_phimac_cascade(b, a, c if controlled else None, x, acc)
    return b.freeze()


def build_phimac(n: int, a: int, controlled: bool = True) -> Circuit:
    b, c, x, acc = _layout(n)
    if controlled:
        emit_phimac(b, a, c, x, acc)
    else:
        emit_phimac_uncontrolled(b, a, x, acc)
    return b.freeze()


def build_phimac_inverse(n: int, a: int, controlled: bool = True) -> Circuit:
    return invert_circuit(build_phimac(n, a, controlled))
