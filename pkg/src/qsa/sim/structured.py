"""Exact product-state simulator for basis inputs.

Every qubit is either a basis bit or a Fourier-form qubit
``(|0> + e^{i theta}|1>)/sqrt(2)``; phases are integers modulo ``2**P``.
Circuits built from QFTs, phase adders and basis-controlled gates stay
inside this family, so simulation costs O(1) per gate.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ..core import Angle, Circuit, GateKind
from ..errors import EntanglementViolation

BASIS, PHASE = 0, 1

_OPS = {
    GateKind.H: 0,
    GateKind.X: 1,
    GateKind.CNOT: 2,
    GateKind.SWAP: 3,
    GateKind.CSWAP: 4,
    GateKind.TOFFOLI: 5,
    GateKind.PHASE: 6,
    GateKind.CPHASE: 6,
    GateKind.CCPHASE: 6,
    GateKind.MEASURE: 7,
    GateKind.CLASSIC_X: 8,
    GateKind.CLASSIC_PHASE: 9,
}


@dataclass
class StructuredState:
    """Per-qubit tags plus a global phase; phases are numerators over ``2**precision``."""

    precision: int
    kinds: list[int]
    values: list[int]
    global_phase: int = 0
    record: dict[int, int] = field(default_factory=dict)

    @classmethod
    def from_basis(cls, width: int, basis: int, precision: int = 1) -> StructuredState:
        return cls(precision, [BASIS] * width, [(basis >> q) & 1 for q in range(width)])

    @property
    def width(self) -> int:
        return len(self.kinds)

    def is_basis(self) -> bool:
        return all(k == BASIS for k in self.kinds)

    def basis_value(self) -> int | None:
        if not self.is_basis():
            return None
        return sum(v << q for q, v in enumerate(self.values))

    def tag(self, q: int) -> str:
        if self.kinds[q] == BASIS:
            return f"B{self.values[q]}"
        return f"P{Angle(self.values[q], self.precision)}"

    def to_dense(self) -> np.ndarray:
        """State vector with bit ``q`` of the index as qubit ``q``."""
        full = (1 << self.precision)
        vec = np.ones(1, dtype=complex) * np.exp(2j * np.pi * self.global_phase / full)
        for q in reversed(range(self.width)):
            if self.kinds[q] == BASIS:
                local = np.zeros(2, dtype=complex)
                local[self.values[q]] = 1.0
            else:
                local = np.array([1.0, np.exp(2j * np.pi * self.values[q] / full)]) / np.sqrt(2)
            vec = np.kron(vec, local)
        return vec


def _compile(circuit: Circuit, precision: int) -> list[tuple]:
    prog = []
    for g in circuit.gates:
        op = _OPS[g.kind]
        theta = g.angle.at(precision) if g.angle is not None else 0
        if op == 6 and theta == 0:
            continue
        prog.append((op, g.qubits, theta, g.clbit))
    return prog


def circuit_precision(circuit: Circuit) -> int:
    return max([1] + [g.angle.denom_exp for g in circuit.gates if g.angle is not None])


class StructuredProgram:
    """A circuit compiled once for repeated basis-input runs."""

    def __init__(self, circuit: Circuit):
        self.width = circuit.width
        self.precision = circuit_precision(circuit)
        self.prog = _compile(circuit, self.precision)

    def run(self, basis: int, rng: np.random.Generator | None = None) -> tuple[int | None, StructuredState]:
        if basis >> self.width:
            raise ValueError("input does not fit the circuit width")
        state = StructuredState.from_basis(self.width, basis, self.precision)
        _execute(self.prog, state, rng)
        return state.basis_value(), state


def structured_run(
    circuit: Circuit,
    basis: int | StructuredState,
    rng: np.random.Generator | None = None,
) -> tuple[int | None, StructuredState]:
    """Run ``circuit`` on a basis input (or a prior state).

    Returns the output basis integer (``None`` if some qubit is left in Fourier
    form) and the final state.
    """
    if not isinstance(basis, StructuredState):
        return StructuredProgram(circuit).run(basis, rng)
    state = basis
    precision = circuit_precision(circuit)
    if state.precision < precision:
        shift = precision - state.precision
        state.values = [v << shift if k == PHASE else v for k, v in zip(state.kinds, state.values)]
        state.global_phase <<= shift
        state.precision = precision
    _execute(_compile(circuit, state.precision), state, rng)
    return state.basis_value(), state


def _execute(prog: Sequence[tuple], st: StructuredState, rng: np.random.Generator | None) -> None:
    kinds, vals = st.kinds, st.values
    full = 1 << st.precision
    mask = full - 1
    half = full >> 1
    gphase = st.global_phase
    for op, qs, theta, clbit in prog:
        if op == 6:  # diagonal phase on all-ones
            target = -1
            fire = True
            for q in qs:
                if kinds[q] == PHASE:
                    if target >= 0:
                        raise EntanglementViolation(f"phase gate on {qs} touches two Fourier qubits")
                    target = q
                elif not vals[q]:
                    fire = False
            if fire:
                if target < 0:
                    gphase = (gphase + theta) & mask
                else:
                    vals[target] = (vals[target] + theta) & mask
        elif op == 2:
            c, t = qs
            if kinds[c] == PHASE:
                raise EntanglementViolation(f"CNOT control {c} is in Fourier form")
            if vals[c]:
                if kinds[t] == BASIS:
                    vals[t] ^= 1
                else:
                    gphase = (gphase + vals[t]) & mask
                    vals[t] = -vals[t] & mask
        elif op == 0:
            (q,) = qs
            if kinds[q] == BASIS:
                kinds[q] = PHASE
                vals[q] = half if vals[q] else 0
            elif vals[q] == 0:
                kinds[q] = BASIS
            elif vals[q] == half:
                kinds[q] = BASIS
                vals[q] = 1
            else:
                raise EntanglementViolation(
                    f"H on qubit {q} with phase {Angle(vals[q], st.precision)} leaves the product family"
                )
        elif op == 1 or op == 8:
            (q,) = qs
            if op == 8 and not st.record.get(clbit, 0):
                continue
            if kinds[q] == BASIS:
                vals[q] ^= 1
            else:
                gphase = (gphase + vals[q]) & mask
                vals[q] = -vals[q] & mask
        elif op == 3:
            a, b = qs
            kinds[a], kinds[b] = kinds[b], kinds[a]
            vals[a], vals[b] = vals[b], vals[a]
        elif op == 4 or op == 5:
            c = qs[0]
            if kinds[c] == PHASE or (op == 5 and kinds[qs[1]] == PHASE):
                raise EntanglementViolation(f"{'CSWAP' if op == 4 else 'TOFFOLI'} control in Fourier form")
            if op == 4:
                if vals[c]:
                    a, b = qs[1], qs[2]
                    kinds[a], kinds[b] = kinds[b], kinds[a]
                    vals[a], vals[b] = vals[b], vals[a]
            elif vals[c] and vals[qs[1]]:
                t = qs[2]
                if kinds[t] == BASIS:
                    vals[t] ^= 1
                else:
                    gphase = (gphase + vals[t]) & mask
                    vals[t] = -vals[t] & mask
        elif op == 7:
            (q,) = qs
            if kinds[q] == PHASE:
                if rng is None:
                    raise ValueError("measuring a Fourier qubit needs an rng")
                kinds[q] = BASIS
                vals[q] = int(rng.integers(2))
                gphase = 0
            st.record[clbit] = vals[q]
        elif op == 9:
            (q,) = qs
            if st.record.get(clbit, 0):
                if kinds[q] == PHASE:
                    vals[q] = (vals[q] + theta) & mask
                elif vals[q]:
                    gphase = (gphase + theta) & mask
    st.global_phase = gphase
