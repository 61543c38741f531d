"""Dense state-vector simulator (numpy, double precision)."""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np

from ..core import Circuit, Gate, GateKind
from ..errors import TooWide

DEFAULT_CAP = 22


def dense_cap() -> int:
    return int(os.environ.get("QSA_DENSE_CAP", DEFAULT_CAP))


@dataclass
class DenseState:
    width: int
    amplitudes: np.ndarray
    record: dict[int, int] = field(default_factory=dict)

    @classmethod
    def from_basis(cls, width: int, basis: int) -> DenseState:
        if width > dense_cap():
            raise TooWide(f"{width} qubits exceeds the dense cap of {dense_cap()} (set QSA_DENSE_CAP)")
        amps = np.zeros(1 << width, dtype=complex)
        amps[basis] = 1.0
        return cls(width, amps)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def basis_value(self, tol: float = 1e-10) -> int | None:
        """The basis index when the state is a single basis vector, else None."""
        idx = int(np.argmax(np.abs(self.amplitudes)))
        return idx if abs(abs(self.amplitudes[idx]) - 1.0) <= tol else None


class _Tensor:
    """Index helper: qubit q is axis ``width-1-q`` of the reshaped vector."""

    def __init__(self, state: DenseState):
        self.w = state.width
        self.t = state.amplitudes.reshape([2] * self.w) if self.w else state.amplitudes

    def idx(self, fixed: dict[int, int]) -> tuple:
        sl = [slice(None)] * self.w
        for q, v in fixed.items():
            sl[self.w - 1 - q] = v
        return tuple(sl)

    def swap(self, fixed: dict[int, int], a: int, b: int, va: tuple[int, int], vb: tuple[int, int]) -> None:
        i = self.idx({**fixed, a: va[0], b: va[1]})
        j = self.idx({**fixed, a: vb[0], b: vb[1]})
        tmp = self.t[i].copy()
        self.t[i] = self.t[j]
        self.t[j] = tmp


_INV_SQRT2 = 1 / np.sqrt(2)


def apply_gate(state: DenseState, g: Gate, rng: np.random.Generator | None = None) -> None:
    ten = _Tensor(state)
    k = g.kind
    qs = g.qubits
    if k in (GateKind.PHASE, GateKind.CPHASE, GateKind.CCPHASE):
        if not g.angle.is_zero():
            ten.t[ten.idx({q: 1 for q in qs})] *= np.exp(1j * g.angle.radians)
    elif k is GateKind.CLASSIC_PHASE:
        if state.record.get(g.clbit, 0):
            ten.t[ten.idx({qs[0]: 1})] *= np.exp(1j * g.angle.radians)
    elif k is GateKind.H:
        i0, i1 = ten.idx({qs[0]: 0}), ten.idx({qs[0]: 1})
        a0 = ten.t[i0].copy()
        a1 = ten.t[i1].copy()
        ten.t[i0] = (a0 + a1) * _INV_SQRT2
        ten.t[i1] = (a0 - a1) * _INV_SQRT2
    elif k in (GateKind.X, GateKind.CLASSIC_X, GateKind.CNOT, GateKind.TOFFOLI):
        if k is GateKind.CLASSIC_X and not state.record.get(g.clbit, 0):
            return
        *ctrl, t = qs
        fixed = {c: 1 for c in ctrl}
        i0, i1 = ten.idx({**fixed, t: 0}), ten.idx({**fixed, t: 1})
        tmp = ten.t[i0].copy()
        ten.t[i0] = ten.t[i1]
        ten.t[i1] = tmp
    elif k in (GateKind.SWAP, GateKind.CSWAP):
        *ctrl, a, b = qs
        ten.swap({c: 1 for c in ctrl}, a, b, (0, 1), (1, 0))
    elif k is GateKind.MEASURE:
        q = qs[0]
        i0, i1 = ten.idx({q: 0}), ten.idx({q: 1})
        p1 = float(np.sum(np.abs(ten.t[i1]) ** 2))
        if rng is None and 1e-12 < p1 < 1 - 1e-12:
            raise ValueError("measurement with a random outcome needs an rng")
        bit = int(rng.random() < p1) if rng is not None else int(p1 > 0.5)
        ten.t[i1 if bit == 0 else i0] = 0
        ten.t[...] /= np.sqrt(p1 if bit else 1 - p1)
        state.record[g.clbit] = bit
    else:  # pragma: no cover
        raise ValueError(f"unsupported gate {k}")


def dense_run(
    circuit: Circuit, basis: int | DenseState = 0, rng: np.random.Generator | None = None
) -> DenseState:
    if isinstance(basis, DenseState):
        state = basis
    else:
        state = DenseState.from_basis(circuit.width, basis)
    for g in circuit.gates:
        apply_gate(state, g, rng)
    return state


def unitary(circuit: Circuit) -> np.ndarray:
    """Full matrix of a small unitary circuit (columns are basis inputs)."""
    dim = 1 << circuit.width
    cols = [dense_run(circuit, b).amplitudes for b in range(dim)]
    return np.stack(cols, axis=1)
