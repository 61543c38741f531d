"""Exact phases, gates, circuits, inversion and small gate decompositions.

Basis-integer convention used everywhere: bit ``q`` of an integer is the
value of qubit ``q``.  A register is an ordered list of qubit indices with
the least significant bit first.
"""

from __future__ import annotations

import enum
from contextlib import contextmanager
from dataclasses import dataclass, field
from math import pi
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import InversionUnsupported, KindMismatch, RegisterOverlap


@dataclass(frozen=True, slots=True)
class Angle:
    """Phase ``2*pi*numerator / 2**denom_exp``, stored exactly."""

    numerator: int = 0
    denom_exp: int = 0

    def __post_init__(self) -> None:
        if self.denom_exp < 0:
            raise ValueError("denom_exp must be non-negative")
        object.__setattr__(self, "numerator", self.numerator % (1 << self.denom_exp))

    @classmethod
    def zero(cls) -> Angle:
        return cls(0, 0)

    def __add__(self, other: Angle) -> Angle:
        return compose_angles(self, other)

    def __neg__(self) -> Angle:
        return Angle(-self.numerator, self.denom_exp)

    def __sub__(self, other: Angle) -> Angle:
        return compose_angles(self, -other)

    def half(self) -> Angle:
        # the square root used by controlled-V gates: same numerator, one more bit
        return Angle(self.numerator, self.denom_exp + 1)

    def is_zero(self) -> bool:
        return self.numerator == 0

    def at(self, denom_exp: int) -> int:
        """Numerator of the same phase over ``2**denom_exp`` (must be exact)."""
        if denom_exp < self.denom_exp:
            shift = self.denom_exp - denom_exp
            if self.numerator & ((1 << shift) - 1):
                raise ValueError(f"{self} is not representable over 2^{denom_exp}")
            return self.numerator >> shift
        return self.numerator << (denom_exp - self.denom_exp)

    def same_phase(self, other: Angle) -> bool:
        p = max(self.denom_exp, other.denom_exp)
        return self.at(p) == other.at(p)

    @property
    def radians(self) -> float:
        return 2 * pi * self.numerator / (1 << self.denom_exp)

    def __str__(self) -> str:
        return f"{self.numerator}/2^{self.denom_exp}"

    @classmethod
    def parse(cls, text: str) -> Angle:
        num, _, den = text.partition("/2^")
        if not _ or not num.lstrip("-").isdigit() or not den.isdigit():
            raise ValueError(f"bad angle {text!r}")
        return cls(int(num), int(den))


def compose_angles(a: Angle, b: Angle) -> Angle:
    """Sum of two phases over the larger of the two denominators."""
    p = max(a.denom_exp, b.denom_exp)
    return Angle(
        (a.numerator << (p - a.denom_exp)) + (b.numerator << (p - b.denom_exp)), p
    )


def constant_angle(k: int, qubit: int) -> Angle:
    """Phase that adds the constant ``k`` on Fourier qubit ``qubit``.

    Fourier qubit ``l`` of a register holding ``b`` carries phase
    ``2*pi*b / 2**(l+1)``, so adding ``k`` multiplies in ``2*pi*k / 2**(l+1)``.
    This equals the product of ``R_m`` gates over the low ``l+1`` bits of ``k``.
    """
    return Angle(k, qubit + 1)


class GateKind(str, enum.Enum):
    H = "H"
    X = "X"
    CNOT = "CNOT"
    SWAP = "SWAP"
    CSWAP = "CSWAP"
    TOFFOLI = "TOFFOLI"
    PHASE = "PHASE"
    CPHASE = "CPHASE"
    CCPHASE = "CCPHASE"
    MEASURE = "MEASURE"
    CLASSIC_X = "CLASSIC_X"
    CLASSIC_PHASE = "CLASSIC_PHASE"


ARITY = {
    GateKind.H: 1,
    GateKind.X: 1,
    GateKind.PHASE: 1,
    GateKind.MEASURE: 1,
    GateKind.CLASSIC_X: 1,
    GateKind.CLASSIC_PHASE: 1,
    GateKind.CNOT: 2,
    GateKind.SWAP: 2,
    GateKind.CPHASE: 2,
    GateKind.CSWAP: 3,
    GateKind.TOFFOLI: 3,
    GateKind.CCPHASE: 3,
}
PHASE_KINDS = frozenset({GateKind.PHASE, GateKind.CPHASE, GateKind.CCPHASE, GateKind.CLASSIC_PHASE})
CLASSICAL_KINDS = frozenset({GateKind.MEASURE, GateKind.CLASSIC_X, GateKind.CLASSIC_PHASE})


@dataclass(frozen=True, slots=True)
class Gate:
    """One gate.  Controls come first in ``qubits``.

    ``clbit`` is the measurement record slot written by MEASURE or read by
    the CLASSIC_* kinds.
    """

    kind: GateKind
    qubits: tuple[int, ...]
    angle: Angle | None = None
    clbit: int | None = None

    def __post_init__(self) -> None:
        if len(self.qubits) != ARITY[self.kind]:
            raise ValueError(f"{self.kind.value} takes {ARITY[self.kind]} qubits, got {self.qubits}")
        if len(set(self.qubits)) != len(self.qubits):
            raise ValueError(f"repeated qubit in {self.kind.value} {self.qubits}")
        if (self.angle is not None) != (self.kind in PHASE_KINDS):
            raise ValueError(f"{self.kind.value}: angle presence mismatch")
        if (self.clbit is not None) != (self.kind in CLASSICAL_KINDS):
            raise ValueError(f"{self.kind.value}: classical bit presence mismatch")
        if self.kind is GateKind.CCPHASE and self.qubits[0] > self.qubits[1]:
            # the two controls are interchangeable; keep them sorted
            object.__setattr__(self, "qubits", (self.qubits[1], self.qubits[0], self.qubits[2]))

    def remap(self, mapping: Sequence[int]) -> Gate:
        return Gate(self.kind, tuple(mapping[q] for q in self.qubits), self.angle, self.clbit)


def h(q: int) -> Gate:
    return Gate(GateKind.H, (q,))


def x(q: int) -> Gate:
    return Gate(GateKind.X, (q,))


def cx(c: int, t: int) -> Gate:
    return Gate(GateKind.CNOT, (c, t))


def swap(a: int, b: int) -> Gate:
    return Gate(GateKind.SWAP, (a, b))


def cswap(c: int, a: int, b: int) -> Gate:
    return Gate(GateKind.CSWAP, (c, a, b))


def ccx(c1: int, c2: int, t: int) -> Gate:
    return Gate(GateKind.TOFFOLI, (c1, c2, t))


def p(q: int, angle: Angle) -> Gate:
    return Gate(GateKind.PHASE, (q,), angle)


def cp(c: int, t: int, angle: Angle) -> Gate:
    return Gate(GateKind.CPHASE, (c, t), angle)


def ccp(c1: int, c2: int, t: int, angle: Angle) -> Gate:
    return Gate(GateKind.CCPHASE, (c1, c2, t), angle)


def measure(q: int, clbit: int) -> Gate:
    return Gate(GateKind.MEASURE, (q,), clbit=clbit)


def classic_x(clbit: int, q: int) -> Gate:
    return Gate(GateKind.CLASSIC_X, (q,), clbit=clbit)


def classic_p(clbit: int, q: int, angle: Angle) -> Gate:
    return Gate(GateKind.CLASSIC_PHASE, (q,), angle, clbit)


@dataclass(frozen=True, slots=True)
class Register:
    name: str
    qubits: tuple[int, ...]
    role: str = ""

    def __len__(self) -> int:
        return len(self.qubits)


class RegisterMap(Mapping[str, Register]):
    """Named, pairwise-disjoint qubit lists."""

    def __init__(self, registers: Iterable[Register] = ()):
        self._regs: dict[str, Register] = {}
        seen: dict[int, str] = {}
        for reg in registers:
            if reg.name in self._regs:
                raise ValueError(f"duplicate register {reg.name}")
            for q in reg.qubits:
                if q in seen:
                    raise RegisterOverlap(f"qubit {q} in both {seen[q]} and {reg.name}")
                seen[q] = reg.name
            self._regs[reg.name] = reg

    def __getitem__(self, name: str) -> Register:
        return self._regs[name]

    def __iter__(self) -> Iterator[str]:
        return iter(self._regs)

    def __len__(self) -> int:
        return len(self._regs)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, RegisterMap) and list(self._regs.values()) == list(other._regs.values())

    def __repr__(self) -> str:
        return f"RegisterMap({list(self._regs.values())!r})"

    def max_qubit(self) -> int:
        return max((max(r.qubits) for r in self._regs.values() if r.qubits), default=-1)

    def encode(self, base: int = 0, **values: int) -> int:
        """Write integer ``values`` into their registers of basis integer ``base``."""
        for name, value in values.items():
            reg = self._regs[name]
            if value < 0 or value >> len(reg.qubits):
                raise ValueError(f"{value} does not fit register {name} ({len(reg)} qubits)")
            for i, q in enumerate(reg.qubits):
                base = (base & ~(1 << q)) | (((value >> i) & 1) << q)
        return base

    def decode(self, basis: int, name: str) -> int:
        return sum(((basis >> q) & 1) << i for i, q in enumerate(self._regs[name].qubits))

    def decode_all(self, basis: int) -> dict[str, int]:
        return {name: self.decode(basis, name) for name in self._regs}


@dataclass(frozen=True, slots=True)
class Block:
    tag: str
    start: int
    end: int


@dataclass(frozen=True)
class Circuit:
    width: int
    gates: tuple[Gate, ...] = ()
    blocks: tuple[Block, ...] = ()
    registers: RegisterMap = field(default_factory=RegisterMap)

    def __post_init__(self) -> None:
        for g in self.gates:
            for q in g.qubits:
                if not 0 <= q < self.width:
                    raise ValueError(f"gate {g} outside width {self.width}")
        if self.registers.max_qubit() >= self.width:
            raise ValueError("register outside circuit width")
        _check_nesting(self.blocks, len(self.gates))

    def __len__(self) -> int:
        return len(self.gates)

    def __iter__(self) -> Iterator[Gate]:
        return iter(self.gates)

    def block_ranges(self, prefix: str) -> list[Block]:
        return [b for b in self.blocks if b.tag.startswith(prefix)]

    def is_unitary(self) -> bool:
        return not any(g.kind in CLASSICAL_KINDS for g in self.gates)


def _check_nesting(blocks: Sequence[Block], n_gates: int) -> None:
    for b in blocks:
        if not 0 <= b.start <= b.end <= n_gates:
            raise ValueError(f"block {b} out of range")
    spans = sorted(blocks, key=lambda b: (b.start, -b.end))
    stack: list[Block] = []
    for b in spans:
        while stack and stack[-1].end <= b.start:
            stack.pop()
        if stack and b.end > stack[-1].end:
            raise ValueError(f"blocks {stack[-1]} and {b} overlap without nesting")
        stack.append(b)


class CircuitBuilder:
    """Mutable gate list with a block-tag stack; ``freeze`` yields a Circuit."""

    def __init__(self, width: int, registers: RegisterMap | None = None):
        self.width = width
        self.gates: list[Gate] = []
        self.blocks: list[Block] = []
        self.registers = registers if registers is not None else RegisterMap()
        self._open: list[tuple[int, str, int]] = []

    @contextmanager
    def block(self, tag: str) -> Iterator[CircuitBuilder]:
        slot = len(self.blocks)
        self.blocks.append(Block(tag, len(self.gates), len(self.gates)))
        try:
            yield self
        finally:
            self.blocks[slot] = Block(tag, self.blocks[slot].start, len(self.gates))

    def add(self, gate: Gate) -> None:
        self.gates.append(gate)

    def extend(self, circuit: Circuit, mapping: Sequence[int] | None = None) -> None:
        """Append another circuit's gates and blocks (optionally remapping qubits)."""
        offset = len(self.gates)
        if mapping is None:
            self.gates.extend(circuit.gates)
        else:
            self.gates.extend(g.remap(mapping) for g in circuit.gates)
        self.blocks.extend(Block(b.tag, b.start + offset, b.end + offset) for b in circuit.blocks)

    def h(self, q: int) -> None:
        self.gates.append(Gate(GateKind.H, (q,)))

    def x(self, q: int) -> None:
        self.gates.append(Gate(GateKind.X, (q,)))

    def cx(self, c: int, t: int) -> None:
        self.gates.append(Gate(GateKind.CNOT, (c, t)))

    def swap(self, a: int, b: int) -> None:
        self.gates.append(Gate(GateKind.SWAP, (a, b)))

    def cswap(self, c: int, a: int, b: int) -> None:
        self.gates.append(Gate(GateKind.CSWAP, (c, a, b)))

    def ccx(self, c1: int, c2: int, t: int) -> None:
        self.gates.append(Gate(GateKind.TOFFOLI, (c1, c2, t)))

    def p(self, q: int, angle: Angle) -> None:
        self.gates.append(Gate(GateKind.PHASE, (q,), angle))

    def cp(self, c: int, t: int, angle: Angle) -> None:
        self.gates.append(Gate(GateKind.CPHASE, (c, t), angle))

    def ccp(self, c1: int, c2: int, t: int, angle: Angle) -> None:
        self.gates.append(Gate(GateKind.CCPHASE, (c1, c2, t), angle))

    def measure(self, q: int, clbit: int) -> None:
        self.gates.append(Gate(GateKind.MEASURE, (q,), clbit=clbit))

    def freeze(self) -> Circuit:
        return Circuit(self.width, tuple(self.gates), tuple(self.blocks), self.registers)


def check_disjoint(*groups: Iterable[int | None]) -> None:
    seen: set[int] = set()
    for group in groups:
        for q in group:
            if q is None:
                continue
            if q in seen:
                raise RegisterOverlap(f"qubit {q} used by more than one operand")
            seen.add(q)


_SELF_INVERSE = frozenset(
    {GateKind.H, GateKind.X, GateKind.CNOT, GateKind.SWAP, GateKind.CSWAP, GateKind.TOFFOLI}
)


def _inverse_tag(tag: str) -> str:
    return tag[: -len("_inv")] if tag.endswith("_inv") else tag + "_inv"


def invert_circuit(c: Circuit) -> Circuit:
    """Reverse gate order and negate every phase; block tags toggle ``_inv``."""
    gates = []
    for g in reversed(c.gates):
        if g.kind in _SELF_INVERSE:
            gates.append(g)
        elif g.kind in CLASSICAL_KINDS:
            raise InversionUnsupported(f"cannot invert {g.kind.value}")
        else:
            gates.append(Gate(g.kind, g.qubits, -g.angle))
    total = len(c.gates)
    blocks = tuple(Block(_inverse_tag(b.tag), total - b.end, total - b.start) for b in c.blocks)
    return Circuit(c.width, tuple(gates), blocks, c.registers)


def concat(*circuits: Circuit) -> Circuit:
    """Run circuits one after another on the widest of their qubit spaces."""
    width = max(c.width for c in circuits)
    b = CircuitBuilder(width, circuits[0].registers)
    for c in circuits:
        b.extend(c)
    return b.freeze()


def prune_zero_angles(c: Circuit) -> Circuit:
    """Drop phase gates whose angle is zero, keeping block ranges consistent."""
    keep_index = []
    new_pos = [0] * (len(c.gates) + 1)
    for i, g in enumerate(c.gates):
        new_pos[i] = len(keep_index)
        if not (g.kind in PHASE_KINDS and g.angle.is_zero()):
            keep_index.append(i)
    new_pos[len(c.gates)] = len(keep_index)
    gates = tuple(c.gates[i] for i in keep_index)
    blocks = tuple(Block(b.tag, new_pos[b.start], new_pos[b.end]) for b in c.blocks)
    return Circuit(c.width, gates, blocks, c.registers)


def decompose_ccphase(g: Gate) -> Circuit:
    """Five two-qubit gates equal to a doubly controlled phase.

    With ``V`` the half angle: CV(c2,t) CNOT(c1,c2) CV+(c2,t) CNOT(c1,c2) CV(c1,t).
    """
    if g.kind is not GateKind.CCPHASE:
        raise KindMismatch(f"expected CCPHASE, got {g.kind.value}")
    c1, c2, t = g.qubits
    v = g.angle.half()
    gates = (cp(c2, t, v), cx(c1, c2), cp(c2, t, -v), cx(c1, c2), cp(c1, t, v))
    return Circuit(max(g.qubits) + 1, gates, (Block("ccphase", 0, 5),))


def decompose_three_qubit(g: Gate) -> Circuit:
    """Expand CSWAP into CNOT-TOFFOLI-CNOT, or TOFFOLI into two-qubit gates.

    The Toffoli network is the controlled-sqrt(X) construction written in the
    phase basis: H on the target, the five-gate controlled-V network with
    V = phase(pi/2), then H again.
    """
    width = max(g.qubits) + 1
    if g.kind is GateKind.CSWAP:
        c, a, b = g.qubits
        return Circuit(width, (cx(b, a), ccx(c, a, b), cx(b, a)), (Block("cswap", 0, 3),))
    if g.kind is GateKind.TOFFOLI:
        c1, c2, t = g.qubits
        inner = decompose_ccphase(ccp(c1, c2, t, Angle(1, 1)))
        gates = (h(t),) + inner.gates + (h(t),)
        return Circuit(width, gates, (Block("toffoli", 0, len(gates)),))
    raise KindMismatch(f"expected TOFFOLI or CSWAP, got {g.kind.value}")
