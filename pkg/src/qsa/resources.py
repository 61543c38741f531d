"""ASAP depth scheduling, gate-cost accounting and the multiplier report tables."""

from __future__ import annotations

import json
from collections import Counter, defaultdict
from dataclasses import asdict, dataclass, field
from typing import Iterable

from .core import Circuit, Gate, GateKind, decompose_ccphase

UNTAGGED = "<untagged>"
THREE_QUBIT_EQUIV = 5


@dataclass(frozen=True)
class Convention:
    """Counting rules.

    ``ccphase``: ``"depth_1"`` treats a CCPHASE as one 3-qubit step, while
    ``"decomposed"`` expands it into its five 2-qubit gates first.
    ``toffoli``: ``"as_5"`` charges CSWAP/TOFFOLI five timesteps, and
    ``"native"`` charges one.
    """

    ccphase: str = "decomposed"
    toffoli: str = "as_5"

    def __post_init__(self) -> None:
        if self.ccphase not in ("depth_1", "decomposed"):
            raise ValueError(f"unknown ccphase convention {self.ccphase!r}")
        if self.toffoli not in ("as_5", "native"):
            raise ValueError(f"unknown toffoli convention {self.toffoli!r}")

    def __str__(self) -> str:
        return f"ccphase_{self.ccphase}+toffoli_{self.toffoli}"


DEFAULT = Convention()
CCPHASE_DEPTH_1 = Convention(ccphase="depth_1")


def _expanded(gates: Iterable[Gate], conv: Convention) -> Iterable[Gate]:
    for g in gates:
        if g.kind is GateKind.CCPHASE and conv.ccphase == "decomposed":
            yield from decompose_ccphase(g).gates
        else:
            yield g


def _duration(g: Gate, conv: Convention) -> int:
    if g.kind in (GateKind.CSWAP, GateKind.TOFFOLI) and conv.toffoli == "as_5":
        return THREE_QUBIT_EQUIV
    return 1


def schedule(circuit: Circuit, conv: Convention = DEFAULT) -> list[int]:
    """ASAP start step of every (expanded) gate."""
    ready = [0] * circuit.width
    starts = []
    for g in _expanded(circuit.gates, conv):
        t = max(ready[q] for q in g.qubits)
        starts.append(t)
        end = t + _duration(g, conv)
        for q in g.qubits:
            ready[q] = end
    return starts


def schedule_depth(circuit: Circuit, conv: Convention = DEFAULT) -> int:
    ready = [0] * circuit.width
    for g in _expanded(circuit.gates, conv):
        end = max(ready[q] for q in g.qubits) + _duration(g, conv)
        for q in g.qubits:
            ready[q] = end
    return max(ready, default=0)


@dataclass
class Cost:
    one_q: int = 0
    two_q: int = 0
    three_q: int = 0

    @property
    def total(self) -> int:
        """One- and two-qubit gates plus five per 3-qubit gate."""
        return self.one_q + self.two_q + THREE_QUBIT_EQUIV * self.three_q

    def add(self, g: Gate) -> None:
        k = len(g.qubits)
        if k == 1:
            self.one_q += 1
        elif k == 2:
            self.two_q += 1
        else:
            self.three_q += 1


def _cost_gates(g: Gate, conv: Convention) -> Iterable[Gate]:
    if g.kind is GateKind.CCPHASE and conv.ccphase == "decomposed":
        return decompose_ccphase(g).gates
    if g.kind is GateKind.CSWAP:
        # two CNOTs around a Toffoli
        c, a, b = g.qubits
        return (Gate(GateKind.CNOT, (b, a)), Gate(GateKind.TOFFOLI, (c, a, b)), Gate(GateKind.CNOT, (b, a)))
    return (g,)


def count_cost(circuit: Circuit, conv: Convention = DEFAULT) -> Cost:
    cost = Cost()
    for g in circuit.gates:
        for sub in _cost_gates(g, conv):
            cost.add(sub)
    return cost


def block_costs(circuit: Circuit, conv: Convention = DEFAULT) -> dict[str, int]:
    """Cost attributed to the innermost enclosing block of each gate."""
    owner = [UNTAGGED] * len(circuit.gates)
    # blocks are nested or disjoint; painting outer before inner leaves the innermost
    for blk in sorted(circuit.blocks, key=lambda b: (b.start, -b.end)):
        for i in range(blk.start, blk.end):
            owner[i] = blk.tag
    out: dict[str, int] = defaultdict(int)
    for tag, g in zip(owner, circuit.gates):
        c = Cost()
        for sub in _cost_gates(g, conv):
            c.add(sub)
        out[tag] += c.total
    return dict(out)


@dataclass
class ResourceReport:
    width: int
    depth: int
    cost: Cost
    per_block: dict[str, int] = field(default_factory=dict)
    convention: str = str(DEFAULT)


def analyze(circuit: Circuit, conv: Convention = DEFAULT) -> ResourceReport:
    return ResourceReport(
        circuit.width, schedule_depth(circuit, conv), count_cost(circuit, conv), block_costs(circuit, conv), str(conv)
    )


def gate_histogram(circuit: Circuit) -> Counter:
    return Counter(g.kind for g in circuit.gates)


# Target (depth, cost) formulas per unit, keyed by version.

TARGET_UNITS = {
    1: {
        "QFT(2n)": (lambda n: 4 * n - 1, lambda n: 10 * n * (n + 1)),
        "PhiMAC(n)": (lambda n: 8 * n, lambda n: 4 * n * (n + 1)),
        "GMPhiDIV1(2n)": (lambda n: 488 * n - 8, lambda n: 700 * n * n + 298 * n),
        "CNOT": (lambda n: 1, lambda n: n),
        "CSWAP(n)": (lambda n: 5 * n, lambda n: 5 * n),
        "total": (lambda n: 2021 * n - 38, lambda n: 2896 * n * n + 1299 * n),
    },
    2: {
        "QFT(2n)": (lambda n: 4 * n - 1, lambda n: 10 * n * (n + 1)),
        "PhiMAC(n)": (lambda n: 8 * n, lambda n: 4 * n * (n + 1)),
        "GMPhiDIV2(n)": (lambda n: 244 * n - 8, lambda n: 175 * n * n + 149 * n),
        "CNOT": (lambda n: 1, lambda n: n),
        "CSWAP(n)": (lambda n: 5 * n, lambda n: 5 * n),
        "total": (lambda n: 1045 * n - 38, lambda n: 796 * n * n + 629 * n),
    },
}

TARGET_WIDTH = {1: lambda n: 17 * n + 2, 2: lambda n: 9 * n + 2}


@dataclass
class UnitRow:
    n: int
    unit: str
    measured_depth: int
    target_depth: int
    measured_cost: int
    target_cost: int
    width: int

    @property
    def depth_ratio(self) -> float:
        return self.measured_depth / self.target_depth if self.target_depth else float("nan")


def _unit_circuits(n: int, version: int) -> dict[str, Circuit]:
    # local imports: modmul pulls in the divider and sim-independent builders only
    from .adders import build_qft
    from .divider import build_gmphidiv
    from .mac import build_phimac
    from .modmul import build_cswap_layer, build_copy_layer

    if version == 1:
        div = build_gmphidiv(2 * n, (1 << (2 * n)) - 1, "generic")
        copy = build_copy_layer(2 * n)
        div_name = "GMPhiDIV1(2n)"
    else:
        div = build_gmphidiv(n, (1 << n) - 1, "constrained")
        copy = build_copy_layer(n)
        div_name = "GMPhiDIV2(n)"
    return {
        "QFT(2n)": build_qft(2 * n),
        "PhiMAC(n)": build_phimac(n, (1 << n) - 1),
        div_name: div,
        "CNOT": copy,
        "CSWAP(n)": build_cswap_layer(n),
    }


def report_rows(n: int, version: int, conv: Convention = DEFAULT) -> list[UnitRow]:
    """Measured-vs-target rows for one n.  The multiplier is built for the
    largest odd modulus below 2^n with a = 2 so every unit is populated."""
    from .modmul import build_phimul_mod

    if version not in TARGET_UNITS:
        raise ValueError("version must be 1 or 2")
    formulas = TARGET_UNITS[version]
    rows = []
    for name, circ in _unit_circuits(n, version).items():
        pd, pc = formulas[name]
        rows.append(
            UnitRow(n, name, schedule_depth(circ, conv), pd(n), count_cost(circ, conv).total, pc(n), circ.width)
        )
    modulus = (1 << n) - 1
    full = build_phimul_mod(n, 2, modulus, version)
    pd, pc = formulas["total"]
    rows.append(
        UnitRow(n, "total", schedule_depth(full, conv), pd(n), count_cost(full, conv).total, pc(n), full.width)
    )
    return rows


def report_tables(n_range: Iterable[int], version: int, conv: Convention = DEFAULT, jobs: int = 1) -> list[UnitRow]:
    ns = list(n_range)
    if jobs > 1 and len(ns) > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(jobs) as pool:
            chunks = list(pool.map(report_rows, ns, [version] * len(ns), [conv] * len(ns)))
    else:
        chunks = [report_rows(n, version, conv) for n in ns]
    return [row for chunk in chunks for row in chunk]


def format_table(rows: list[UnitRow]) -> str:
    head = f"{'n':>3} {'unit':<14} {'depth':>8} {'target':>8} {'ratio':>6} {'cost':>9} {'target':>9} {'width':>6}"
    lines = [head, "-" * len(head)]
    for r in rows:
        lines.append(
            f"{r.n:>3} {r.unit:<14} {r.measured_depth:>8} {r.target_depth:>8} {r.depth_ratio:>6.2f} "
            f"{r.measured_cost:>9} {r.target_cost:>9} {r.width:>6}"
        )
    return "\n".join(lines)


def rows_to_json(rows: list[UnitRow]) -> str:
    return json.dumps([asdict(r) for r in rows], indent=1)
