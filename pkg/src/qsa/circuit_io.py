"""Plain-text circuit format.

One gate per line, lowercase, space separated::

    qubits 3
    #reg b accumulator 0 1 2
    #block begin qft
    h 2
    cp 1 2 1/2^2
    #block end qft
    measure 0 -> m0
    cx? m0 1
    cp? m0 2 3/2^3

``#reg`` and ``#block`` lines are comments to foreign readers; any other
``#`` line is ignored.  Printing a parsed printer-produced file reproduces
it byte for byte.
"""

from __future__ import annotations

from pathlib import Path

from .core import Angle, Block, Circuit, Gate, GateKind, Register, RegisterMap
from .errors import CircuitFormatError

_NAMES = {
    GateKind.H: "h",
    GateKind.X: "x",
    GateKind.CNOT: "cx",
    GateKind.SWAP: "swap",
    GateKind.CSWAP: "cswap",
    GateKind.TOFFOLI: "ccx",
    GateKind.PHASE: "p",
    GateKind.CPHASE: "cp",
    GateKind.CCPHASE: "ccp",
}
_KINDS = {v: k for k, v in _NAMES.items()}


def format_gate(g: Gate) -> str:
    if g.kind is GateKind.MEASURE:
        return f"measure {g.qubits[0]} -> m{g.clbit}"
    if g.kind is GateKind.CLASSIC_X:
        return f"cx? m{g.clbit} {g.qubits[0]}"
    if g.kind is GateKind.CLASSIC_PHASE:
        return f"cp? m{g.clbit} {g.qubits[0]} {g.angle}"
    parts = [_NAMES[g.kind], *map(str, g.qubits)]
    if g.angle is not None:
        parts.append(str(g.angle))
    return " ".join(parts)


def dumps(c: Circuit) -> str:
    lines = [f"qubits {c.width}"]
    for reg in c.registers.values():
        lines.append(" ".join(["#reg", reg.name, reg.role or "-", *map(str, reg.qubits)]))
    stack: list[Block] = []
    pending = c.blocks
    nxt = 0
    for i in range(len(c.gates) + 1):
        while nxt < len(pending) and pending[nxt].start == i:
            blk = pending[nxt]
            nxt += 1
            while stack and stack[-1].end <= blk.start:
                lines.append(f"#block end {stack.pop().tag}")
            lines.append(f"#block begin {blk.tag}")
            stack.append(blk)
        while stack and stack[-1].end <= i:
            lines.append(f"#block end {stack.pop().tag}")
        if i < len(c.gates):
            lines.append(format_gate(c.gates[i]))
    return "\n".join(lines) + "\n"


def _int(tok: str, lineno: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise CircuitFormatError(f"line {lineno}: expected integer, got {tok!r}") from None


def _clbit(tok: str, lineno: int) -> int:
    if not tok.startswith("m"):
        raise CircuitFormatError(f"line {lineno}: expected m<i>, got {tok!r}")
    return _int(tok[1:], lineno)


def _angle(tok: str, lineno: int) -> Angle:
    try:
        return Angle.parse(tok)
    except ValueError as exc:
        raise CircuitFormatError(f"line {lineno}: {exc}") from None


def parse_gate(line: str, lineno: int = 0) -> Gate:
    toks = line.split()
    op = toks[0]
    try:
        if op == "measure":
            if len(toks) != 4 or toks[2] != "->":
                raise CircuitFormatError(f"line {lineno}: expected 'measure q -> m<i>'")
            return Gate(GateKind.MEASURE, (_int(toks[1], lineno),), clbit=_clbit(toks[3], lineno))
        if op == "cx?":
            if len(toks) != 3:
                raise CircuitFormatError(f"line {lineno}: expected 'cx? m<i> q'")
            return Gate(GateKind.CLASSIC_X, (_int(toks[2], lineno),), clbit=_clbit(toks[1], lineno))
        if op == "cp?":
            if len(toks) != 4:
                raise CircuitFormatError(f"line {lineno}: expected 'cp? m<i> q k/2^p'")
            return Gate(
                GateKind.CLASSIC_PHASE,
                (_int(toks[2], lineno),),
                _angle(toks[3], lineno),
                _clbit(toks[1], lineno),
            )
        kind = _KINDS.get(op)
        if kind is None:
            raise CircuitFormatError(f"line {lineno}: unknown gate {op!r}")
        if kind in (GateKind.PHASE, GateKind.CPHASE, GateKind.CCPHASE):
            qubits = tuple(_int(t, lineno) for t in toks[1:-1])
            return Gate(kind, qubits, _angle(toks[-1], lineno))
        return Gate(kind, tuple(_int(t, lineno) for t in toks[1:]))
    except ValueError as exc:
        raise CircuitFormatError(f"line {lineno}: {exc}") from None


def loads(text: str) -> Circuit:
    width = None
    gates: list[Gate] = []
    blocks: list[Block] = []
    open_blocks: list[tuple[int, str]] = []
    regs: list[Register] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            toks = line.split()
            if toks[0] == "#block" and len(toks) == 3 and toks[1] == "begin":
                open_blocks.append((len(blocks), toks[2]))
                blocks.append(Block(toks[2], len(gates), -1))
            elif toks[0] == "#block" and len(toks) == 3 and toks[1] == "end":
                if not open_blocks or open_blocks[-1][1] != toks[2]:
                    raise CircuitFormatError(f"line {lineno}: unmatched block end {toks[2]!r}")
                slot, tag = open_blocks.pop()
                blocks[slot] = Block(tag, blocks[slot].start, len(gates))
            elif toks[0] == "#reg" and len(toks) >= 3:
                role = "" if toks[2] == "-" else toks[2]
                regs.append(Register(toks[1], tuple(_int(t, lineno) for t in toks[3:]), role))
            continue
        if width is None:
            toks = line.split()
            if len(toks) != 2 or toks[0] != "qubits":
                raise CircuitFormatError(f"line {lineno}: expected 'qubits N' header")
            width = _int(toks[1], lineno)
            continue
        gates.append(parse_gate(line, lineno))
    if width is None:
        raise CircuitFormatError("missing 'qubits N' header")
    if open_blocks:
        raise CircuitFormatError(f"unterminated block {open_blocks[-1][1]!r}")
    try:
        return Circuit(width, tuple(gates), tuple(blocks), RegisterMap(regs))
    except ValueError as exc:
        raise CircuitFormatError(str(exc)) from None


def save(c: Circuit, path: str | Path) -> None:
    Path(path).write_text(dumps(c), encoding="utf-8")


def load(path: str | Path) -> Circuit:
    return loads(Path(path).read_text(encoding="utf-8"))
