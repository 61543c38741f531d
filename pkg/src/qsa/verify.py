"""Oracle sweeps: build a named block, feed it basis inputs, compare with
classical arithmetic and check that ancillae come back clean."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterator

import numpy as np

from .adders import (
    build_ccphi_add_const,
    build_cphi_add_const,
    build_phi_add_const,
    build_phi_add_generic,
    build_qft,
    in_fourier,
)
from .classical import gm_divide
from .core import Circuit, RegisterMap, concat
from .divider import build_gmphidiv, dividend_bound
from .errors import QuotientOverflow
from .mac import build_phimac, build_phimac_cascade
from .modmul import build_modexp, build_phimac_mod, build_phimul_mod
from .sim import StructuredProgram, dense_run

ENGINES = ("structured", "dense")


@dataclass
class Spec:
    """A circuit plus the domain of inputs and the oracle for it."""

    circuit: Circuit
    domain: Callable[[], Iterator[dict[str, int]]]
    size: int
    oracle: Callable[[dict[str, int]], dict[str, int]]

    @property
    def registers(self) -> RegisterMap:
        return self.circuit.registers


def _grid(**ranges: int) -> Callable[[], Iterator[dict[str, int]]]:
    names = list(ranges)

    def gen() -> Iterator[dict[str, int]]:
        for idx in np.ndindex(*[ranges[k] for k in names]):
            yield {k: int(v) for k, v in zip(names, idx)}

    return gen


def _size(**ranges: int) -> int:
    return int(np.prod(list(ranges.values()), dtype=object))


def make_spec(block: str, p: dict) -> Spec:
    """Build the circuit named ``block`` with parameters ``p``."""
    if block == "qft":
        w = p["width"]
        c = concat(build_qft(w, p.get("cutoff")), build_qft(w, p.get("cutoff"), inverse=True))
        return Spec(c, _grid(b=1 << w), 1 << w, lambda v: v)
    if block in ("phiadd", "cphiadd", "ccphiadd"):
        w, k = p["width"], p["k"]
        mod = 1 << w
        builder = {"phiadd": build_phi_add_const, "cphiadd": build_cphi_add_const, "ccphiadd": build_ccphi_add_const}
        c = in_fourier(builder[block](w, k), range(w), p.get("cutoff"))
        ctrls = {"phiadd": [], "cphiadd": ["c"], "ccphiadd": ["c1", "c2"]}[block]
        ranges = {"b": mod, **{name: 2 for name in ctrls}}

        def oracle(v: dict[str, int]) -> dict[str, int]:
            on = all(v[name] for name in ctrls)
            return {**v, "b": (v["b"] + k * on) % mod}

        return Spec(c, _grid(**ranges), _size(**ranges), oracle)
    if block == "phiadd_generic":
        w = p["width"]
        c = build_phi_add_generic(list(range(w)), w)
        c = in_fourier(c, c.registers["b"].qubits)
        return Spec(c, _grid(a=1 << w, b=1 << w), 1 << (2 * w), lambda v: {**v, "b": (v["a"] + v["b"]) % (1 << w)})
    if block in ("phimac", "phimac_cascade"):
        n, a = p["n"], p["a"]
        build = build_phimac if block == "phimac" else build_phimac_cascade
        c = build(n, a)
        c = in_fourier(c, c.registers["b"].qubits)
        mod = 1 << (2 * n)
        ranges = {"c": 2, "x": 1 << n, "b": mod}
        return Spec(c, _grid(**ranges), _size(**ranges), lambda v: {**v, "b": (v["b"] + v["c"] * a * v["x"]) % mod})
    if block == "gmphidiv":
        n, d, mode = p["n"], p["d"], p.get("mode", "constrained")
        c = build_gmphidiv(n, d, mode)
        bound = dividend_bound(n, d, mode)

        def oracle(v: dict[str, int]) -> dict[str, int]:
            q, r = gm_divide(v["z"], d, n)
            return {"z": r, "q": q}

        return Spec(c, _grid(z=bound), bound, oracle)
    if block in ("phimacmod", "phimulmod"):
        n, a, N, version = p["n"], p["a"], p["N"], p.get("version", 2)
        if block == "phimacmod":
            c = build_phimac_mod(n, a, N, version)
            oracle = lambda v: {**v, "r": (a * v["y"] % N) if v["c"] else 0}  # noqa: E731
        else:
            c = build_phimul_mod(n, a, N, version)
            oracle = lambda v: {**v, "y": (a * v["y"] % N) if v["c"] else v["y"]}  # noqa: E731
        return Spec(c, _grid(c=2, y=N), 2 * N, oracle)
    if block == "modexp":
        n, a, N, version = p["n"], p["a"], p["N"], p.get("version", 2)
        c = build_modexp(n, a, N, version)
        return Spec(c, _grid(x=1 << (2 * n)), 1 << (2 * n), lambda v: {**v, "y": pow(a, v["x"], N)})
    raise ValueError(f"unknown block {block!r}")


BLOCKS = (
    "qft", "phiadd", "cphiadd", "ccphiadd", "phiadd_generic", "phimac", "phimac_cascade",
    "gmphidiv", "phimacmod", "phimulmod", "modexp",
)


def make_runner(circuit: Circuit, engine: str) -> Callable[[int], int | None]:
    """Basis-in, basis-out runner (``None`` when the output is not a basis state)."""
    if engine == "structured":
        prog = StructuredProgram(circuit)
        return lambda basis: prog.run(basis)[0]
    if engine == "dense":
        return lambda basis: dense_run(circuit, basis).basis_value()
    raise ValueError(f"engine must be one of {ENGINES}")


@dataclass
class Failure:
    inputs: dict[str, int]
    expected: dict[str, int]
    got: dict[str, int] | None


@dataclass
class VerifyReport:
    block: str
    engine: str
    cases: int = 0
    failures: list[Failure] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.cases > 0 and not self.failures


def _check(spec: Spec, inputs: list[dict[str, int]], engine: str) -> list[Failure]:
    regs = spec.registers
    runner = make_runner(spec.circuit, engine)
    out = []
    for v in inputs:
        try:
            want = spec.oracle(v)
        except QuotientOverflow:
            continue
        got = runner(regs.encode(**v))
        # every register not named by the oracle must end at zero
        if got != regs.encode(**want):
            out.append(Failure(v, want, None if got is None else regs.decode_all(got)))
    return out


def _worker(args: tuple) -> list[Failure]:
    block, params, engine, inputs = args
    return _check(make_spec(block, params), inputs, engine)


def select_inputs(spec: Spec, random_k: int | None, rng: np.random.Generator) -> list[dict[str, int]]:
    cases = list(spec.domain())
    if random_k is not None and random_k < len(cases):
        picks = rng.choice(len(cases), size=random_k, replace=False)
        cases = [cases[i] for i in sorted(picks)]
    return cases


def verify(
    block: str,
    params: dict,
    engine: str = "structured",
    random_k: int | None = None,
    seed: int = 0,
    jobs: int = 1,
) -> VerifyReport:
    spec = make_spec(block, params)
    inputs = select_inputs(spec, random_k, np.random.default_rng(seed))
    report = VerifyReport(block, engine, len(inputs))
    if jobs > 1 and len(inputs) > jobs:
        chunks = [inputs[i::jobs] for i in range(jobs)]
        with ProcessPoolExecutor(jobs) as pool:
            for fails in pool.map(_worker, [(block, params, engine, ch) for ch in chunks]):
                report.failures.extend(fails)
        report.failures.sort(key=lambda f: sorted(f.inputs.items()))
    else:
        report.failures = _check(spec, inputs, engine)
    return report
