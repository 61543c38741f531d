"""Acceptance suite: one check per criterion, each printing a PASS/FAIL line.

Run with pytest (lines appear in the terminal summary) or directly:
``python3 tests/test_acceptance.py``.
"""

from __future__ import annotations

import time
from collections import Counter
from math import gcd
from typing import Callable, Iterator

import numpy as np

from qsa.adders import (
    build_ccphi_add_const,
    build_cphi_add_const,
    build_phi_add_const,
    build_phi_add_generic,
    build_qft,
    in_fourier,
)
from qsa.classical import gm_divide
from qsa.core import Circuit, concat, invert_circuit
from qsa.divider import build_gmphidiv, build_gmphidiv_inverse
from qsa.errors import EntanglementViolation
from qsa.mac import build_phimac, build_phimac_cascade, build_phimac_inverse
from qsa.modmul import build_copy_layer, build_cswap_layer, build_modexp, build_phimac_mod, build_phimul_mod
from qsa.resources import count_cost, report_rows, schedule_depth
from qsa.sim import DenseState, StructuredProgram, dense_run, unitary
from qsa.sim.shor import factor, measure_phase
from qsa.verify import make_spec, verify

Check = tuple[bool, str, list[str]]
DENSE_LIMIT = 22


def _timed(budget_s: float, body) -> Check:
    t0 = time.perf_counter()
    ok, detail, extra = body()
    elapsed = time.perf_counter() - t0
    within = elapsed < budget_s
    detail = f"{detail}; {elapsed:.1f}s (budget {budget_s:.0f}s)"
    if not within:
        detail += " over budget"
    return ok and within, detail, extra


# --- 1 ---------------------------------------------------------------------


def _c1() -> Check:
    cases = 0
    bad = 0
    for w in (2, 3):
        for k in range(1 << w):
            rep = verify("phiadd", {"width": w, "k": k}, engine="dense")
            cases += rep.cases
            bad += len(rep.failures)
    rng = np.random.default_rng(1)
    w = 8
    progs: dict[int, tuple[StructuredProgram, Circuit]] = {}
    for _ in range(1000):
        k, b = (int(v) for v in rng.integers(0, 1 << w, size=2))
        if k not in progs:
            c = in_fourier(build_phi_add_const(w, k), range(w))
            progs[k] = (StructuredProgram(c), c)
        out, _ = progs[k][0].run(b)
        cases += 1
        bad += out != (b + k) % (1 << w)
    return bad == 0, f"adder exact on {cases} cases, {bad} mismatches", []


def check_1() -> Check:
    return _timed(60, _c1)


# --- 2 ---------------------------------------------------------------------

MAC_A4 = (1, 6, 11, 15)


def _c2() -> Check:
    worst = 0.0
    for a in range(4):
        u1 = unitary(build_phimac(2, a))
        u2 = unitary(build_phimac_cascade(2, a))
        worst = max(worst, float(np.max(np.abs(u1 - u2))))
    dense_ok = worst < 1e-9
    cases = 0
    bad = 0
    for a in MAC_A4:
        rep = verify("phimac", {"n": 4, "a": a})
        cases += rep.cases
        bad += len(rep.failures)
    ok = dense_ok and bad == 0
    return ok, f"n=2 max |U_dec - U_cas| = {worst:.1e}; n=4 contract {cases} cases, {bad} mismatches", []


def check_2() -> Check:
    return _timed(300, _c2)


# --- 3 ---------------------------------------------------------------------


def _c3() -> Check:
    rng = np.random.default_rng(3)
    bad = []
    for n in range(2, 17):
        for a in {(1 << n) - 1, 1, int(rng.integers(0, 1 << n))}:
            c = build_phimac(n, a)
            d, cost = schedule_depth(c), count_cost(c).total
            if d != 8 * n or cost != 4 * n * (n + 1):
                bad.append(f"n={n} a={a}: depth {d} cost {cost}")
    return not bad, f"depth 8n and cost 4n(n+1) for n in [2,16]; {len(bad)} mismatches", bad


def check_3() -> Check:
    return _timed(60, _c3)


# --- 4 ---------------------------------------------------------------------


def divisor_sample(n: int) -> list[int]:
    return sorted({d for d in (1, 2, 3, 5, 7, 1 << (n - 1), (1 << (n - 1)) + 1) if d < (1 << n)})


def _c4() -> Check:
    rep = verify("gmphidiv", {"n": 4, "d": 5, "mode": "constrained"})
    bad = [f"n=4 d=5: {len(rep.failures)} failures"] if not rep.passed or rep.cases != 80 else []
    cases = rep.cases
    for n in range(3, 9):
        for d in divisor_sample(n):
            for mode in ("constrained", "generic"):
                r = verify("gmphidiv", {"n": n, "d": d, "mode": mode}, random_k=1000, seed=n * 1000 + d)
                cases += r.cases
                if r.failures:
                    bad.append(f"n={n} d={d} {mode}: {len(r.failures)} failures")
    return not bad, f"{cases} dividends exact, {len(bad)} failing configurations", bad


def check_4() -> Check:
    return _timed(300, _c4)


# --- 5 ---------------------------------------------------------------------


def _c5() -> Check:
    cases = 0
    bad = []
    for modulus in (13, 15):
        for a in range(1, modulus):
            if gcd(a, modulus) != 1:
                continue
            for version in (1, 2):
                rep = verify("phimulmod", {"n": 4, "a": a, "N": modulus, "version": version})
                cases += rep.cases
                if not rep.passed:
                    bad.append(f"N={modulus} a={a} v{version}: {len(rep.failures)} failures")
    return not bad, f"{cases} (c, y) cases exact with clean ancillae, {len(bad)} failing", bad


def check_5() -> Check:
    return _timed(600, _c5)


# --- 6 ---------------------------------------------------------------------

COMPOSITE = {
    "GMPhiDIV2(n)": (2, lambda n: 244 * n - 8),
    "PhiMUL_MOD2": (2, lambda n: 1045 * n - 38),
    "PhiMUL_MOD1": (1, lambda n: 2021 * n - 38),
}


def _c6() -> Check:
    widths_bad = []
    rows = {1: {}, 2: {}}
    for version in (1, 2):
        for n in range(4, 17):
            rows[version][n] = {r.unit: r for r in report_rows(n, version)}
    for n in range(2, 17):
        if n >= 4:
            div_w = rows[2][n]["GMPhiDIV2(n)"].width
            v2_w, v1_w = rows[2][n]["total"].width, rows[1][n]["total"].width
        else:
            div_w = build_gmphidiv(n, (1 << n) - 1).width
            v2_w = build_phimul_mod(n, 2, (1 << n) - 1, 2).width
            v1_w = build_phimul_mod(n, 2, (1 << n) - 1, 1).width
        for name, got, want in (("divider", div_w, 7 * n + 1), ("v2", v2_w, 9 * n + 2), ("v1", v1_w, 17 * n + 2)):
            if got != want:
                widths_bad.append(f"width {name} n={n}: {got} != {want}")
    qft_bad = [w for w in range(1, 33) if schedule_depth(build_qft(w)) != 2 * w - 1]

    report = []
    depth_ok = True
    for unit, (version, formula) in COMPOSITE.items():
        key = unit if unit.startswith("GM") else "total"
        outside = []
        ratios = []
        for n in range(4, 17):
            measured = rows[version][n][key].measured_depth
            target = formula(n)
            ratio = measured / target
            ratios.append(ratio)
            if abs(ratio - 1) > 0.10:
                outside.append(f"n={n} {measured}/{target}")
        depth_ok &= not outside
        report.append(
            f"{unit}: measured/target depth ratio {min(ratios):.3f}..{max(ratios):.3f}; "
            f"{len(outside)}/13 outside 10%" + (f" (e.g. {', '.join(outside[:3])})" if outside else "")
        )
    ok = not widths_bad and not qft_bad and depth_ok
    detail = (
        f"widths {'exact' if not widths_bad else 'MISMATCH'} for n in [2,16]; "
        f"QFT depth 2w-1 {'exact' if not qft_bad else 'MISMATCH'}; "
        f"composite depths {'within' if depth_ok else 'outside'} 10%"
    )
    return ok, detail, widths_bad + [f"qft width {w}" for w in qft_bad] + report


def check_6() -> Check:
    return _timed(120, _c6)


# --- 7 ---------------------------------------------------------------------


def adder_success_probability(w: int, cutoff: int) -> float:
    """Mean probability of reading (b+k) mod 2^w over all b, k."""
    total = 0.0
    for k in range(1 << w):
        c = in_fourier(build_phi_add_const(w, k), range(w), cutoff)
        for b in range(1 << w):
            total += dense_run(c, b).probabilities()[(b + k) % (1 << w)]
    return total / (1 << (2 * w))


def _c7() -> Check:
    same = all(Counter(build_qft(w, w).gates) == Counter(build_qft(w).gates) for w in range(1, 13))
    lines = []
    ok = same
    for w in (2, 4):
        probs = [adder_success_probability(w, m) for m in range(w, 0, -1)]
        full_ok = abs(probs[0] - 1) < 1e-12
        mono = all(probs[i + 1] <= probs[i] + 1e-12 for i in range(len(probs) - 1))
        ok &= full_ok and mono
        lines.append(f"n={w}: " + ", ".join(f"cutoff {w - i}: {p:.4f}" for i, p in enumerate(probs)))
    detail = f"cutoff=width multiset {'identical' if same else 'DIFFERS'}; n=2 cutoff 2/1 success " + lines[0].split(": ", 1)[1]
    return ok, detail, lines


def check_7() -> Check:
    return _timed(60, _c7)


# --- 8 ---------------------------------------------------------------------


def _c8() -> Check:
    lines = []
    ok = True
    for modulus, pair in ((15, (3, 5)), (21, (3, 7))):
        wins = 0
        for batch in range(100):
            got, _ = factor(modulus, np.random.default_rng(batch), attempts=20)
            wins += got is not None and tuple(sorted(got)) == pair
        ok &= wins / 100 >= 0.99
        lines.append(f"N={modulus}: {wins}/100 batches factored")
    rng = np.random.default_rng(8)
    n = 4
    span = 1 << (2 * n)
    step = span // 4
    hits = 0
    runs = 10_000
    for _ in range(runs):
        y = measure_phase(7, 15, n, rng)
        off = y % step
        hits += min(off, step - off) <= 1
    mass = hits / runs
    ok &= mass >= 0.9
    lines.append(f"N=15 a=7 phase mass on multiples of {step} (+-1): {mass:.4f}")
    return ok, "; ".join(lines), []


def check_8() -> Check:
    return _timed(300, _c8)


# --- 9 ---------------------------------------------------------------------


def random_basis(rng: np.random.Generator, width: int) -> int:
    return int.from_bytes(rng.bytes(width // 8 + 1), "little") % (1 << width)


def reversible_builders(n: int) -> Iterator[tuple[str, Circuit, Circuit]]:
    """(name, forward, inverse) for every builder at size n, built lazily."""
    modulus = {2: 3, 6: 61}.get(n, (1 << n) - 1)
    a = 2
    d = (1 << (n - 1)) + 1
    k = (1 << n) - 3
    pairs: list[tuple[str, Callable[[], Circuit], Callable[[], Circuit] | None]] = [
        ("qft", lambda: build_qft(2 * n), lambda: build_qft(2 * n, inverse=True)),
        ("aqft", lambda: build_qft(2 * n, n), lambda: build_qft(2 * n, n, inverse=True)),
        ("phiadd", lambda: build_phi_add_const(n, k), None),
        ("cphiadd", lambda: build_cphi_add_const(n, k), None),
        ("ccphiadd", lambda: build_ccphi_add_const(n, k), None),
        ("phiadd_generic", lambda: build_phi_add_generic(list(range(n)), n), None),
        ("phimac", lambda: build_phimac(n, k), lambda: build_phimac_inverse(n, k)),
        (
            "phimac_uncontrolled",
            lambda: build_phimac(n, k, controlled=False),
            lambda: build_phimac_inverse(n, k, controlled=False),
        ),
        ("phimac_cascade", lambda: build_phimac_cascade(n, k), None),
        ("gmphidiv2", lambda: build_gmphidiv(n, d), lambda: build_gmphidiv_inverse(n, d)),
        ("gmphidiv1", lambda: build_gmphidiv(n, d, "generic"), lambda: build_gmphidiv_inverse(n, d, "generic")),
        ("copy", lambda: build_copy_layer(n), None),
        ("cswap", lambda: build_cswap_layer(n), None),
    ]
    for version in (1, 2):
        pairs += [
            (f"phimac_mod{version}", lambda v=version: build_phimac_mod(n, a, modulus, v), None),
            (f"phimul_mod{version}", lambda v=version: build_phimul_mod(n, a, modulus, v), None),
            (f"modexp{version}", lambda v=version: build_modexp(n, a, modulus, v), None),
        ]
    for name, fwd, inv in pairs:
        f = fwd()
        yield name, f, inv() if inv is not None else invert_circuit(f)


def _dense_identity(circ: Circuit, rng: np.random.Generator) -> bool:
    """Round trip a random full-support state: every basis input at once."""
    dim = 1 << circ.width
    psi = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    psi /= np.linalg.norm(psi)
    out = dense_run(circ, DenseState(circ.width, psi.copy())).amplitudes
    return bool(np.allclose(out, psi, atol=1e-9))


def _structured_identity(prog: StructuredProgram, inputs) -> int:
    return sum(prog.run(b)[0] != b for b in inputs)


def _c9() -> Check:
    rng = np.random.default_rng(9)
    count = 0
    bad = []
    notes = []
    for name, fwd, inv in reversible_builders(2):
        count += 1
        rt = concat(fwd, inv)
        prog = StructuredProgram(rt)
        w = rt.width
        if w <= DENSE_LIMIT and not _dense_identity(rt, rng):
            bad.append(f"n=2 {name}: dense round trip differs")
        if w <= 16:
            inputs = range(1 << w)
        else:
            inputs = [random_basis(rng, w) for _ in range(1000)]
            notes.append(f"n=2 {name} ({w} qubits): {'dense superposition + ' if w <= DENSE_LIMIT else ''}1000 random basis inputs")
        miss = _structured_identity(prog, inputs)
        if miss:
            bad.append(f"n=2 {name}: {miss} basis inputs not restored")
    for name, fwd, inv in reversible_builders(6):
        rt = concat(fwd, inv)
        inputs = [random_basis(rng, rt.width) for _ in range(100)]
        miss = _structured_identity(StructuredProgram(rt), inputs)
        if miss:
            bad.append(f"n=6 {name}: {miss}/100 inputs not restored")
    return not bad, f"{count} builders round-trip to identity at n=2 and n=6 (100 random inputs)", bad + notes


def check_9() -> Check:
    return _timed(120, _c9)


# --- 10 --------------------------------------------------------------------


def cross_engine_blocks(n: int = 2) -> list[tuple[str, dict]]:
    out: list[tuple[str, dict]] = [("qft", {"width": w}) for w in (1, 2, 4)]
    for block in ("phiadd", "cphiadd", "ccphiadd"):
        out += [(block, {"width": n, "k": k}) for k in range(1 << n)]
    out.append(("phiadd_generic", {"width": n}))
    for block in ("phimac", "phimac_cascade"):
        out += [(block, {"n": n, "a": a}) for a in range(1 << n)]
    for d in range(1, 1 << n):
        out += [("gmphidiv", {"n": n, "d": d, "mode": m}) for m in ("constrained", "generic")]
    for version in (1, 2):
        for block in ("phimacmod", "phimulmod", "modexp"):
            out += [(block, {"n": n, "a": a, "N": 3, "version": version}) for a in (1, 2)]
    return out


def _c10() -> Check:
    bad = []
    violations = []
    compared = 0
    skipped = set()
    for block, params in cross_engine_blocks():
        spec = make_spec(block, params)
        circ = spec.circuit
        prog = StructuredProgram(circ)
        if circ.width <= 10:
            inputs = list(range(1 << circ.width))
        else:
            inputs = [spec.registers.encode(**v) for v in spec.domain()]
        label = f"{block} {params}"
        for basis in inputs:
            try:
                _, st = prog.run(basis)
            except EntanglementViolation as exc:
                violations.append(f"{label} input {basis}: {exc}")
                continue
            if circ.width > DENSE_LIMIT:
                skipped.add(f"{block} v{params.get('version')} ({circ.width} qubits)")
                continue
            compared += 1
            dense = dense_run(circ, basis).amplitudes
            if not np.allclose(st.to_dense(), dense, atol=1e-9):
                bad.append(f"{label} input {basis}: state vectors differ")
    ok = not bad and not violations
    detail = f"{compared} runs agree as full state vectors; {len(violations)} entanglement violations"
    extra = bad[:10] + violations[:10] + [f"structured only, beyond dense limit: {s}" for s in sorted(skipped)]
    return ok, detail, extra


def check_10() -> Check:
    return _timed(300, _c10)


CHECKS = {i: globals()[f"check_{i}"] for i in range(1, 11)}


def _run(num: int, acceptance: dict) -> None:
    ok, detail, extra = CHECKS[num]()
    acceptance[num] = (ok, detail, extra)
    assert ok, detail + ("\n" + "\n".join(extra) if extra else "")


def test_criterion_1(acceptance):
    _run(1, acceptance)


def test_criterion_2(acceptance):
    _run(2, acceptance)


def test_criterion_3(acceptance):
    _run(3, acceptance)


def test_criterion_4(acceptance):
    _run(4, acceptance)


def test_criterion_5(acceptance):
    _run(5, acceptance)


def test_criterion_6(acceptance):
    _run(6, acceptance)


def test_criterion_7(acceptance):
    _run(7, acceptance)


def test_criterion_8(acceptance):
    _run(8, acceptance)


def test_criterion_9(acceptance):
    _run(9, acceptance)


def test_criterion_10(acceptance):
    _run(10, acceptance)


def test_divider_oracle_sanity():
    # the oracle itself against plain integer division on the n=4, d=5 grid
    assert all(gm_divide(z, 5, 4) == divmod(z, 5) for z in range(80))


if __name__ == "__main__":
    import sys

    from conftest import format_line

    failed = 0
    for num, fn in CHECKS.items():
        ok, detail, extra = fn()
        print(format_line(num, ok, detail), flush=True)
        for line in extra:
            print(f"      {line}")
        failed += not ok
    sys.exit(1 if failed else 0)
