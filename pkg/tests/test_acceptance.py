"""Acceptance suite: one PASS/FAIL line per criterion, printed even without ``-s``.

Run ``pytest tests/test_acceptance.py -v`` to see the table. Synthesis runs
with the fixed seeds in ``SYNTHESIS_SEEDS`` and takes a few minutes.
"""
import time

import numpy as np
import pytest
from scipy.linalg import expm

from holoqc.fixtures import SU2_GATE, published_loop
from holoqc.gatelib import (
    cnot_from_cphase,
    cphase_loop,
    gate_matrix,
    parse_gate,
    phase_loop,
    pi8_loop,
    yrot_loop,
    zrot_loop,
)
from holoqc.holonomy import HolonomyConfig, convergence_probe, holonomy
from holoqc.loops import dumps_loop, loop_from_flat, make_loop, reverse, save_loop
from holoqc.matcore import frob_dist, unitarity_defect
from holoqc.model import System, frame, hamiltonian_one, hamiltonian_two, hamiltonian_two_pattern
from holoqc.connection import connection_one, connection_two
from holoqc.optimizer import SynthesisConfig, synthesize

SY = np.array([[0, -1j], [1j, 0]])
SZ = np.diag([1.0 + 0j, -1.0])
H = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
LEVELS = {System.ONE: [1, 2], System.TWO: [4, 5, 7, 8]}

# gate -> (system, k, f bound, seed); seeds fixed for CI, see README.
# With the default refinement-gap check the accepted start is restart 0 for
# hadamard, su2 and swap (seed 16), restart 3 for cnot and restart 19 for qft2.
SYNTHESIS_SEEDS = {
    "hadamard": (System.ONE, 3, 1e-6, 0),
    "su2:1,pi/7,1/3,1": (System.ONE, 3, 1e-6, 0),
    "cnot": (System.TWO, 3, 1e-8, 0),
    "swap": (System.TWO, 5, 1e-8, 16),
    "qft2": (System.TWO, 3, 1e-8, 0),
}


@pytest.fixture
def report(capsys):
    def emit(number, title, passed, detail):
        with capsys.disabled():
            print(f"\nACCEPTANCE {number:>2} {'PASS' if passed else 'FAIL'}  {title}: {detail}")
        assert passed, detail

    return emit


def test_criterion_01_pi8(report):
    t0 = time.perf_counter()
    u = holonomy(pi8_loop(), cfg=HolonomyConfig(200))
    elapsed = time.perf_counter() - t0
    err = frob_dist(u, np.diag([1, np.exp(1j * np.pi / 8)]))
    report(1, "pi/8 rectangle", err <= 1e-6 and elapsed < 0.1, f"error {err:.2e}, {elapsed * 1e3:.2f} ms")


def test_criterion_02_rotations(report):
    rng = np.random.default_rng(2)
    worst = 0.0
    for _ in range(20):
        beta, alpha = rng.uniform(-np.pi, np.pi, 2)
        worst = max(worst, frob_dist(holonomy(yrot_loop(beta)), expm(1j * beta * SY)))
        worst = max(worst, frob_dist(holonomy(zrot_loop(alpha)), expm(1j * alpha * SZ)))
    report(2, "sigma_y / sigma_z rotations, 20 angles each", worst <= 1e-6, f"worst {worst:.2e}")


def test_criterion_03_global_phase(report):
    rng = np.random.default_rng(3)
    worst = max(frob_dist(holonomy(phase_loop(d)), np.exp(1j * d) * np.eye(2)) for d in rng.uniform(-np.pi, np.pi, 10))
    report(3, "global phase, 10 angles", worst <= 1e-6, f"worst {worst:.2e}")


def test_criterion_04_controlled_phase(report):
    rng = np.random.default_rng(4)
    p11 = np.diag([0, 0, 0, 1.0])
    worst = max(frob_dist(holonomy(cphase_loop(t)), expm(1j * t * p11)) for t in rng.uniform(-np.pi, np.pi, 10))
    ih = np.kron(np.eye(2), H)
    cnot = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]])
    via_loop = frob_dist(ih @ holonomy(cphase_loop(np.pi)) @ ih, cnot)
    identity = frob_dist(ih @ expm(1j * np.pi * p11) @ ih, cnot)
    ok = worst <= 1e-6 and identity <= 1e-12 and frob_dist(cnot_from_cphase(), cnot) <= 1e-12 and via_loop <= 1e-6
    report(4, "controlled phase, 10 angles, CNOT identity", ok, f"worst {worst:.2e}, identity {identity:.1e}, CNOT from loop {via_loop:.2e}")


def test_criterion_05_published_loops(report):
    f1 = frob_dist(holonomy(published_loop("hadamard")), H)
    target2 = np.exp(1j) * expm(1j * np.pi / 7 * SZ) @ expm(1j / 3 * SY) @ expm(1j * SZ)
    f2 = frob_dist(holonomy(published_loop("su2")), target2)
    assert frob_dist(gate_matrix(SU2_GATE), target2) <= 1e-14
    report(5, "published Hadamard and SU(2) loops", f1 <= 0.2 and f2 <= 0.2, f"f1 {f1:.4f}, f2 {f2:.4f} (bound 0.2)")


@pytest.fixture(scope="module")
def synthesis_runs():
    runs = {}
    for text, (system, k, bound, seed) in SYNTHESIS_SEEDS.items():
        cfg = SynthesisConfig(k=k, system=system, seed=seed, target_f=min(1e-8, bound / 10))
        t0 = time.perf_counter()
        runs[text] = (synthesize(parse_gate(text, system), cfg), bound, time.perf_counter() - t0)
    return runs


@pytest.mark.slow
def test_criterion_06_synthesis(report, synthesis_runs):
    parts, ok = [], True
    for text, (res, bound, elapsed) in synthesis_runs.items():
        budget = 100 if res.loop.system is System.ONE else 400
        good = res.f_final < bound and res.restarts_used <= budget
        ok &= good
        parts.append(f"{text} f={res.f_final:.1e} refined={res.f_refined:.1e} starts={res.restarts_used} {elapsed:.0f}s")
    report(6, "synthesis at fixed seeds", ok, "; ".join(parts))


def _fd_connection(system, p, i, h=1e-5):
    e = np.zeros(system.dim)
    e[i] = h
    lv = LEVELS[system]
    w = frame(system, p)[:, lv]
    dw = (frame(system, p + e)[:, lv] - frame(system, p - e)[:, lv]) / (2 * h)
    return w.conj().T @ dw


def test_criterion_07_connection_oracle(report):
    rng = np.random.default_rng(7)
    worst = {}
    for system, analytic in ((System.ONE, connection_one), (System.TWO, connection_two)):
        w = 0.0
        for _ in range(100):
            p = rng.uniform(-np.pi, np.pi, system.dim)
            comps = analytic(p)
            w = max(w, max(frob_dist(comps[i], _fd_connection(system, p, i)) for i in range(system.dim)))
        worst[system.value] = w
    ok = all(v <= 1e-6 for v in worst.values())
    report(7, "connection vs finite differences, 100 points per coordinate", ok, ", ".join(f"{k} {v:.1e}" for k, v in worst.items()))


def test_criterion_08_spectra(report):
    rng = np.random.default_rng(8)
    s1 = s2 = pattern = 0.0
    for _ in range(1000):
        eps = rng.uniform(0.5, 2.0)
        s1 = max(s1, np.abs(np.linalg.eigvalsh(hamiltonian_one(rng.uniform(-np.pi, np.pi, 4), eps)) - [0, 0, eps]).max())
        q = rng.uniform(-np.pi, np.pi, 9)
        h = hamiltonian_two(q, eps)
        s2 = max(s2, np.abs(np.linalg.eigvalsh(h) - np.array([0] * 4 + [eps] * 4 + [2 * eps])).max())
        pattern = max(pattern, np.abs(h - hamiltonian_two_pattern(q, eps)).max())
    ok = s1 <= 1e-10 and s2 <= 1e-10 and pattern <= 1e-12
    report(8, "spectra and two-qubit entry table, 1000 points", ok, f"one {s1:.1e}, two {s2:.1e}, table {pattern:.1e}")


def test_criterion_09_properties(report):
    rng = np.random.default_rng(9)
    unit = rev = 0.0
    for system in System:
        for k in (1, 3, 5):
            loop = make_loop(system, None, rng.uniform(-np.pi, np.pi, (k, system.dim)))
            u = holonomy(loop)
            unit = max(unit, unitarity_defect(u))
            rev = max(rev, frob_dist(holonomy(reverse(loop)), u.conj().T))
    # collinear insertion compares two different step lattices, so it is taken in the converged regime
    fine = HolonomyConfig(200_000)
    insert = 0.0
    for system in System:
        loop = make_loop(system, None, rng.uniform(-np.pi, np.pi, (2, system.dim)))
        pts = loop.points()
        split = make_loop(system, None, [pts[1], 0.3 * pts[1] + 0.7 * pts[2], pts[2]])
        insert = max(insert, frob_dist(holonomy(split, cfg=fine), holonomy(loop, cfg=fine)))
    d = [dist for _, dist in convergence_probe(published_loop("hadamard"), steps=(200, 400, 800, 1600, 12800))][:-1]
    ratios = [a / b for a, b in zip(d, d[1:])]
    dims = SynthesisConfig(k=3).dimension == 12 and SynthesisConfig(k=3, system="two").dimension == 27
    try:
        loop_from_flat(System.TWO, np.zeros(12))
        dims = False
    except ValueError:
        pass
    ok = unit <= 1e-12 and rev <= 1e-9 and insert <= 1e-9 and all(3.5 <= r <= 4.5 for r in ratios) and dims
    detail = (f"unitarity {unit:.1e}, reverse {rev:.1e}, insertion {insert:.1e}, "
              f"ratios {', '.join(f'{r:.2f}' for r in ratios)}, dims {'ok' if dims else 'bad'}")
    report(9, "property suite", ok, detail)


def test_criterion_10_determinism(report, tmp_path):
    same = True
    for gate, cfg in (("hadamard", SynthesisConfig(k=3, seed=11)),
                      ("cnot", SynthesisConfig(k=2, system="two", seed=11, max_restarts=2, max_iterations_per_start=400, batch_size=2, workers=2))):
        files = []
        for i in range(2):
            f = tmp_path / f"{gate}{i}.json"
            save_loop(synthesize(parse_gate(gate, cfg.system), cfg).loop, f)
            files.append(f.read_bytes())
        same &= files[0] == files[1]
    report(10, "bit-identical loop files", same, "hadamard and cnot (2 workers) files identical" if same else "files differ")


@pytest.mark.slow
def test_synthesis_validation_gap(synthesis_runs):
    # optimizer invariant: reported optima move by at most 1e-4 between 200 and 800 steps/edge
    for text, (res, _, _) in synthesis_runs.items():
        assert abs(res.f_final - res.f_refined) <= 1e-4, text
