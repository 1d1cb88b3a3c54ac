import numpy as np
import pytest

from holoqc.gatelib import (
    GATES,
    GateSpec,
    analytic_loop,
    cnot_from_cphase,
    custom_gate,
    gate_matrix,
    hadamard_loop,
    parse_gate,
    read_matrix_file,
)
from holoqc.holonomy import holonomy
from holoqc.matcore import MatrixError, frob_dist, unitarity_defect
from holoqc.model import System


def test_every_named_gate_is_unitary():
    for name, (fixed, nparams) in GATES.items():
        system = fixed or System.TWO
        spec = GateSpec(name, (0.3,) * nparams, system)
        m = gate_matrix(spec)
        assert m.shape == (system.gate_dim,) * 2
        assert unitarity_defect(m) <= 1e-14


def test_parse_gate():
    assert parse_gate("hadamard").system is System.ONE
    assert parse_gate("CNOT").system is System.TWO
    assert parse_gate("identity", "two").system is System.TWO
    assert parse_gate("zrot:pi/4").params == (np.pi / 4,)
    assert parse_gate("su2:1,pi/7,1/3,-2pi").params == pytest.approx((1, np.pi / 7, 1 / 3, -2 * np.pi))
    assert parse_gate("phase:-0.5").params == (-0.5,)


@pytest.mark.parametrize(
    "text, system",
    [("toffoli", None), ("cnot", "one"), ("zrot", None), ("hadamard:1", None), ("zrot:x", None), ("zrot:", None)],
)
def test_parse_gate_rejects(text, system):
    with pytest.raises(ValueError):
        parse_gate(text, system)


def test_label_round_trips():
    spec = parse_gate("su2:1,pi/7,1/3,1")
    assert parse_gate(spec.label) == spec


def test_known_matrices():
    h = gate_matrix(parse_gate("hadamard"))
    assert np.allclose(h @ h, np.eye(2))
    swap = gate_matrix(parse_gate("swap"))
    a, b = np.array([1, 2j]), np.array([3, -1])
    assert np.allclose(swap @ np.kron(a, b), np.kron(b, a))
    qft = gate_matrix(parse_gate("qft2"))
    assert np.allclose(qft, np.fft.ifft(np.eye(4), axis=0) * 2)
    assert np.allclose(np.linalg.matrix_power(qft, 4), np.eye(4))
    cnot = gate_matrix(parse_gate("cnot"))
    assert np.allclose(cnot @ [0, 0, 1, 0], [0, 0, 0, 1])


def test_cnot_identity():
    assert frob_dist(cnot_from_cphase(), gate_matrix(parse_gate("cnot"))) <= 1e-12


def test_custom_gate(tmp_path):
    m = gate_matrix(parse_gate("su2:0.2,0.3,0.4,0.5"))
    f = tmp_path / "u.txt"
    f.write_text("# a unitary\n" + "\n".join(" ".join(f"{float(z.real)!r} {float(z.imag)!r}" for z in row) for row in m) + "\n")
    spec = custom_gate(read_matrix_file(f))
    assert spec.system is System.ONE
    assert np.array_equal(gate_matrix(spec), m)
    with pytest.raises(MatrixError):
        custom_gate(np.ones((2, 2)))
    with pytest.raises(ValueError):
        custom_gate(np.eye(4), "one")


@pytest.mark.parametrize("content", ["1 0 0 0 0 0\n", "1 0 0 0 0 0 1\n", "1 0 x 0\n"])
def test_matrix_file_errors(tmp_path, content):
    f = tmp_path / "bad.txt"
    f.write_text(content)
    with pytest.raises(ValueError):
        read_matrix_file(f)


@pytest.mark.parametrize(
    "text", ["identity", "pi8", "yrot:0.7", "zrot:-1.1", "phase:2.5", "su2:1,pi/7,1/3,1"]
)
def test_analytic_loops(text):
    spec = parse_gate(text)
    assert frob_dist(holonomy(analytic_loop(spec)), gate_matrix(spec)) <= 1e-6


def test_hadamard_phase_surplus():
    h = gate_matrix(parse_gate("hadamard"))
    assert frob_dist(holonomy(hadamard_loop()), 1j * h) <= 1e-6
    assert frob_dist(holonomy(analytic_loop(parse_gate("hadamard"))), 1j * h) <= 1e-6
    assert frob_dist(holonomy(hadamard_loop(cancel_phase=True)), h) <= 1e-6
    assert frob_dist(holonomy(analytic_loop(parse_gate("hadamard"), cancel_phase=True)), h) <= 1e-6


def test_analytic_cphase():
    spec = parse_gate("cphase:1.3")
    assert frob_dist(holonomy(analytic_loop(spec)), gate_matrix(spec)) <= 1e-6


def test_no_closed_form_for_cnot():
    with pytest.raises(ValueError):
        analytic_loop(parse_gate("cnot"))
