import numpy as np
import pytest

from approximation.jacobi_anger import build_hs_laurent, numeric_degree
from core.errors import DomainError, IoError
from core.linalg import is_unitary
from mitigation.zne import measure
from model.tfim import TfimSpec, build_observable, build_tfim, zero_state
from experiments.sweep import ideal_expectation
from qsp.circuit import (build_qsp_circuit, circuit_depth, echo_circuit, qsp_operator_error, success_probability)
from qsp.completion import complete, completion_residual
from qsp.decomposition import decompose, decompose_matrix, embed, to_t_lattice
from qsp.oracle import build_oracle
from qsp.phase_file import read_phase_file, write_phase_file
from qsp.phases import evaluate_phases, phase_polynomial, random_phase_set
from simulation.density import DensityMatrix, NoiseModel, evolve, plus_state, postselect_plus


@pytest.fixture(scope="module")
def h4():
    return build_tfim(TfimSpec(N=4))


@pytest.fixture(scope="module")
def short_time_polys():
    report = numeric_degree(1.0, 1e-5)
    a, b = build_hs_laurent(1.0, report.R)
    c, d = complete(a, b)
    return a, b, c, d


def test_oracle_block_encodes_hamiltonian(h4):
    u = build_oracle(h4)
    assert is_unitary(u)
    assert np.max(np.abs(0.5 * (u + u.conj().T) - h4)) < 1e-9


def test_oracle_rejects_unnormalised_spectrum():
    with pytest.raises(DomainError):
        build_oracle(np.diag([1.5, 0.0]))


def test_completion_meets_circle_residual(short_time_polys):
    a, b, c, d = short_time_polys
    assert completion_residual(a, b, c, d) <= 1e-8
    assert np.allclose(c.centered(), c.centered()[::-1])
    assert np.allclose(d.centered(), -d.centered()[::-1])


def test_completion_methods_agree_on_residual():
    a, b = build_hs_laurent(2.0, 4)
    for method in ("roots", "wilson"):
        c, d = complete(a, b, method=method)
        assert completion_residual(a, b, c, d) <= 1e-8


def test_decomposition_reproduces_embedding(short_time_polys):
    a, b, c, d = short_time_polys
    phases = decompose(a, b, c, d)
    target = to_t_lattice(embed(a, b, c, d))
    assert phases.n == numeric_degree(1.0, 1e-5).n
    assert np.max(np.abs(phase_polynomial(phases) - target)) <= 1e-10


def test_random_phase_set_round_trip():
    phases = random_phase_set(3, np.random.default_rng(11))
    coeffs_t = phase_polynomial(phases)
    rebuilt = decompose_matrix(coeffs_t[::2])
    assert np.max(np.abs(phase_polynomial(rebuilt) - coeffs_t)) <= 1e-10


def test_phase_product_is_unitary_on_circle():
    phases = random_phase_set(2, np.random.default_rng(1))
    values = evaluate_phases(phases, np.exp(1j * np.linspace(0, 2 * np.pi, 17)))
    for v in values:
        assert is_unitary(v, 1e-10)


def test_circuit_structure(h4):
    circuit, report = build_qsp_circuit(h4, 1.0, 1e-3)
    assert len(circuit.gates) == circuit_depth(report.n) == 2 * report.n + 1
    assert circuit.to_circuit().depth == 2 * report.n + 1
    assert circuit_depth(5) == 11


def test_success_probability_near_one_half(h4):
    circuit, _ = build_qsp_circuit(h4, 2.0, 1e-4)
    eps_qsp = qsp_operator_error(circuit, 2.0, h4)
    prob = success_probability(circuit.phases, circuit.oracle, DensityMatrix(zero_state(4)))
    assert abs(prob - 0.5) <= 3 * eps_qsp + 1e-12


def test_success_probability_matches_postselection(h4):
    circuit, _ = build_qsp_circuit(h4, 2.0, 1e-4)
    system = DensityMatrix(zero_state(4))
    _, prob = postselect_plus(evolve(circuit.to_circuit(), plus_state(system), NoiseModel(0.0)))
    assert success_probability(circuit.phases, circuit.oracle, system) == pytest.approx(prob, abs=1e-10)


@pytest.mark.parametrize("tau", [0.1, 1.0, 5.0, 10.0, 20.0])
def test_noiseless_circuit_reproduces_ideal(h4, tau):
    circuit, _ = build_qsp_circuit(h4, tau, 1e-5)
    o = build_observable(4)
    got = measure(circuit.to_circuit(), plus_state(zero_state(4)), 0.0, o)
    assert abs(got - ideal_expectation(h4, o, tau)) <= 1.5e-4


def test_echo_circuit_is_identity_on_block(h4):
    echo = echo_circuit(h4, 4)
    assert echo.to_circuit().depth == 9
    assert np.allclose(echo.unitary(), np.eye(32))
    got = measure(echo.to_circuit(), plus_state(zero_state(4)), 0.0, build_observable(4))
    assert got == pytest.approx(1.0, abs=1e-12)


def test_phase_file_round_trip(tmp_path, h4):
    circuit, report = build_qsp_circuit(h4, 0.5, 1e-3)
    path = write_phase_file(tmp_path / "phases.txt", circuit.phases, 0.5, 1e-3)
    loaded = read_phase_file(path)
    assert loaded.n == report.n and loaded.tau == 0.5 and loaded.eps_coeff == 1e-3
    assert np.array_equal(loaded.phases.e0, circuit.phases.e0)
    assert all(np.array_equal(p, q) for p, q in zip(loaded.phases.projectors, circuit.phases.projectors))


def test_malformed_phase_file(tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("2 0.5 0.001\n1 0 0 0 0 0 1 0\n")
    with pytest.raises(IoError):
        read_phase_file(bad)
    with pytest.raises(IoError):
        read_phase_file(tmp_path / "missing.txt")
