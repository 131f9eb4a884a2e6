import numpy as np
import pytest

import rotframe as rf
from helpers import (
    lambda_system,
    two_level,
    with_laser_offsets,
    with_random_rabi,
    zero_detuned,
)
from rotframe.frames import FrameSolution
from rotframe.model import Level, LevelSystem, Parity, Transition


def rabi_populations(omega, x, times):
    """Generalized Rabi oracle for a two-level start in level 1: the level-2
    population under coupling omega and effective detuning x."""
    g = np.hypot(omega, x)
    return (omega**2 / g**2) * np.sin(g * times / 2.0) ** 2


def detuned_two_level(omega=1.0, x=0.75, w1=0.3, w2=1.0):
    # stored phase is exp(-i*laser*t); effective detuning x = laser + (w2-w1)
    return two_level(w1=w1, w2=w2, rabi=omega, laser=(w1 - w2) + x)


# --- lab propagation -------------------------------------------------------------

def test_resonant_rabi_oracle():
    omega = 0.8
    system = two_level(rabi=omega)  # laser = w1 - w2: resonant
    h = rf.build_rwa_hamiltonian(system)
    period = 2 * np.pi / omega
    res = rf.propagate_lab(h, rf.basis_state(h, 1), t_final=4 * period,
                           step=period / 1000)
    exact = np.sin(omega * res.times / 2.0) ** 2
    assert np.max(np.abs(res.populations()[:, 1] - exact)) < 1e-6
    assert res.norm_drift < 1e-10


def test_detuned_rabi_oracle():
    omega, x = 1.0, 0.75
    h = rf.build_rwa_hamiltonian(detuned_two_level(omega, x))
    period = 2 * np.pi / omega
    res = rf.propagate_lab(h, rf.basis_state(h, 1), t_final=4 * period,
                           step=period / 1000)
    exact = rabi_populations(omega, x, res.times)
    assert np.max(np.abs(res.populations()[:, 1] - exact)) < 1e-6


def test_zero_hamiltonian_keeps_state_constant():
    system = LevelSystem((Level(1, 0.0, Parity.EVEN), Level(2, 0.0, Parity.ODD)))
    h = rf.build_rwa_hamiltonian(system)
    psi0 = np.array([0.6, 0.8], dtype=complex)
    res = rf.propagate_lab(h, psi0, t_final=5.0, step=0.05)
    assert np.max(np.abs(res.states - psi0)) == 0.0


def test_rk4_convergence_is_fourth_order():
    omega, x = 1.0, 0.75
    h = rf.build_rwa_hamiltonian(detuned_two_level(omega, x))
    psi0 = rf.basis_state(h, 1)
    t_final = 12.0

    def err(n_steps):
        res = rf.propagate_lab(h, psi0, t_final=t_final, step=t_final / n_steps)
        return np.max(np.abs(res.populations()[:, 1]
                             - rabi_populations(omega, x, res.times)))

    order = np.log2(err(300) / err(600))
    assert 3.7 <= order <= 4.3


def test_propagation_inputs_validated():
    h = rf.build_rwa_hamiltonian(two_level())
    with pytest.raises(ValueError):
        rf.propagate_lab(h, np.array([1.0, 1.0], dtype=complex), t_final=1.0, step=0.1)
    with pytest.raises(ValueError):
        rf.propagate_lab(h, rf.basis_state(h, 1), t_final=-1.0, step=0.1)
    with pytest.raises(ValueError):
        rf.propagate_lab(h, rf.basis_state(h, 1), t_final=1.0, step=0.0)


def test_norm_drift_small_over_ten_rabi_periods():
    omega = 0.5
    system = two_level(rabi=omega)
    h = rf.build_rwa_hamiltonian(system)
    period = 2 * np.pi / omega
    res = rf.propagate_lab(h, rf.basis_state(h, 1), t_final=10 * period,
                           step=period / 2000)
    assert res.norm_drift < 1e-8


def test_phase_covariance_of_populations():
    base = two_level(rabi=0.8)
    phased = two_level(rabi=0.8 * np.exp(1j * 1.1))
    hb = rf.build_rwa_hamiltonian(base)
    hp = rf.build_rwa_hamiltonian(phased)
    psi0 = rf.basis_state(hb, 1)
    a = rf.propagate_lab(hb, psi0, t_final=20.0, step=0.01)
    b = rf.propagate_lab(hp, psi0, t_final=20.0, step=0.01)
    assert rf.compare_populations(a, b) < 1e-12


# --- hermitian exponential --------------------------------------------------------

def test_exponential_of_diagonal():
    m = np.diag([0.4, -1.3]).astype(complex)
    u = rf.hermitian_exponential(m, 2.5)
    expected = np.diag(np.exp(-1j * np.array([0.4, -1.3]) * 2.5))
    assert np.max(np.abs(u - expected)) < 1e-14


def test_exponential_of_real_coupling_is_rotation():
    omega = 0.9
    m = np.array([[0.0, omega / 2], [omega / 2, 0.0]], dtype=complex)
    for t in (0.3, 1.7, 4.0):
        u = rf.hermitian_exponential(m, t)
        angle = omega * t / 2
        expected = np.array(
            [[np.cos(angle), -1j * np.sin(angle)],
             [-1j * np.sin(angle), np.cos(angle)]]
        )
        assert np.max(np.abs(u - expected)) < 1e-12


def test_exponential_is_unitary():
    rng = np.random.default_rng(8)
    for n in (2, 5, 9):
        m = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        m = m + m.conj().T
        u = rf.hermitian_exponential(m, 3.7)
        assert np.max(np.abs(u @ u.conj().T - np.eye(n))) < 1e-10


def test_exponential_rejects_non_hermitian():
    with pytest.raises(ValueError):
        rf.hermitian_exponential(np.array([[0.0, 1.0], [0.5, 0.0]], dtype=complex), 1.0)


# --- frame propagation -------------------------------------------------------------

def test_lambda_lab_vs_frame():
    system = with_random_rabi(lambda_system(), seed=1, lo=0.3, hi=0.5)
    h = rf.build_rwa_hamiltonian(system)
    frame = rf.classify(system).frame
    psi0 = rf.basis_state(h, 1)
    period = 2 * np.pi / 0.3
    lab = rf.propagate_lab(h, psi0, t_final=5 * period, step=period / 2000)
    rot = rf.propagate_frame(h, frame, psi0, t_final=5 * period, step=period / 2000)
    assert rf.compare_populations(lab, rot) < 1e-6


def test_diamond_tuned_to_zero_matches():
    system = zero_detuned(with_laser_offsets(rf.named_system("diamond", detuned=False), seed=3))
    system = with_random_rabi(system, seed=3, lo=0.3, hi=0.5)
    h = rf.build_rwa_hamiltonian(system)
    frame = rf.classify(system).frame
    psi0 = rf.basis_state(h, 2)
    period = 2 * np.pi / 0.3
    lab = rf.propagate_lab(h, psi0, t_final=5 * period, step=period / 2000)
    rot = rf.propagate_frame(h, frame, psi0, t_final=5 * period, step=period / 2000)
    assert rf.compare_populations(lab, rot) < 1e-6


def test_diamond_detuned_refuses_frame_propagation():
    system = rf.named_system("diamond")  # generic offsets: nonzero detuning
    h = rf.build_rwa_hamiltonian(system)
    frame = rf.classify(system).frame
    with pytest.raises(rf.FrameResidualError):
        rf.propagate_frame(h, frame, rf.basis_state(h, 1), t_final=5.0, step=0.01)


def test_compare_populations_contract():
    h = rf.build_rwa_hamiltonian(two_level())
    psi0 = rf.basis_state(h, 1)
    a = rf.propagate_lab(h, psi0, t_final=2.0, step=0.01)
    assert rf.compare_populations(a, a) == 0.0
    b = rf.propagate_lab(h, psi0, t_final=2.0, step=0.02)
    with pytest.raises(ValueError):
        rf.compare_populations(a, b)


def test_wrong_frame_deviation_grows_with_perturbation():
    system = with_random_rabi(lambda_system(), seed=5, lo=0.3, hi=0.5)
    h = rf.build_rwa_hamiltonian(system)
    frame = rf.classify(system).frame
    psi0 = rf.basis_state(h, 1)
    t_final, step = 40.0, 0.01
    lab = rf.propagate_lab(h, psi0, t_final=t_final, step=step)
    rotated = rf.transform(h, frame)

    def deviation(delta):
        # a frame with wbar_2 off by delta would produce this constant part
        # (its residual phases treated as constant, as a naive user would)
        wrong = rotated.constant.copy()
        wrong[1, 1] += delta
        vals, vecs = rf.jacobi_eigh(wrong)
        coeffs = vecs.conj().T @ psi0
        states = (np.exp(-1j * np.outer(lab.times, vals)) * coeffs) @ vecs.T
        return float(np.max(np.abs(np.abs(states) ** 2 - lab.populations())))

    devs = [deviation(d) for d in (1e-4, 1e-3, 1e-2)]
    assert devs[0] < devs[1] < devs[2]
    # deviation is first order in the frame error
    assert 5 < devs[1] / devs[0] < 20
    assert 5 < devs[2] / devs[1] < 20


def test_default_horizon_and_step():
    system = two_level(rabi=0.5)
    h = rf.build_rwa_hamiltonian(system)
    assert rf.default_horizon(h) == pytest.approx(20.0)
    step = rf.default_step(h, 20.0)
    assert 0 < step <= 20.0 / 2000
    res = rf.propagate_lab(h, rf.basis_state(h, 1))
    assert res.times[-1] == pytest.approx(20.0)
