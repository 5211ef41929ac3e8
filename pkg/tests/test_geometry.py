import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qptgeom import geometry, spin
from qptgeom.errors import DegeneracyError, LevelCrossingError
from qptgeom.geometry import StateMap

from conftest import SX, SY, SZ, random_hermitian, random_state


def rotation_hamiltonian(theta):
    return (np.cos(theta) * SZ + np.sin(theta) * SX) / 2


def rotation_dH(theta):
    return (-np.sin(theta) * SZ + np.cos(theta) * SX) / 2


def bloch_hamiltonian(point):
    # ground state of -n.sigma/2 is (cos(t/2), e^{i p} sin(t/2))
    t, p = point
    n = (np.sin(t) * np.cos(p), np.sin(t) * np.sin(p), np.cos(t))
    return -(n[0] * SX + n[1] * SY + n[2] * SZ) / 2


def bloch_dH(point):
    t, p = point
    d_t = -(np.cos(t) * np.cos(p) * SX + np.cos(t) * np.sin(p) * SY - np.sin(t) * SZ) / 2
    d_p = -(-np.sin(t) * np.sin(p) * SX + np.sin(t) * np.cos(p) * SY) / 2
    return [d_t, d_p]


def bloch_state(point):
    t, p = point
    return np.array([np.cos(t / 2), np.exp(1j * p) * np.sin(t / 2)])


def bloch_qgt_exact(t):
    # hand-derived: <d_t psi|d_p psi> = i sin(t)/4, <psi|d_t psi> = 0
    return np.array([[0.25, 0.25j * np.sin(t)], [-0.25j * np.sin(t), 0.25 * np.sin(t) ** 2]])


class TestFidelity:
    def test_identity(self, rng):
        psi = random_state(rng, 5)
        assert geometry.fidelity(psi, psi) == pytest.approx(1.0)
        assert geometry.fubini_study_distance(psi, psi) == pytest.approx(0.0, abs=1e-7)

    def test_orthogonal(self):
        assert geometry.fidelity([1, 0], [0, 1]) == 0.0
        assert geometry.fubini_study_distance([1, 0], [0, 1]) == pytest.approx(np.pi / 2)

    def test_half_overlap(self):
        phi = np.array([1, 1]) / np.sqrt(2)
        assert geometry.fidelity([1, 0], phi) == pytest.approx(1 / np.sqrt(2))
        assert geometry.fubini_study_distance([1, 0], phi) == pytest.approx(np.pi / 4)

    def test_rejects_bad_input(self):
        with pytest.raises(ValueError, match="normalized"):
            geometry.fidelity([1, 1], [1, 0])
        with pytest.raises(ValueError, match="dimension"):
            geometry.fidelity([1, 0], [1, 0, 0])

    @given(st.integers(0, 2**32 - 1), st.integers(1, 12), st.floats(0, 2 * np.pi), st.floats(0, 2 * np.pi))
    def test_symmetric_and_phase_invariant(self, seed, d, a, b):
        rng = np.random.default_rng(seed)
        psi, phi = random_state(rng, d), random_state(rng, d)
        f = geometry.fidelity(psi, phi)
        assert 0.0 <= f <= 1.0
        assert geometry.fidelity(phi, psi) == pytest.approx(f, abs=1e-14)
        assert geometry.fidelity(np.exp(1j * a) * psi, np.exp(1j * b) * phi) == pytest.approx(f, abs=1e-12)

    @given(st.integers(0, 2**32 - 1))
    def test_qubit_fidelity_saturates_only_for_equal_rays(self, seed):
        rng = np.random.default_rng(seed)
        psi, phi = random_state(rng, 2), random_state(rng, 2)
        f = geometry.fidelity(psi, phi)
        # |<psi|phi>|^2 + |<psi_perp|phi>|^2 = 1 in two dimensions
        perp = np.array([-np.conj(psi[1]), np.conj(psi[0])])
        assert f**2 + abs(np.vdot(perp, phi)) ** 2 == pytest.approx(1.0, abs=1e-12)
        assert geometry.fidelity(psi, psi * np.exp(0.7j)) == pytest.approx(1.0)


class TestFiniteDifference:
    def test_constant_map(self, rng):
        psi = random_state(rng, 4)
        m = StateMap(lambda lam: psi, dim=2, hilbert_dim=4)
        q = geometry.qgt_finite_difference(m, (0.1, 0.2))
        np.testing.assert_allclose(q.values, 0, atol=1e-12)
        np.testing.assert_allclose(geometry.metric_from_fidelity(m, (0.1, 0.2)), 0, atol=1e-12)

    @pytest.mark.parametrize("lam", [-1.0, 0.0, 0.3, 2.5])
    def test_great_circle(self, lam):
        m = StateMap(lambda x: np.array([np.cos(x[0]), np.sin(x[0])]), dim=1, hilbert_dim=2)
        assert geometry.qgt_finite_difference(m, [lam]).metric[0, 0] == pytest.approx(1.0, rel=1e-7)
        g = geometry.metric_from_fidelity(m, [lam], step=1e-3)
        assert g[0, 0] == pytest.approx(1.0, abs=1e-6)

    def test_bloch_sphere_complex_tensor(self):
        m = StateMap(bloch_state, dim=2, hilbert_dim=2)
        for t in (0.4, 1.1, 2.3):
            q = geometry.qgt_finite_difference(m, (t, 0.8))
            np.testing.assert_allclose(q.values, bloch_qgt_exact(t), atol=1e-8)

    def test_gauge_invariance(self):
        plain = StateMap(bloch_state, dim=2, hilbert_dim=2)
        phased = StateMap(
            lambda lam: np.exp(1j * (3 * lam[0] ** 2 - 5 * np.sin(lam[1]))) * bloch_state(lam), dim=2, hilbert_dim=2
        )
        for point in [(0.7, 0.2), (1.9, -1.3)]:
            a = geometry.qgt_finite_difference(plain, point).values
            b = geometry.qgt_finite_difference(phased, point).values
            assert np.abs(a - b).max() < 1e-8

    def test_bad_step_and_point(self):
        m = StateMap(bloch_state, dim=2, hilbert_dim=2)
        with pytest.raises(ValueError):
            geometry.qgt_finite_difference(m, (0.3, 0.1), step=0.0)
        with pytest.raises(ValueError):
            geometry.qgt_finite_difference(m, (0.3,))

    def test_map_shape_checked(self):
        m = StateMap(lambda lam: np.ones(3) / np.sqrt(3), dim=1, hilbert_dim=2)
        with pytest.raises(ValueError, match="shape"):
            m([0.0])

    def test_xy_fd_matches_perturbative(self):
        m = spin.xy_state_map(7)
        q_fd = geometry.qgt_finite_difference(m, (0.3, 0.6))
        spec = spin.SpinChainSpec(7, 0.3, 0.6)
        es = spin.full_spectrum(spin.build_xy_hamiltonian(spec))
        q_pt = geometry.qgt_perturbative(es, [spin.dH(spec, "h"), spin.dH(spec, "gamma")])
        assert geometry.relative_difference(q_fd.metric, q_pt.metric) < 1e-5
        g_f = geometry.metric_from_fidelity(m, (0.3, 0.6))
        assert geometry.relative_difference(g_f, q_fd.metric) < 1e-4


class TestPerturbative:
    def test_zero_dH(self, rng):
        es = spin.full_spectrum(random_hermitian(rng, 6))
        q = geometry.qgt_perturbative(es, [np.zeros((6, 6)), np.zeros((6, 6))])
        np.testing.assert_allclose(q.values, 0)

    def test_commuting_field(self):
        es = spin.full_spectrum(0.7 * SZ / 2)
        q = geometry.qgt_perturbative(es, [SZ / 2])
        assert q.metric[0, 0] == 0.0

    @pytest.mark.parametrize("theta", [0.0, 0.5, 1.7, -2.9])
    def test_rotation_family(self, theta):
        q = geometry.qgt_perturbative(spin.full_spectrum(rotation_hamiltonian(theta)), [rotation_dH(theta)])
        assert q.metric[0, 0] == pytest.approx(0.25, abs=1e-14)

    def test_bloch_imaginary_part_matches_fd(self):
        for t, p in [(0.4, 0.3), (1.2, -2.0), (2.6, 1.0)]:
            es = spin.full_spectrum(bloch_hamiltonian((t, p)))
            q = geometry.qgt_perturbative(es, bloch_dH((t, p)))
            np.testing.assert_allclose(q.values, bloch_qgt_exact(t), atol=1e-12)
            q_fd = geometry.qgt_finite_difference(StateMap(lambda x: spin.ground_state(bloch_hamiltonian(x))[1], 2, 2), (t, p))
            np.testing.assert_allclose(q_fd.berry_curvature, q.berry_curvature, atol=1e-8)

    def test_excited_rephasing_invariance(self, rng):
        H = random_hermitian(rng, 8)
        dHs = [random_hermitian(rng, 8), random_hermitian(rng, 8)]
        es = spin.full_spectrum(H)
        phases = np.exp(1j * rng.uniform(0, 2 * np.pi, size=8))
        rephased = spin.EigenSystem(es.energies, es.vectors * phases)
        a = geometry.qgt_perturbative(es, dHs).values
        b = geometry.qgt_perturbative(rephased, dHs).values
        np.testing.assert_allclose(a, b, atol=1e-12)

    def test_degenerate_ground_state(self):
        es = spin.full_spectrum(np.diag([0.0, 0.0, 1.0]))
        with pytest.raises(DegeneracyError) as info:
            geometry.qgt_perturbative(es, [np.eye(3)])
        assert info.value.gap == 0.0
        assert info.value.tag == "degenerate"

    @settings(max_examples=30, deadline=None)
    @given(st.integers(0, 2**32 - 1), st.integers(2, 10))
    def test_tensor_invariants(self, seed, d):
        rng = np.random.default_rng(seed)
        es = spin.full_spectrum(random_hermitian(rng, d))
        q = geometry.qgt_perturbative(es, [random_hermitian(rng, d) for _ in range(3)])
        np.testing.assert_allclose(q.values, q.values.conj().T)
        assert np.linalg.eigvalsh(q.metric).min() >= -1e-10
        np.testing.assert_allclose(q.berry_curvature, -q.berry_curvature.T)


class TestAdiabaticGenerator:
    def test_constant_family(self, rng):
        es = spin.full_spectrum(random_hermitian(rng, 5))
        g = geometry.adiabatic_generator_metric(es, [es, es], 1e-4, backward=[es, es])
        np.testing.assert_allclose(g, 0, atol=1e-12)

    @pytest.mark.parametrize("theta", [0.2, 1.3])
    def test_rotation_family(self, theta):
        center, fwd, bwd = geometry.hamiltonian_eigensystems(lambda x: rotation_hamiltonian(x[0]), [theta], 1e-4)
        g_one_sided = geometry.adiabatic_generator_metric(center, fwd, 1e-4)
        g_central = geometry.adiabatic_generator_metric(center, fwd, 1e-4, backward=bwd)
        assert g_one_sided[0, 0] == pytest.approx(0.25, abs=1e-3)
        assert g_central[0, 0] == pytest.approx(0.25, abs=1e-7)

    def test_xy_chain_matches_perturbative(self):
        L, point = 5, (0.4, 0.7)

        def hamiltonian(lam):
            return spin.build_xy_hamiltonian(spin.SpinChainSpec(L, *lam))

        center, fwd, bwd = geometry.hamiltonian_eigensystems(hamiltonian, point, 1e-4)
        g = geometry.adiabatic_generator_metric(center, fwd, 1e-4)
        spec = spin.SpinChainSpec(L, *point)
        q = geometry.qgt_perturbative(center, [spin.dH(spec, "h"), spin.dH(spec, "gamma")])
        assert geometry.relative_difference(g, q.metric) < 1e-3

    def test_level_crossing_detected(self):
        # levels 0 and 1 swap between diag(0, 1) and diag(1, 0.5)
        center = spin.full_spectrum(np.diag([0.0, 1.0]))
        shifted = spin.EigenSystem(np.array([0.5, 1.0]), np.array([[0.0, 1.0], [1.0, 0.0]]))
        with pytest.raises(LevelCrossingError):
            geometry.adiabatic_generator_metric(center, [shifted], 0.1)


class TestGeometricTensor:
    def test_symmetrizes(self):
        q = geometry.GeometricTensor(np.array([[1.0, 0.5 + 0.1j], [0.5 - 0.1j + 1e-15, 2.0]]), (0, 0))
        np.testing.assert_array_equal(q.values, q.values.conj().T)

    def test_rejects_indefinite(self):
        with pytest.raises(AssertionError):
            geometry.GeometricTensor(np.diag([1.0, -1.0]), (0, 0))
