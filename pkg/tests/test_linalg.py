import numpy as np
import pytest

from qchd import bounds, channels, linalg
from qchd.errors import DimensionMismatchError, NonHermitianError


def random_hermitian(dim, rng):
    a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return (a + a.conj().T) / 2


def brute_partial_trace(rho, dims, keep):
    """Index-loop oracle for the reshape-based implementation."""
    keep = sorted(keep)
    traced = [i for i in range(len(dims)) if i not in keep]
    kept_dims = [dims[k] for k in keep]
    out_dim = int(np.prod(kept_dims))
    out = np.zeros((out_dim, out_dim), dtype=complex)
    for row in range(rho.shape[0]):
        for col in range(rho.shape[1]):
            ridx = np.unravel_index(row, dims)
            cidx = np.unravel_index(col, dims)
            if any(ridx[t] != cidx[t] for t in traced):
                continue
            r_out = np.ravel_multi_index([ridx[k] for k in keep], kept_dims) if keep else 0
            c_out = np.ravel_multi_index([cidx[k] for k in keep], kept_dims) if keep else 0
            out[r_out, c_out] += rho[row, col]
    return out


class TestHermitianEig:
    def test_identity(self):
        w, v = linalg.hermitian_eig(np.eye(2))
        assert np.allclose(w, [1.0, 1.0])
        assert np.allclose(v.conj().T @ v, np.eye(2), atol=1e-10)

    def test_pauli_z_spectrum(self):
        w, _ = linalg.hermitian_eig(channels.SIGMA_Z)
        assert np.allclose(w, [-1.0, 1.0])

    def test_random_reconstruction(self, rng):
        h = random_hermitian(4, rng)
        w, v = linalg.hermitian_eig(h)
        assert np.linalg.norm(h - (v * w) @ v.conj().T) <= 1e-10 * max(1, np.linalg.norm(h))

    def test_rejects_non_hermitian(self):
        with pytest.raises(NonHermitianError):
            linalg.hermitian_eig(np.array([[0.0, 1.0], [0.0, 0.0]]))

    def test_eigenvalues_ascending(self, rng):
        w, _ = linalg.hermitian_eig(random_hermitian(6, rng))
        assert np.all(np.diff(w) >= 0)

    @pytest.mark.parametrize("dim", [2, 3, 5, 8, 16])
    def test_reconstruction_property(self, dim, rng):
        for _ in range(20):
            h = random_hermitian(dim, rng)
            w, v = linalg.hermitian_eig(h)
            scale = max(1.0, np.linalg.norm(h))
            assert np.linalg.norm(h - (v * w) @ v.conj().T) <= 1e-10 * scale
            assert np.max(np.abs(v.conj().T @ v - np.eye(dim))) <= 1e-10


class TestKron:
    def test_identities(self):
        assert np.allclose(linalg.kron(np.eye(2), np.eye(2)), np.eye(4))

    def test_zz_eigenvector(self):
        zz = linalg.kron(channels.SIGMA_Z, channels.SIGMA_Z)
        v00 = np.kron(channels.KET0, channels.KET0)
        assert np.allclose(zz @ v00, v00)

    def test_min_eigenvalue_multiplies_for_positive_factors(self, harrow_pair):
        span = bounds.kraus_product_span(*harrow_pair)
        p = bounds.evaluate_combination(span, bounds.harrow_ansatz_coefficients()).matrix
        lam = np.linalg.eigvalsh((p + p.conj().T) / 2).min()
        big = linalg.kron(p, p)
        lam2 = np.linalg.eigvalsh((big + big.conj().T) / 2).min()
        assert abs(lam2 - lam**2) <= 1e-12


class TestPartialTrace:
    def test_product_state(self, rng):
        rho_a = linalg.random_density_matrix(2, rng)
        rho_b = linalg.random_density_matrix(3, rng)
        joint = np.kron(rho_a, rho_b)
        assert np.allclose(linalg.partial_trace(joint, [2, 3], [0]), rho_a, atol=1e-12)

    def test_bell_state(self):
        bell = (np.kron(channels.KET0, channels.KET0) + np.kron(channels.KET1, channels.KET1))
        bell = linalg.ketbra(bell / np.sqrt(2))
        assert np.allclose(linalg.partial_trace(bell, [2, 2], [0]), np.eye(2) / 2, atol=1e-12)

    def test_sequential_matches_single_call_and_oracle(self, rng):
        dims = [2, 3, 2]
        rho = linalg.random_density_matrix(12, rng)
        step = linalg.partial_trace(rho, dims, [1, 2])  # trace out system 0
        both = linalg.partial_trace(step, [3, 2], [1])
        direct = linalg.partial_trace(rho, dims, [2])
        assert np.allclose(both, direct, atol=1e-12)
        assert np.allclose(direct, brute_partial_trace(rho, dims, [2]), atol=1e-12)

    def test_preserves_trace_and_positivity(self, rng):
        for _ in range(20):
            rho = linalg.random_density_matrix(8, rng)
            red = linalg.partial_trace(rho, [2, 2, 2], [0, 2])
            assert abs(np.trace(red).real - 1.0) <= 1e-12
            assert np.linalg.eigvalsh(red).min() >= -1e-12

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            linalg.partial_trace(np.eye(4) / 4, [2, 3], [0])


class TestTraceNormFidelity:
    def test_trace_norm_identity(self):
        assert abs(linalg.trace_norm(np.eye(2)) - 2.0) <= 1e-14

    def test_trace_norm_pure_difference(self):
        # eigenvalues of |0><0| - |+><+| are +-1/sqrt(2)
        diff = linalg.ketbra(channels.KET0) - linalg.ketbra(channels.KET_PLUS)
        assert abs(linalg.trace_norm(diff) - np.sqrt(2)) <= 1e-12

    def test_trace_norm_zero(self, rng):
        rho = linalg.random_density_matrix(3, rng)
        assert linalg.trace_norm(rho - rho) <= 1e-15

    def test_fidelity_self(self, rng):
        rho = linalg.random_density_matrix(4, rng)
        assert abs(linalg.fidelity(rho, rho) - 1.0) <= 1e-10

    def test_fidelity_pure_overlap(self):
        f = linalg.fidelity(linalg.ketbra(channels.KET0), linalg.ketbra(channels.KET_PLUS))
        assert abs(f - 1.0 / np.sqrt(2)) <= 1e-12

    def test_fidelity_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            linalg.fidelity(np.eye(2) / 2, np.eye(3) / 3)

    def test_fuchs_van_de_graaf(self, rng):
        for _ in range(30):
            rho = linalg.random_density_matrix(3, rng)
            sigma = linalg.random_density_matrix(3, rng)
            td = 0.5 * linalg.trace_norm(rho - sigma)
            f = linalg.fidelity(rho, sigma)
            assert td <= np.sqrt(1.0 - f * f) + 1e-10

    def test_fidelity_floor_on_example_outputs(self, harrow_pair, rng):
        m, mbar = harrow_pair
        span = bounds.kraus_product_span(m, mbar)
        lam = bounds.evaluate_combination(span, bounds.harrow_ansatz_coefficients()).lambda_min
        for _ in range(50):
            psi = linalg.random_pure_state(16, rng)
            out_m = channels.apply_to_vector(m, psi, ref_dim=4)
            out_mbar = channels.apply_to_vector(mbar, psi, ref_dim=4)
            assert linalg.fidelity(out_m, out_mbar) ** 2 >= lam**4 - 1e-9


class TestRandomStates:
    def test_pure_state_normalized(self, rng):
        psi = linalg.random_pure_state(5, rng)
        assert abs(np.linalg.norm(psi) - 1.0) <= 1e-12

    def test_density_matrix_valid(self, rng):
        rho = linalg.random_density_matrix(4, rng)
        linalg.check_density_matrix(rho)
