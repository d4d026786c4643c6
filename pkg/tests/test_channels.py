import json

import numpy as np
import pytest

from qchd import channels as ch
from qchd import linalg
from qchd.errors import (
    BudgetExceededError,
    DimensionMismatchError,
    FormatError,
    ParameterOutOfRangeError,
)


class TestApply:
    def test_identity_channel(self, rng):
        rho = linalg.random_density_matrix(3, rng)
        assert np.allclose(ch.apply(ch.identity_channel(3), rho), rho, atol=1e-14)

    def test_full_depolarizing(self, rng):
        rho = linalg.random_density_matrix(2, rng)
        assert np.allclose(ch.apply(ch.depolarizing(1.0), rho), np.eye(2) / 2, atol=1e-12)

    def test_amplitude_damping_on_excited(self):
        gamma = 0.3
        out = ch.apply(ch.amplitude_damping(gamma), linalg.ketbra(ch.KET1))
        assert np.allclose(out, np.diag([gamma, 1 - gamma]), atol=1e-14)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            ch.apply(ch.depolarizing(0.5), np.eye(3) / 3)


class TestApplyExtended:
    def test_product_input(self, rng):
        chan = ch.amplitude_damping(0.4)
        rho_r = linalg.random_density_matrix(3, rng)
        rho_a = linalg.random_density_matrix(2, rng)
        out = ch.apply_extended(chan, np.kron(rho_r, rho_a), ref_dim=3)
        assert np.allclose(out, np.kron(rho_r, ch.apply(chan, rho_a)), atol=1e-12)

    def test_identity_on_bell(self):
        bell = (np.kron(ch.KET0, ch.KET0) + np.kron(ch.KET1, ch.KET1)) / np.sqrt(2)
        bell = linalg.ketbra(bell)
        out = ch.apply_extended(ch.identity_channel(2), bell, ref_dim=2)
        assert np.allclose(out, bell, atol=1e-14)

    def test_consistency_with_reduced_state(self, rng):
        chan = ch.depolarizing(0.35)
        rho = linalg.random_density_matrix(4, rng)
        lhs = linalg.partial_trace(ch.apply_extended(chan, rho, ref_dim=2), [2, 2], [1])
        rhs = ch.apply(chan, linalg.partial_trace(rho, [2, 2], [1]))
        assert np.allclose(lhs, rhs, atol=1e-12)

    def test_matches_vector_path(self, rng):
        chan = ch.amplitude_damping(0.25)
        psi = linalg.random_pure_state(4, rng)
        dense = ch.apply_extended(chan, linalg.ketbra(psi), ref_dim=2)
        fast = ch.apply_to_vector(chan, psi, ref_dim=2)
        assert np.allclose(dense, fast, atol=1e-12)


class TestTensorPower:
    def test_single_power_same_action(self, rng):
        chan = ch.amplitude_damping(0.3)
        rho = linalg.random_density_matrix(2, rng)
        assert np.allclose(
            ch.apply(ch.tensor_power(chan, 1), rho), ch.apply(chan, rho), atol=1e-14
        )

    def test_identity_squared(self, rng):
        chan = ch.tensor_power(ch.identity_channel(2), 2)
        rho = linalg.random_density_matrix(4, rng)
        assert np.allclose(ch.apply(chan, rho), rho, atol=1e-12)

    def test_depolarizing_squared_on_product(self):
        q = 0.45
        single = ch.apply(ch.depolarizing(q), linalg.ketbra(ch.KET0))
        squared = ch.apply(
            ch.tensor_power(ch.depolarizing(q), 2),
            linalg.ketbra(np.kron(ch.KET0, ch.KET0)),
        )
        assert np.allclose(squared, np.kron(single, single), atol=1e-12)

    def test_budget_guard(self):
        with pytest.raises(BudgetExceededError):
            ch.tensor_power(ch.depolarizing(0.5), 7)


class TestNamedChannels:
    def test_pauli_matches_depolarizing(self, rng):
        q = 0.37
        dep = ch.depolarizing(q)
        pl = ch.pauli((1 - 3 * q / 4, q / 4, q / 4, q / 4))
        for _ in range(10):
            rho = linalg.random_density_matrix(2, rng)
            assert np.allclose(ch.apply(dep, rho), ch.apply(pl, rho), atol=1e-12)

    def test_full_damping_resets(self, rng):
        chan = ch.amplitude_damping(1.0)
        for _ in range(5):
            rho = linalg.random_density_matrix(2, rng)
            assert np.allclose(ch.apply(chan, rho), linalg.ketbra(ch.KET0), atol=1e-12)

    @pytest.mark.parametrize(
        "build",
        [
            lambda: ch.depolarizing(-0.1),
            lambda: ch.depolarizing(1.1),
            lambda: ch.amplitude_damping(2.0),
            lambda: ch.pauli((0.5, 0.5, 0.5, -0.5)),
            lambda: ch.pauli((0.5, 0.2, 0.2, 0.2)),
        ],
    )
    def test_parameter_range(self, build):
        with pytest.raises(ParameterOutOfRangeError):
            build()

    def test_kraus_completeness_everywhere(self):
        for chan in (
            ch.depolarizing(0.3),
            ch.pauli((0.4, 0.3, 0.2, 0.1)),
            ch.amplitude_damping(0.6),
            ch.completely_depolarizing(4, 2),
            *ch.harrow_channels(),
        ):
            assert ch.completeness_residual(chan.kraus, chan.in_dim) <= 1e-10


class TestHarrowChannels:
    def test_prepared_states_on_control_zero(self, harrow_pair):
        m, mbar = harrow_pair
        r00 = linalg.ketbra(np.kron(ch.KET0, ch.KET0))
        assert np.allclose(ch.apply(m, r00), linalg.ketbra(ch.KET0), atol=1e-12)
        assert np.allclose(ch.apply(mbar, r00), linalg.ketbra(ch.KET_PLUS), atol=1e-12)

    def test_five_kraus_each(self, harrow_pair):
        assert len(harrow_pair[0].kraus) == 5
        assert len(harrow_pair[1].kraus) == 5

    def test_choi_ppt(self, harrow_pair):
        # measure-and-prepare maps have separable, hence PPT, Choi states
        assert ch.choi_is_ppt(harrow_pair[0])
        assert ch.choi_is_ppt(harrow_pair[1])


class TestBlochAffine:
    def test_depolarizing_form(self):
        q = 0.3
        aff = ch.bloch_affine_of(ch.depolarizing(q))
        assert np.allclose(aff.t, np.zeros(3), atol=1e-12)
        assert np.allclose(aff.T, (1 - q) * np.eye(3), atol=1e-12)

    def test_amplitude_damping_form(self):
        gamma = 0.4
        aff = ch.bloch_affine_of(ch.amplitude_damping(gamma))
        assert np.allclose(aff.t, [0, 0, gamma], atol=1e-12)
        assert np.allclose(
            aff.T, np.diag([np.sqrt(1 - gamma), np.sqrt(1 - gamma), 1 - gamma]), atol=1e-12
        )

    def test_pauli_form(self):
        p = (0.5, 0.25, 0.15, 0.1)
        aff = ch.bloch_affine_of(ch.pauli(p))
        pi, px, py, pz = p
        expected = np.diag([pi + px - py - pz, pi - px + py - pz, pi - px - py + pz])
        assert np.allclose(aff.t, np.zeros(3), atol=1e-12)
        assert np.allclose(aff.T, expected, atol=1e-12)

    def test_round_trip(self, rng):
        chan = ch.amplitude_damping(0.55)
        aff = ch.bloch_affine_of(chan)
        for _ in range(100):
            rho = linalg.random_density_matrix(2, rng)
            assert np.allclose(aff.apply(rho), ch.apply(chan, rho), atol=1e-10)

    def test_complete_positivity_check(self):
        assert ch.bloch_affine_of(ch.depolarizing(0.2)).is_completely_positive()
        # a transpose-like map is positive but not completely positive
        bad = ch.BlochAffine(np.zeros(3), np.diag([1.0, -1.0, 1.0]))
        assert not bad.is_completely_positive()

    def test_requires_qubits(self):
        with pytest.raises(DimensionMismatchError):
            ch.bloch_affine_of(ch.identity_channel(3))

    def test_angles_reach_bloch_vector(self):
        psi = ch.pure_state_from_angles(np.pi / 2, 0.0)
        assert np.allclose(ch.bloch_vector(linalg.ketbra(psi)), [1, 0, 0], atol=1e-12)


class TestCqChannels:
    def build(self, rng):
        return ch.CqChannel(
            ("a", "b"),
            {"a": linalg.random_density_matrix(2, rng), "b": linalg.random_density_matrix(2, rng)},
        )

    def test_single_letter_is_replacer(self, rng):
        rho = linalg.random_density_matrix(2, rng)
        qq = ch.cq_as_qq(ch.CqChannel(("x",), {"x": rho}))
        assert np.allclose(ch.apply(qq, np.eye(1, dtype=complex)), rho, atol=1e-12)

    def test_basis_states_select_branch(self, rng):
        n = self.build(rng)
        qq = ch.cq_as_qq(n)
        for col, letter in enumerate(n.alphabet):
            basis = linalg.ketbra(linalg.ket(col, 2))
            assert np.allclose(ch.apply(qq, basis), n(letter), atol=1e-12)

    def test_embedding_is_trace_preserving(self, rng):
        qq = ch.cq_as_qq(self.build(rng))
        assert ch.completeness_residual(qq.kraus, qq.in_dim) <= 1e-10

    def test_rejects_mixed_dims(self, rng):
        with pytest.raises(DimensionMismatchError):
            ch.CqChannel(
                ("a", "b"),
                {
                    "a": linalg.random_density_matrix(2, rng),
                    "b": linalg.random_density_matrix(3, rng),
                },
            )


class TestMeasurePrepare:
    def test_acts_as_measurement(self, rng):
        pvm = [linalg.ketbra(linalg.ket(i, 2)) for i in range(2)]
        prepared = [linalg.random_density_matrix(2, rng) for _ in range(2)]
        chan = ch.measure_prepare_channel(pvm, prepared)
        rho = linalg.random_density_matrix(2, rng)
        expected = sum(
            np.trace(e @ rho).real * p for e, p in zip(pvm, prepared)
        )
        assert np.allclose(ch.apply(chan, rho), expected, atol=1e-12)

    def test_rejects_incomplete_pvm(self, rng):
        pvm = [linalg.ketbra(linalg.ket(0, 2))]
        with pytest.raises(FormatError, match="completeness"):
            ch.measure_prepare_channel(pvm, [linalg.random_density_matrix(2, rng)])

    def test_rejects_non_projective_elements(self):
        # the elements resolve the identity but are not orthogonal projectors
        with pytest.raises(FormatError, match="orthogonality"):
            ch.measure_prepare_channel(
                [0.5 * np.eye(2), 0.5 * np.eye(2)], [np.eye(2) / 2, np.eye(2) / 2]
            )


class TestJsonInterchange:
    def test_channel_round_trip(self, tmp_path, harrow_pair):
        path = tmp_path / "m.json"
        ch.save_channel(harrow_pair[0], path)
        loaded = ch.load_channel(path)
        assert loaded.in_dim == 4 and loaded.out_dim == 2
        for a, b in zip(loaded.kraus, harrow_pair[0].kraus):
            assert np.allclose(a, b, atol=1e-15)

    def test_rejects_incomplete_kraus(self, tmp_path):
        payload = {
            "in_dim": 2,
            "out_dim": 2,
            "kraus": [[[[0.5, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.5, 0.0]]]],
        }
        path = tmp_path / "bad.json"
        path.write_text(json.dumps(payload))
        with pytest.raises(FormatError, match="completeness.*residual"):
            ch.load_channel(path)

    def test_cq_round_trip(self, tmp_path, rng):
        n = ch.CqChannel(
            ("0", "1"),
            {"0": linalg.random_density_matrix(2, rng), "1": linalg.random_density_matrix(2, rng)},
        )
        path = tmp_path / "cq.json"
        ch.save_cq_channel(n, path)
        loaded = ch.load_cq_channel(path)
        assert loaded.alphabet == n.alphabet
        for x in n.alphabet:
            assert np.allclose(loaded(x), n(x), atol=1e-15)

    def test_cq_rejects_bad_trace(self, tmp_path):
        payload = {
            "alphabet": ["0"],
            "out_dim": 2,
            "states": {"0": [[[0.6, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.6, 0.0]]]},
        }
        path = tmp_path / "bad_cq.json"
        path.write_text(json.dumps(payload))
        with pytest.raises(FormatError, match="trace.*residual"):
            ch.load_cq_channel(path)

    def test_cq_rejects_negative_state(self, tmp_path):
        payload = {
            "alphabet": ["0"],
            "out_dim": 2,
            "states": {"0": [[[1.2, 0.0], [0.0, 0.0]], [[0.0, 0.0], [-0.2, 0.0]]]},
        }
        path = tmp_path / "neg_cq.json"
        path.write_text(json.dumps(payload))
        with pytest.raises(FormatError, match="positivity"):
            ch.load_cq_channel(path)


class TestMixing:
    def test_mixture_interpolates(self, rng):
        a = ch.depolarizing(0.2)
        b = ch.completely_depolarizing(2, 2)
        mixed = ch.mix(a, b, 0.25)
        rho = linalg.random_density_matrix(2, rng)
        expected = 0.75 * ch.apply(a, rho) + 0.25 * ch.apply(b, rho)
        assert np.allclose(ch.apply(mixed, rho), expected, atol=1e-12)

    def test_completely_depolarizing_output(self, rng):
        chan = ch.completely_depolarizing(4, 2)
        rho = linalg.random_density_matrix(4, rng)
        assert np.allclose(ch.apply(chan, rho), np.eye(2) / 2, atol=1e-12)
