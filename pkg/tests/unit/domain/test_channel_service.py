from __future__ import annotations

import math

import numpy as np
import pytest

from shadowmancer.domain.model.channel_eigenvalues import ChannelEigenvalues
from shadowmancer.domain.model.config_manager import ConfigManager
from shadowmancer.domain.model.entanglement_feature import EntanglementFeature
from shadowmancer.domain.model.errors import ChannelError, OracleError, UnlearnableOperatorError
from shadowmancer.domain.model.pauli_string import PauliString
from shadowmancer.domain.model.protocol_spec import BasisFamily, BlockBasis, ScrambleMode
from shadowmancer.domain.model.shadow_norm import ShadowNorm
from shadowmancer.domain.service import channel_service as channels
from shadowmancer.domain.service.oracle_service import (
    bell_basis,
    circuit_basis,
    measured_feature,
    oracle_block_eig,
    oracle_block_table,
    product_basis,
)

from tests.unit.protocols import TUNABLE_DELTA, bell_chain, ghz_chain, pauli_chain, tunable_chain, z_string


class TestEigenvalueTables:
    def test_pauli_and_bell(self) -> None:
        assert channels.pauli_block_eigs().values == (1.0, 1.0 / 3.0)
        assert channels.bell_block_eigs().values == (1.0, 0.0, 0.0, 1.0 / 3.0)

    def test_tunable_endpoints(self) -> None:
        pauli = channels.pauli_block_eigs()

        assert np.allclose(channels.tunable_block_eigs(0.0).values, channels.bell_block_eigs().values)
        assert np.allclose(channels.tunable_block_eigs(channels.LN2).values, pauli.tensor(pauli).values)

    def test_tunable_at_eleven_eighths(self) -> None:
        table = channels.tunable_block_eigs(TUNABLE_DELTA)

        assert table.values[1] == pytest.approx(1.0 / 8.0)
        assert table.values[3] == pytest.approx(1.0 / 4.0)

    def test_tunable_delta_out_of_range(self) -> None:
        with pytest.raises(ChannelError):
            channels.tunable_block_eigs(1.0)

    @pytest.mark.parametrize("block_size", range(2, 9))
    def test_ghz_full_pattern_closed_form(self, block_size: int) -> None:
        table = channels.ghz_block_eigs(block_size)
        n = block_size

        assert table.values[-1] == pytest.approx((2**n + 1 + (-1) ** n) / (2 * 3**n), abs=1e-14)

    def test_uniform_purity_map_for_three_sites(self) -> None:
        for purity in (0.5, 0.6, 0.8, 1.0):
            table = channels.ef_to_eigs(EntanglementFeature.uniform(3, purity))
            assert table.values[-1] == pytest.approx((7.0 - 6.0 * purity) / 27.0, abs=1e-14)

    def test_product_feature_gives_pauli_tensor(self) -> None:
        pauli = channels.pauli_block_eigs()
        table = channels.ef_to_eigs(measured_feature(product_basis(2)))

        assert np.allclose(table.values, pauli.tensor(pauli).values)

    def test_invalid_table_rejected(self) -> None:
        with pytest.raises(ChannelError):
            ChannelEigenvalues.from_values(1, (1.0, 1.5))
        with pytest.raises(ChannelError):
            ChannelEigenvalues.from_values(2, (1.0, 0.5))


class TestScaling:
    def test_known_values(self) -> None:
        assert channels.scaling_factor(1) == pytest.approx(3.0)
        assert channels.scaling_factor(2) == pytest.approx(math.sqrt(3.0))
        assert channels.scaling_factor(3) == pytest.approx(3.0 * 2.0 ** (-2.0 / 3.0))
        assert channels.scaling_factor(4) == pytest.approx(math.sqrt(3.0))

    @pytest.mark.parametrize("start", [3, 4])
    def test_strictly_decreasing_within_parity(self, start: int) -> None:
        values = [channels.scaling_factor(n) for n in range(start, 40, 2)]

        assert all(later < earlier for earlier, later in zip(values, values[1:]))

    def test_stays_above_asymptote(self) -> None:
        assert all(channels.stabilizer_bound_check(n) for n in range(1, 64))
        assert channels.scaling_factor(63) == pytest.approx(channels.ASYMPTOTIC_SCALING, abs=0.05)


class TestCphaseCalibration:
    @pytest.mark.parametrize("phi", [0.0, 0.3, 1.0, math.pi / 2, 2.5, math.pi])
    def test_single_purity(self, phi: float) -> None:
        assert channels.cphase_single_purity(phi) == pytest.approx((3.0 + math.cos(phi)) / 4.0)

    @pytest.mark.parametrize("delta", [0.0, 0.05, TUNABLE_DELTA, 0.6, math.log(2.0)])
    def test_phi_delta_round_trip(self, delta: float) -> None:
        assert channels.delta_from_phi(channels.phi_from_delta(delta)) == pytest.approx(delta, abs=1e-9)

    def test_endpoints(self) -> None:
        assert channels.delta_from_phi(math.pi) == pytest.approx(0.0, abs=1e-15)
        assert channels.delta_from_phi(0.0) == pytest.approx(channels.LN2)

    def test_phi_out_of_range(self) -> None:
        with pytest.raises(ChannelError):
            channels.delta_from_phi(4.0)


class TestShadowNorms:
    @pytest.mark.parametrize("weight", [2, 4, 6, 8, 10])
    def test_bell_even_strings(self, weight: int) -> None:
        norm = channels.shadow_norm_sq(z_string(10, weight), bell_chain(10))

        assert norm.value == pytest.approx(3.0 ** (weight / 2))

    def test_bell_cut_string_unlearnable(self) -> None:
        norm = channels.shadow_norm_sq(z_string(6, 3), bell_chain(6))

        assert norm.is_unlearnable
        assert norm.display() == "UNLEARNABLE"

    @pytest.mark.parametrize("weight", range(1, 9))
    def test_tunable_strings(self, weight: int) -> None:
        norm = channels.shadow_norm_sq(z_string(10, weight), tunable_chain(10))

        assert norm.value == pytest.approx(4.0 ** (weight % 2) * 2.0**weight)

    def test_pauli_strings(self) -> None:
        assert channels.shadow_norm_sq(z_string(4, 3), pauli_chain(4)).value == pytest.approx(27.0)

    def test_ghz_compatible_norms(self) -> None:
        assert channels.shadow_norm_sq(z_string(4, 4), ghz_chain(4, 4)).value == pytest.approx(
            channels.scaling_factor(4) ** 4
        )
        assert channels.shadow_norm_sq(z_string(3, 3), ghz_chain(3)).value == pytest.approx(27.0 / 4.0)

    def test_inverse_eigenvalue_raises_on_zero(self) -> None:
        channel = channels.protocol_channel(bell_chain(4))

        with pytest.raises(UnlearnableOperatorError):
            channels.inverse_eigenvalue(z_string(4, 1), channel)

    def test_zero_threshold_from_settings(self) -> None:
        channel = channels.protocol_channel(pauli_chain(2))
        ConfigManager().set_setting("numerics.zero_threshold", 0.5)

        assert channels.zero_threshold() == 0.5
        assert channels.channel_norm_sq(z_string(2, 1), channel).is_unlearnable
        with pytest.raises(UnlearnableOperatorError):
            channels.inverse_eigenvalue(z_string(2, 2), channel)

    def test_zero_threshold_default(self) -> None:
        assert channels.zero_threshold() == 1e-12

    def test_small_delta_form(self) -> None:
        assert channels.shadow_norm_sq_small_delta(4, 0, 0.1) == pytest.approx(3.2**2)
        assert channels.shadow_norm_sq_small_delta(2, 1, 0.0) == math.inf

    def test_hit_probability(self) -> None:
        assert channels.hit_probability(z_string(4, 4), bell_chain(4)) == pytest.approx(1.0 / 9.0)
        with pytest.raises(ChannelError):
            channels.hit_probability(z_string(4, 2), tunable_chain(4))


class TestBudgets:
    def test_sample_budget(self) -> None:
        norms = [ShadowNorm(value=3.0), ShadowNorm(value=9.0)]

        assert channels.sample_budget(norms, 0.1) == math.ceil(math.log(2.0) * 9.0 / 0.01)

    def test_single_operator_floor(self) -> None:
        assert channels.sample_budget([ShadowNorm(value=9.0)], 0.1) == 1

    def test_num_operators_override(self) -> None:
        budget = channels.sample_budget([ShadowNorm(value=3.0)], 0.5, num_operators=100)

        assert budget == math.ceil(math.log(100.0) * 3.0 / 0.25)

    def test_rejects_bad_input(self) -> None:
        with pytest.raises(ChannelError):
            channels.sample_budget([ShadowNorm(value=3.0)], 0.0)
        with pytest.raises(UnlearnableOperatorError):
            channels.sample_budget([ShadowNorm.unlearnable("ZZZ")], 0.1)

    def test_split_sums_groups(self) -> None:
        groups = [[ShadowNorm(value=3.0)] * 4, [], [ShadowNorm(value=9.0)] * 2]

        expected = channels.sample_budget(groups[0], 0.2) + channels.sample_budget(groups[2], 0.2)
        assert channels.sample_budget_split(groups, 0.2) == expected

    def test_pauli_baseline(self) -> None:
        assert channels.pauli_baseline_budget([2, 6], 0.1) == math.ceil(math.log(2.0) * 729.0 / 0.01)


class TestOracle:
    def test_bell_table(self) -> None:
        assert np.allclose(oracle_block_table(bell_basis()).values, channels.bell_block_eigs().values)

    def test_circuit_bell_basis_matches(self) -> None:
        states = circuit_basis(BlockBasis(family=BasisFamily.BELL, size=2))

        assert np.allclose(oracle_block_table(states).values, channels.bell_block_eigs().values)

    def test_value_independent_of_letters(self) -> None:
        values = [oracle_block_eig(bell_basis(), 0b11, letters) for letters in ("ZZ", "XY", "YX", "XZ")]

        assert np.allclose(values, 1.0 / 3.0)

    @pytest.mark.parametrize("delta", [0.0, 0.2, TUNABLE_DELTA, math.log(2.0)])
    def test_tunable_matches_analytic(self, delta: float) -> None:
        basis = BlockBasis(family=BasisFamily.TUNABLE_PHASE, size=2, phi=channels.phi_from_delta(delta))

        assert np.allclose(
            oracle_block_table(circuit_basis(basis)).values, channels.tunable_block_eigs(delta).values, atol=1e-10
        )

    def test_ghz3_matches_feature_map(self) -> None:
        states = circuit_basis(BlockBasis(family=BasisFamily.GHZ, size=3))

        assert np.allclose(oracle_block_table(states).values, channels.ghz_block_eigs(3).values, atol=1e-12)

    def test_one_per_block_bell_table_unchanged(self) -> None:
        table = oracle_block_table(bell_basis(), ScrambleMode.ONE_PER_BLOCK)

        assert np.allclose(table.values, channels.bell_block_eigs().values)

    def test_non_orthonormal_basis(self) -> None:
        states = np.ones((2, 2), dtype=complex)

        with pytest.raises(OracleError):
            oracle_block_table(states)

    def test_block_size_guard(self) -> None:
        with pytest.raises(OracleError):
            oracle_block_table(product_basis(4))
