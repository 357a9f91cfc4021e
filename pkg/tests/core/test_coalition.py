"""Tests for coalition values and Shapley payoffs."""

from typing import Dict, List

import numpy as np
import pytest

import fastersim.core.coalition as coalition_module
from fastersim.core.coalition import (
    CoalitionTooLargeError,
    InvalidCoalitionError,
    OracleTooLargeError,
    PayoffVector,
    coalition_value,
    coalition_values,
    shapley,
    shapley_from_values,
    shapley_oracle,
    subpath,
)
from fastersim.core.geometry import path_saving
from fastersim.models.core import CoalitionValueVariant, NodeId, Route
from tests.factories import make_route, midpoint_route, random_route, thirds_route

SAVED = CoalitionValueVariant.SAVED
LITERAL = CoalitionValueVariant.LITERAL
VARIANTS = [SAVED, LITERAL]


class TestSubpath:
    """Sub-route formed by a coalition."""

    def test_full_coalition_is_the_route(self) -> None:
        route = thirds_route()
        assert subpath(route, {1, 2}).path == (0, 1, 2, 3)

    def test_empty_coalition_is_direct(self) -> None:
        assert subpath(thirds_route(), set()).path == (0, 3)

    def test_relay_order_is_preserved(self) -> None:
        route = make_route([(0, 0), (50, 0), (100, 0), (150, 0), (200, 0)])
        assert subpath(route, {3, 1}).path == (0, 1, 3, 4)

    def test_stranger_rejected(self) -> None:
        with pytest.raises(InvalidCoalitionError):
            subpath(thirds_route(), {3})


class TestCoalitionValue:
    """Worth of sub-coalitions under both readings."""

    def test_saved_grand_coalition(self) -> None:
        assert coalition_value(thirds_route(), {1, 2}, SAVED) == pytest.approx(
            26 / 27, abs=1e-12
        )

    def test_saved_single_relay(self) -> None:
        assert coalition_value(thirds_route(), {1}, SAVED) == pytest.approx(
            64 / 81, abs=1e-12
        )

    def test_literal_grand_coalition(self) -> None:
        assert coalition_value(thirds_route(), {1, 2}, LITERAL) == pytest.approx(
            160 / 81, abs=1e-12
        )

    @pytest.mark.parametrize("variant", VARIANTS)
    def test_empty_coalition_is_worthless(self, variant: CoalitionValueVariant) -> None:
        assert coalition_value(thirds_route(), set(), variant) == 0.0

    def test_saved_value_is_subpath_saving(self) -> None:
        rng = np.random.default_rng(11)
        for _ in range(100):
            route = random_route(rng, 4)
            members = {node for node in route.relays if rng.random() < 0.5}
            assert coalition_value(route, members, SAVED) == pytest.approx(
                path_saving(subpath(route, members)), abs=1e-12
            )

    def test_value_table_indexed_by_mask(self) -> None:
        values = coalition_values(thirds_route(), SAVED)
        assert values.shape == (4,)
        assert values[0] == 0.0
        assert values[0b01] == pytest.approx(64 / 81, abs=1e-12)
        assert values[0b10] == pytest.approx(64 / 81, abs=1e-12)
        assert values[0b11] == pytest.approx(26 / 27, abs=1e-12)


class TestShapley:
    """Exact Shapley payoffs and the permutation oracle."""

    def test_single_relay_takes_everything(self) -> None:
        payoffs = shapley(midpoint_route())
        assert payoffs.shares == {1: 0.875}
        assert payoffs.grand_value == 0.875

    def test_thirds_saved(self) -> None:
        payoffs = shapley(thirds_route(), SAVED)
        assert payoffs.shares[1] == pytest.approx(13 / 27, abs=1e-12)
        assert payoffs.shares[2] == pytest.approx(13 / 27, abs=1e-12)
        assert payoffs.shares[1] == pytest.approx(payoffs.shares[2], abs=1e-12)

    def test_thirds_literal(self) -> None:
        payoffs = shapley(thirds_route(), LITERAL)
        assert payoffs.shares[1] == pytest.approx(80 / 81, abs=1e-12)
        assert payoffs.shares[2] == pytest.approx(80 / 81, abs=1e-12)
        assert payoffs.grand_value == pytest.approx(160 / 81, abs=1e-12)

    def test_literal_share_is_the_relays_own_term(self) -> None:
        rng = np.random.default_rng(13)
        for _ in range(50):
            route = random_route(rng, int(rng.integers(1, 7)))
            payoffs = shapley(route, LITERAL)
            for node in route.relays:
                assert payoffs.shares[node] == pytest.approx(
                    coalition_value(route, {node}, LITERAL), abs=1e-12
                )

    def test_literal_terms_computed_once_per_table(
        self, monkeypatch: pytest.MonkeyPatch
    ) -> None:
        calls: List[Route] = []
        original = coalition_module._literal_terms

        def counting(route: Route) -> Dict[NodeId, float]:
            calls.append(route)
            return original(route)

        monkeypatch.setattr(coalition_module, "_literal_terms", counting)
        route = random_route(np.random.default_rng(4), 6)
        values = coalition_values(route, LITERAL)
        assert len(calls) == 1
        assert values[-1] == pytest.approx(
            coalition_value(route, set(route.relays), LITERAL), abs=1e-12
        )

    @pytest.mark.parametrize("variant", VARIANTS)
    def test_oracle_thirds(self, variant: CoalitionValueVariant) -> None:
        exact = shapley(thirds_route(), variant)
        oracle = shapley_oracle(thirds_route(), variant)
        for node in (1, 2):
            assert oracle.shares[node] == pytest.approx(exact.shares[node], abs=1e-12)

    @pytest.mark.parametrize("variant", VARIANTS)
    def test_direct_route_has_empty_payoff(self, variant: CoalitionValueVariant) -> None:
        route = make_route([(0, 0), (200, 0)])
        for payoffs in (shapley(route, variant), shapley_oracle(route, variant)):
            assert payoffs.shares == {}
            assert payoffs.grand_value == 0.0

    def test_size_cap(self) -> None:
        route = make_route([(0, 0), (50, 0), (100, 0), (150, 0), (200, 0)])
        with pytest.raises(CoalitionTooLargeError) as excinfo:
            shapley(route, SAVED, max_exact_n=2)
        assert excinfo.value.n == 3
        assert excinfo.value.max_exact_n == 2

    def test_oracle_size_cap(self) -> None:
        route = make_route([(float(x), 0.0) for x in range(0, 550, 50)])
        assert route.n_relays == 9
        with pytest.raises(OracleTooLargeError):
            shapley_oracle(route)

    def test_payoff_vector_enforces_efficiency(self) -> None:
        with pytest.raises(ValueError):
            PayoffVector(shares={1: 0.5, 2: 0.5}, grand_value=2.0)

    def test_value_table_length_must_be_power_of_two(self) -> None:
        with pytest.raises(ValueError):
            shapley_from_values(np.zeros(3))


class TestShapleyAxioms:
    """Axiom suites over seeded random routes."""

    @pytest.mark.parametrize("variant", VARIANTS)
    def test_efficiency(self, variant: CoalitionValueVariant) -> None:
        rng = np.random.default_rng(100)
        for _ in range(500):
            route = random_route(rng, int(rng.integers(1, 7)))
            payoffs = shapley(route, variant)
            values = coalition_values(route, variant)
            assert len(payoffs.shares) == route.n_relays
            assert sum(payoffs.shares.values()) == pytest.approx(
                values[-1], abs=1e-9 * max(1.0, abs(values[-1]))
            )

    def test_symmetry_on_mirrored_relays(self) -> None:
        route = make_route([(0, 0), (100, 50), (200, 80), (300, 50), (400, 0)])
        payoffs = shapley(route, SAVED)
        assert payoffs.shares[1] == pytest.approx(payoffs.shares[3], abs=1e-9)

    def test_symmetry_on_random_mirrored_pairs(self) -> None:
        rng = np.random.default_rng(5)
        for _ in range(50):
            x, y = rng.uniform(10, 190), rng.uniform(-100, 100)
            route = make_route([(0, 0), (x, y), (400 - x, y), (400, 0)])
            payoffs = shapley(route, SAVED)
            assert payoffs.shares[1] == pytest.approx(payoffs.shares[2], abs=1e-9)

    def test_null_player(self) -> None:
        """A relay sitting on the sender never changes any coalition's value."""
        rng = np.random.default_rng(3)
        for _ in range(100):
            route = random_route(rng, int(rng.integers(1, 5)))
            points = [
                (route.positions[node].x, route.positions[node].y)
                for node in route.path
            ]
            with_null = make_route([points[0], points[0], *points[1:]])
            payoffs = shapley(with_null, SAVED)
            assert payoffs.shares[1] == pytest.approx(0.0, abs=1e-12)

    def test_additivity(self) -> None:
        rng = np.random.default_rng(21)
        for _ in range(100):
            route = random_route(rng, int(rng.integers(1, 7)))
            saved = coalition_values(route, SAVED)
            literal = coalition_values(route, LITERAL)
            combined = shapley_from_values(saved + literal)
            separate = shapley_from_values(saved) + shapley_from_values(literal)
            np.testing.assert_allclose(combined, separate, rtol=0, atol=1e-9)

    @pytest.mark.parametrize("factor", [0.5, 2.0, 8.0])
    def test_positive_scaling(self, factor: float) -> None:
        rng = np.random.default_rng(8)
        for _ in range(100):
            route = random_route(rng, int(rng.integers(1, 7)))
            values = coalition_values(route, SAVED)
            np.testing.assert_array_equal(
                shapley_from_values(factor * values),
                factor * shapley_from_values(values),
            )

    @pytest.mark.parametrize("variant", VARIANTS)
    def test_oracle_equivalence(self, variant: CoalitionValueVariant) -> None:
        rng = np.random.default_rng(42)
        for _ in range(100):
            route = random_route(rng, int(rng.integers(0, 9)))
            exact = shapley(route, variant)
            oracle = shapley_oracle(route, variant)
            for node in route.relays:
                assert oracle.shares[node] == pytest.approx(
                    exact.shares[node], abs=1e-9
                )
