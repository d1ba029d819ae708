"""Witness layer: q-vector extraction, both expressions, classification rules."""

from __future__ import annotations

from math import cos, pi, sqrt

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_observable, random_scenario, random_state
from hardykit import (
    BlochDirection,
    DimensionMismatch,
    Observable,
    QVector,
    QuantumState,
    Scenario,
    ch_expression,
    classify,
    generalized_expression,
    maximally_mixed,
    planar_scenario,
    q_vector,
    scenario_from_dict,
    scenario_to_dict,
    singlet,
    spin_observable,
    witness_report,
)

REFERENCE_ANGLES = (0.0, pi / 2, 3 * pi / 4, pi / 4)  # (x1, y1, x2, y2)
UPPER_TARGET = 0.5 * (1.0 + sqrt(2.0))


def reference_scenario() -> Scenario:
    return planar_scenario(*REFERENCE_ANGLES, plane="xy")


class TestQVectorType:
    def test_components_clamped(self):
        q = QVector(-5e-11, 0.2, 1.0 + 5e-11, 0.3)
        assert q.q1 == 0.0
        assert q.q3 == 1.0

    def test_out_of_range_rejected(self):
        with pytest.raises(ValueError):
            QVector(0.1, 0.2, 0.3, 1.5)

    def test_q5_q6_must_come_together(self):
        with pytest.raises(ValueError):
            QVector(0.1, 0.1, 0.1, 0.1, q5=0.1)

    def test_trichotomic_flag(self):
        assert not QVector(0.1, 0.1, 0.1, 0.1).trichotomic
        assert QVector(0.1, 0.1, 0.1, 0.1, 0.1, 0.1).trichotomic


class TestScenarioType:
    def test_x_labels_must_be_standard(self, rng):
        bad = random_observable(rng, 2, (0.0, 1.0))
        good = random_observable(rng, 2, (-1.0, 1.0))
        with pytest.raises(ValueError):
            Scenario(x1=bad, y1=good, x2=good, y2=good)

    def test_x_arities_must_agree(self, rng):
        dichotomic = random_observable(rng, 3, (-1.0, 1.0))
        trichotomic = random_observable(rng, 3, (-1.0, 0.0, 1.0))
        y = random_observable(rng, 3, (1.0, 2.0))
        with pytest.raises(ValueError):
            Scenario(x1=dichotomic, y1=y, x2=trichotomic, y2=y)

    def test_y_must_contain_plus_one(self, rng):
        x = random_observable(rng, 2, (-1.0, 1.0))
        bad_y = random_observable(rng, 2, (0.0, 2.0))
        with pytest.raises(ValueError):
            Scenario(x1=x, y1=bad_y, x2=x, y2=x)

    def test_json_round_trip(self, rng):
        scenario = random_scenario(rng, 3, 3, trichotomic=True)
        recovered = scenario_from_dict(scenario_to_dict(scenario))
        for name in ("x1", "y1", "x2", "y2"):
            original = getattr(scenario, name)
            parsed = getattr(recovered, name)
            assert parsed.labels == original.labels
            for label in original.labels:
                assert np.array_equal(parsed.projector(label), original.projector(label))


class TestQVectorExtraction:
    def test_singlet_reference_configuration(self):
        q = q_vector(singlet(), reference_scenario())
        near = (2.0 + sqrt(2.0)) / 8.0
        far = (2.0 - sqrt(2.0)) / 8.0
        assert q.q1 == pytest.approx(near, abs=1e-12)
        assert q.q2 == pytest.approx(near, abs=1e-12)
        assert q.q3 == pytest.approx(near, abs=1e-12)
        assert q.q4 == pytest.approx(far, abs=1e-12)

    def test_singlet_reference_against_analytic_rule(self):
        # Independent oracle: each component from the planar singlet rule
        # P(equal) = (1 - cos d)/4, P(opposite) = (1 + cos d)/4.
        x1, y1, x2, y2 = REFERENCE_ANGLES
        q = q_vector(singlet(), reference_scenario())
        assert q.q1 == pytest.approx((1 - cos(x1 - x2)) / 4, abs=1e-12)
        assert q.q2 == pytest.approx((1 + cos(y1 - x2)) / 4, abs=1e-12)
        assert q.q3 == pytest.approx((1 + cos(x1 - y2)) / 4, abs=1e-12)
        assert q.q4 == pytest.approx((1 - cos(y1 - y2)) / 4, abs=1e-12)

    def test_maximally_mixed_is_flat(self, rng):
        scenario = random_scenario(rng)
        q = q_vector(maximally_mixed(2, 2), scenario)
        for component in q.components():
            assert component == pytest.approx(0.25, abs=1e-12)

    def test_trichotomic_vector_has_six_components(self, rng):
        scenario = random_scenario(rng, 3, 3, trichotomic=True)
        q = q_vector(random_state(rng, 3, 3), scenario)
        assert q.trichotomic
        assert len(q.components()) == 6

    def test_dimension_mismatch(self, rng):
        scenario = random_scenario(rng, 3, 3)
        with pytest.raises(DimensionMismatch):
            q_vector(singlet(), scenario)


class TestGeneralizedExpression:
    def test_pure_hardy_pattern(self):
        assert generalized_expression(QVector(0.0, 0.0, 0.0, 0.05)) == pytest.approx(-0.05)

    def test_singlet_closed_form(self):
        near = (2.0 + sqrt(2.0)) / 8.0
        far = (2.0 - sqrt(2.0)) / 8.0
        value = generalized_expression(QVector(near, near, near, far))
        assert value == pytest.approx(UPPER_TARGET, abs=1e-12)

    def test_flat_vector(self):
        assert generalized_expression(QVector(0.25, 0.25, 0.25, 0.25)) == pytest.approx(0.5)

    def test_trichotomic_terms_enter(self):
        value = generalized_expression(QVector(0.1, 0.1, 0.1, 0.2, 0.05, 0.05))
        assert value == pytest.approx(0.2)


class TestChExpression:
    def test_singlet_reference_value(self):
        value = ch_expression(singlet(), reference_scenario())
        assert value == pytest.approx(UPPER_TARGET, abs=1e-12)

    def test_maximally_mixed_is_half(self, rng):
        scenario = random_scenario(rng)
        assert ch_expression(maximally_mixed(2, 2), scenario) == pytest.approx(0.5, abs=1e-12)

    def test_product_state_z_configuration(self):
        z_obs = spin_observable(BlochDirection(0.0, 0.0))
        scenario = Scenario(x1=z_obs, y1=z_obs, x2=z_obs, y2=z_obs)
        state = QuantumState.pure([1.0, 0.0, 0.0, 0.0], (2, 2))
        # 1 - 1 - 1 - 1 + 1 + 1 = 0
        assert ch_expression(state, scenario) == pytest.approx(0.0, abs=1e-12)

    def test_agreement_with_generalized_expression(self, rng):
        # 300 randomized pairs here; the acceptance suite runs 1000.
        for index in range(300):
            trichotomic = index % 3 == 2
            if trichotomic:
                d1, d2 = (2, 3) if index % 2 else (3, 3)
            else:
                d1, d2 = (2, 2) if index % 2 else (2, 3)
            scenario = random_scenario(rng, d1, d2, trichotomic=trichotomic)
            state = random_state(rng, d1, d2)
            gen = generalized_expression(q_vector(state, scenario))
            ch = ch_expression(state, scenario)
            assert abs(gen - ch) < 1e-10

    def test_agreement_with_zero_rank_trichotomic_qubit(self, rng):
        # A qubit x-observable with spectrum {-1, 0, +1} carries one zero
        # projector; the identity must survive this degenerate case.
        scenario = random_scenario(rng, 2, 2, trichotomic=True)
        state = random_state(rng, 2, 2)
        gen = generalized_expression(q_vector(state, scenario))
        assert abs(gen - ch_expression(state, scenario)) < 1e-10


class TestClassify:
    def test_hardy_pattern(self):
        q = QVector(0.0, 0.0, 0.0, 0.09)
        assert classify(q, -0.09, 1e-9) == "HardyViolation"

    def test_kunkri_pattern(self):
        q = QVector(0.01, 0.0, 0.0, 0.05)
        assert classify(q, -0.04, 1e-9) == "KunkriViolation"

    def test_flat_vector_is_local(self):
        q = QVector(0.25, 0.25, 0.25, 0.25)
        assert classify(q, 0.5, 1e-9) == "NoViolation"

    def test_bound_labels(self):
        q = QVector(0.4, 0.4, 0.4, 0.05)
        assert classify(q, generalized_expression(q), 1e-9) == "UpperBoundViolation"
        q = QVector(0.0, 0.1, 0.0, 0.3)
        assert classify(q, generalized_expression(q), 1e-9) == "LowerBoundViolation"

    def test_trichotomic_zeros_must_vanish_for_hardy(self):
        q = QVector(0.0, 0.0, 0.0, 0.09, 0.02, 0.0)
        assert classify(q, generalized_expression(q), 1e-9) != "HardyViolation"
        q = QVector(0.0, 0.0, 0.0, 0.09, 0.0, 0.0)
        assert classify(q, generalized_expression(q), 1e-9) == "HardyViolation"

    def test_tolerance_must_be_positive(self):
        with pytest.raises(ValueError):
            classify(QVector(0.0, 0.0, 0.0, 0.0), 0.0, 0.0)

    @given(q4=st.floats(min_value=1e-6, max_value=1.0))
    def test_hardy_condition_violates_lower_bound(self, q4):
        q = QVector(0.0, 0.0, 0.0, q4)
        gen = generalized_expression(q)
        assert classify(q, gen, 1e-9) == "HardyViolation"
        assert gen < 0.0

    @given(
        q4=st.floats(min_value=1e-4, max_value=1.0),
        fraction=st.floats(min_value=0.01, max_value=0.97),
    )
    def test_kunkri_condition_violates_lower_bound(self, q4, fraction):
        q1 = fraction * q4
        if not 1e-9 < q1 < q4 - 1e-9:
            return
        q = QVector(q1, 0.0, 0.0, q4)
        gen = generalized_expression(q)
        assert classify(q, gen, 1e-9) == "KunkriViolation"
        assert gen < 0.0

    @settings(max_examples=200)
    @given(data=st.data())
    def test_comfortable_no_violation_is_stable(self, data):
        # A NoViolation verdict at margin > tol must not flip under
        # perturbations smaller than tol / 10.
        tol = 1e-9
        q2 = data.draw(st.floats(min_value=100 * tol, max_value=0.2))
        q3 = data.draw(st.floats(min_value=100 * tol, max_value=0.2))
        q1 = data.draw(st.floats(min_value=0.0, max_value=0.2))
        q4 = data.draw(st.floats(min_value=0.0, max_value=min(q1 + q2 + q3 - 2 * tol, 1.0)))
        q = QVector(q1, q2, q3, q4)
        gen = generalized_expression(q)
        if not 2 * tol < gen < 1.0 - 2 * tol:
            return
        assert classify(q, gen, tol) == "NoViolation"
        deltas = [
            data.draw(st.floats(min_value=-tol / 10, max_value=tol / 10)) for _ in range(4)
        ]
        perturbed = QVector(
            min(max(q.q1 + deltas[0], 0.0), 1.0),
            min(max(q.q2 + deltas[1], 0.0), 1.0),
            min(max(q.q3 + deltas[2], 0.0), 1.0),
            min(max(q.q4 + deltas[3], 0.0), 1.0),
        )
        gen_perturbed = generalized_expression(perturbed)
        assert classify(perturbed, gen_perturbed, tol) == "NoViolation"


class TestWitnessReport:
    def test_reference_report(self):
        report = witness_report(singlet(), reference_scenario())
        assert report.classification == "UpperBoundViolation"
        assert report.generalized_value == pytest.approx(UPPER_TARGET, abs=1e-9)
        assert report.ch_value == pytest.approx(UPPER_TARGET, abs=1e-9)

    def test_to_dict_schema(self):
        report = witness_report(singlet(), reference_scenario())
        payload = report.to_dict()
        assert sorted(payload) == ["ch", "class", "generalized", "q"]
        assert len(payload["q"]) == 4
