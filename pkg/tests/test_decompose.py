import math

import numpy as np
import pytest

from povmdecomp import (
    ExtremalityStatus,
    build_feasibility_lp,
    check_extremal,
    decompose,
    extract_step,
    lp_from_elements,
    povm_equal,
    prepare_rank1,
    random_full_rank_povm,
    random_rank1_povm,
    reconstruct,
    separating_vector,
    to_bloch,
    validate_povm,
)
from povmdecomp.decompose import _peel
from povmdecomp.tolerances import DEFAULT_TOLERANCES

from conftest import KET0, KET1, MINUS, PLUS, pentagon_elements, trine_elements

ROOT5 = math.sqrt(5.0)


def expected_grids(povm):
    out = np.zeros((max(povm.labels) + 1, povm.dim, povm.dim), dtype=np.complex128)
    for w, e, label in zip(povm.weights, povm.elements, povm.labels):
        out[label] += w * e
    return out


class TestFeasibilityLp:
    def test_z_pair_matrix(self):
        prepared = prepare_rank1(validate_povm([KET0, KET1]))
        lp = build_feasibility_lp(prepared)
        assert np.allclose(
            lp.a_matrix, [[0.0, 0.0], [0.0, 0.0], [1.0, -1.0], [1.0, 1.0]], atol=1e-12
        )
        assert np.allclose(lp.b_vector, [0.0, 0.0, 0.0, 2.0])

    def test_bb84_columns(self, bb84_povm):
        prepared = prepare_rank1(bb84_povm)
        lp = build_feasibility_lp(prepared)
        assert lp.a_matrix.shape == (4, 4)
        for i in range(4):
            column = np.concatenate([to_bloch(prepared.povm.elements[i]), [1.0]])
            assert np.allclose(lp.a_matrix[:, i], column, atol=1e-12)

    def test_original_weights_are_feasible(self, pentagon_povm):
        prepared = prepare_rank1(pentagon_povm)
        lp = build_feasibility_lp(prepared)
        assert np.max(np.abs(lp.a_matrix @ prepared.povm.weights - lp.b_vector)) <= 1e-9


class TestExtractStep:
    def test_extremal_input_terminates(self, trine_povm):
        prepared = prepare_rank1(trine_povm)
        lp = build_feasibility_lp(prepared)
        x, p, residual = extract_step(prepared.povm.weights, lp)
        assert p == 1.0
        assert np.array_equal(x, prepared.povm.weights)
        assert np.all(residual == 0.0)

    def test_pentagon_peel_matches_closed_form(self):
        # peel the trine on outcomes {0, 2, 3} from the uniform pentagon weights;
        # closed forms follow from the 72-degree geometry
        coeffs = np.full(5, 0.4)
        x = np.array([2.0 / ROOT5, 0.0, 1.0 - 1.0 / ROOT5, 1.0 - 1.0 / ROOT5, 0.0])
        p, residual = _peel(coeffs, x, DEFAULT_TOLERANCES)
        assert p == pytest.approx(1.0 / ROOT5, abs=1e-12)
        expected = np.array(
            [
                0.0,
                2.0 / (5.0 - ROOT5),
                (3.0 - ROOT5) / (5.0 - ROOT5),
                (3.0 - ROOT5) / (5.0 - ROOT5),
                2.0 / (5.0 - ROOT5),
            ]
        )
        assert residual == pytest.approx(expected, abs=1e-12)

    def test_support_shrinks_strictly(self, pentagon_povm):
        prepared = prepare_rank1(pentagon_povm)
        lp = build_feasibility_lp(prepared)
        coeffs = prepared.povm.weights.copy()
        while True:
            before = int(np.count_nonzero(coeffs > 1e-10))
            x, p, residual = extract_step(coeffs, lp)
            if p == 1.0:
                break
            after = int(np.count_nonzero(residual > 1e-10))
            assert after <= before - 1
            assert np.max(np.abs(lp.a_matrix @ residual - lp.b_vector)) <= 1e-8
            coeffs = residual


class TestDecompose:
    def test_bb84_golden(self, bb84_povm):
        result = decompose(bb84_povm)
        assert len(result.terms) == 2
        assert sorted(result.probabilities) == pytest.approx([0.5, 0.5], abs=1e-9)
        supports = sorted(tuple(sorted(t.povm.labels)) for t in result.terms)
        assert supports == [(0, 1), (2, 3)]

    def test_pentagon_golden(self, pentagon_povm):
        result = decompose(pentagon_povm)
        assert len(result.terms) == 3
        assert all(t.povm.n_outcomes == 3 for t in result.terms)
        want = sorted([1.0 / ROOT5, (1.0 - 1.0 / ROOT5) / 2.0, (1.0 - 1.0 / ROOT5) / 2.0])
        assert sorted(result.probabilities) == pytest.approx(want, abs=1e-8)

    def test_coin_split_golden(self, coin_split_povm):
        result = decompose(coin_split_povm)
        assert len(result.terms) == 1
        assert result.terms[0].probability == 1.0
        assert result.terms[0].povm.n_outcomes == 2
        assert result.relabel.targets == (0, 1, 1)
        grids = reconstruct(result)
        assert np.max(np.abs(grids - expected_grids(coin_split_povm))) <= 1e-9

    def test_probabilities_sum_to_one(self):
        rng = np.random.default_rng(101)
        for _ in range(10):
            povm = random_rank1_povm(2, int(rng.integers(2, 9)), rng)
            result = decompose(povm)
            assert abs(sum(result.probabilities) - 1.0) <= 1e-9
            assert all(0.0 < p <= 1.0 for p in result.probabilities)

    def test_reconstruction_oracle_random(self):
        rng = np.random.default_rng(202)
        for _ in range(10):
            d = int(rng.integers(2, 4))
            povm = random_rank1_povm(d, int(rng.integers(d, 9)), rng)
            result = decompose(povm)
            assert np.max(np.abs(reconstruct(result) - expected_grids(povm))) <= 1e-8

    def test_term_outcome_counts_within_bounds(self):
        rng = np.random.default_rng(303)
        for _ in range(10):
            d = int(rng.integers(2, 4))
            povm = random_rank1_povm(d, int(rng.integers(d, 11)), rng)
            result = decompose(povm)
            for term in result.terms:
                assert d <= term.povm.n_outcomes <= d * d

    def test_every_term_extremal(self):
        rng = np.random.default_rng(404)
        for _ in range(8):
            d = int(rng.integers(2, 4))
            povm = random_full_rank_povm(d, int(rng.integers(2, 5)), rng)
            result = decompose(povm)
            for term in result.terms:
                report = check_extremal(term.povm)
                assert report.reason is ExtremalityStatus.EXTREMAL

    def test_relabel_pushforward_matches_input(self):
        rng = np.random.default_rng(505)
        povm = random_full_rank_povm(3, 3, rng)
        result = decompose(povm)
        assert np.max(np.abs(reconstruct(result) - expected_grids(povm))) <= 1e-8


class TestCheckExtremal:
    def test_z_pair_extremal(self):
        report = check_extremal(validate_povm([KET0, KET1]))
        assert report.is_extremal
        assert report.reason is ExtremalityStatus.EXTREMAL

    def test_trine_extremal(self, trine_povm):
        report = check_extremal(trine_povm)
        assert report.is_extremal

    def test_pentagon_dependent_with_witness(self, pentagon_povm):
        report = check_extremal(pentagon_povm)
        assert not report.is_extremal
        assert report.reason is ExtremalityStatus.LINEARLY_DEPENDENT_ELEMENTS
        witness = report.witness
        assert witness is not None
        lp = lp_from_elements(pentagon_povm.elements, 2)
        assert np.max(np.abs(lp.a_matrix @ witness - lp.b_vector)) <= 1e-8
        assert np.min(witness) >= -1e-10
        assert np.count_nonzero(witness > 1e-10) < pentagon_povm.n_outcomes

    def test_full_rank_not_rank_one(self, coin_split_povm):
        report = check_extremal(coin_split_povm)
        assert not report.is_extremal
        assert report.reason is ExtremalityStatus.NOT_RANK_ONE

    def test_bb84_dependent(self, bb84_povm):
        report = check_extremal(bb84_povm)
        assert report.reason is ExtremalityStatus.LINEARLY_DEPENDENT_ELEMENTS


def sweep_has_separating_direction(vectors, steps=3600):
    """Planar oracle: scan directions exhaustively for an open half-space."""
    for k in range(steps):
        theta = 2.0 * math.pi * k / steps
        nu = np.array([math.cos(theta), math.sin(theta)])
        if all(float(v[:2] @ nu) < 0.0 for v in vectors):
            return True
    return False


class TestSeparatingVector:
    def test_antipodal_pair(self):
        v = np.array([0.3, -0.4, 0.2])
        assert separating_vector([v, -v]) is None

    def test_one_octant(self):
        vectors = np.array([[1.0, 0.2, 0.1], [0.5, 1.0, 0.3], [0.2, 0.4, 1.0]])
        nu = separating_vector(vectors)
        assert nu is not None
        assert np.all(vectors @ nu < -1e-9 * np.linalg.norm(vectors, axis=1))

    def test_trine_has_no_separating_direction(self):
        vectors = [to_bloch(e / np.trace(e).real) for e in trine_elements()]
        assert separating_vector(vectors) is None
        planar = [v[:2] for v in np.asarray(vectors)]  # z components are zero
        assert not sweep_has_separating_direction(planar)

    def test_sweep_oracle_agrees_on_planar_cases(self):
        rng = np.random.default_rng(606)
        for _ in range(20):
            n = int(rng.integers(2, 6))
            vectors = rng.standard_normal((n, 2))
            padded = np.hstack([vectors, np.zeros((n, 1))])
            found = separating_vector(padded) is not None
            assert found == sweep_has_separating_direction(vectors)

    def test_zero_vector_blocks_separation(self):
        assert separating_vector([np.zeros(3), np.array([1.0, 0.0, 0.0])]) is None


class TestStatisticalEquivalence:
    def test_pentagon_factors_recombine(self, pentagon_povm):
        # weighted recombination of the factor povms equals the input
        result = decompose(pentagon_povm)
        weights = np.zeros(pentagon_povm.n_outcomes)
        for term in result.terms:
            for w, label in zip(term.povm.weights, term.povm.labels):
                weights[label] += term.probability * w
        recombined = validate_povm(
            weights[:, None, None] * pentagon_povm.elements, labels=pentagon_povm.labels
        )
        assert povm_equal(recombined, pentagon_povm, 1e-9)
