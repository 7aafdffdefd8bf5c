import math

import numpy as np
import pytest

from conftest import B211_LAMBDA, GOLDEN, random_potential, random_spec
from src.errors import InadmissibleWord, InvalidModel, NonPrimitive, NotNormalized
from src.spectral import (
    MarkovMeasure,
    convergence_report,
    eigen_measure,
    eigen_measure_cylinder,
    gibbs_measure,
    gibbs_of,
    parry_measure,
    product_weights,
    rpf_solve,
    spectral_gap,
    stationary_distribution,
)
from src.symbolic import CylinderFunction, CylinderPotential, SubshiftSpec, encode_word, full_shift, word_table
from src.transfer import TransferOperator, apply, dual_apply, normalize


# ==========================================
# Perron eigendata
# ==========================================
def test_full_shift_zero_potential(full2):
    spectral = rpf_solve(TransferOperator.from_potential(CylinderPotential.constant(full2, 0.0)))
    assert spectral.lambda_ == pytest.approx(2.0, rel=1e-12)
    np.testing.assert_allclose(spectral.nu.weights, [0.5, 0.5], atol=1e-12)
    np.testing.assert_allclose(spectral.phi.values, [1.0, 1.0], atol=1e-12)


@pytest.mark.parametrize("d, c", [(2, 0.7), (3, -1.5), (4, 2.0)])
def test_constant_potential_scales_lambda(d, c):
    spectral = rpf_solve(TransferOperator.from_potential(CylinderPotential.constant(full_shift(d), c)))
    assert spectral.lambda_ == pytest.approx(d * math.exp(c), rel=1e-12)
    assert spectral.log_lambda == pytest.approx(math.log(d) + c, abs=1e-12)


def test_b211_lambda(b211):
    spectral = rpf_solve(TransferOperator.from_potential(b211))
    assert spectral.lambda_ == pytest.approx(B211_LAMBDA, rel=1e-12)


def test_golden_mean_lambda(golden):
    spectral = rpf_solve(TransferOperator.from_potential(CylinderPotential.constant(golden, 0.0)))
    assert spectral.lambda_ == pytest.approx(GOLDEN, rel=1e-12)


def test_eigenpairs_on_random_systems(rng):
    for _ in range(200):
        spec = random_spec(rng, int(rng.integers(2, 6)))
        op = TransferOperator.from_potential(random_potential(rng, spec, 2))
        spectral = rpf_solve(op)
        assert spectral.residual_phi < 1e-10
        assert spectral.residual_nu < 1e-10
        assert np.all(spectral.phi.values > 0)
        assert spectral.nu.total == pytest.approx(1.0, abs=1e-12)
        assert spectral.nu.integrate(spectral.phi) == pytest.approx(1.0, abs=1e-12)
        # L phi = lambda phi and L* nu = lambda nu
        assert apply(op, spectral.phi).allclose(spectral.phi * spectral.lambda_, rtol=1e-10, atol=0)
        np.testing.assert_allclose(dual_apply(op, spectral.nu).weights, spectral.lambda_ * spectral.nu.weights, rtol=1e-10)


def test_shift_invariance_of_eigenvectors(b211):
    base = rpf_solve(TransferOperator.from_potential(b211))
    shifted = rpf_solve(TransferOperator.from_potential(b211.shifted(3.25)))
    assert shifted.log_lambda == pytest.approx(base.log_lambda + 3.25, abs=1e-12)
    np.testing.assert_allclose(shifted.nu.weights, base.nu.weights, atol=1e-12)
    np.testing.assert_allclose(shifted.phi.values, base.phi.values, atol=1e-12)


def test_huge_potential_does_not_overflow(b211):
    spectral = rpf_solve(TransferOperator.from_potential(b211.shifted(800.0)))
    assert spectral.log_lambda == pytest.approx(800.0 + math.log(B211_LAMBDA), abs=1e-10)
    assert math.isinf(spectral.lambda_)


def test_non_primitive_is_rejected():
    flip = SubshiftSpec(2, ((0, 1), (1, 0)))
    with pytest.raises(NonPrimitive):
        rpf_solve(TransferOperator.from_potential(CylinderPotential.constant(flip, 0.0)))


def test_rejects_nonpositive_tol(b211):
    with pytest.raises(ValueError):
        rpf_solve(TransferOperator.from_potential(b211), tol=0.0)


def test_recoding_matches_a_depth_two_potential(golden, rng):
    shallow = random_potential(rng, golden, 2)
    deep = CylinderPotential(shallow.log_weights.extend(3))
    assert rpf_solve(TransferOperator.from_potential(deep)).log_lambda == pytest.approx(
        rpf_solve(TransferOperator.from_potential(shallow)).log_lambda, abs=1e-12
    )


# ==========================================
# Spectral gap
# ==========================================
def test_gap_of_full_shift_is_zero(full2):
    assert spectral_gap(TransferOperator.from_potential(CylinderPotential.constant(full2, 0.0))) == pytest.approx(0.0, abs=1e-12)


def test_gap_of_golden_mean(golden):
    gap = spectral_gap(TransferOperator.from_potential(CylinderPotential.constant(golden, 0.0)))
    assert gap == pytest.approx(GOLDEN ** -2, rel=1e-10)


def test_gap_of_single_symbol():
    spec = SubshiftSpec(1, ((1,),))
    assert spectral_gap(TransferOperator.from_potential(CylinderPotential.constant(spec, 0.0))) == 0.0


def test_gap_is_below_one_on_random_systems(rng):
    for _ in range(10):
        spec = random_spec(rng, int(rng.integers(2, 6)))
        gap = spectral_gap(TransferOperator.from_potential(random_potential(rng, spec, 2)))
        assert 0.0 <= gap < 1.0


# ==========================================
# Markov, Gibbs and eigen measures
# ==========================================
def test_stationary_distribution():
    P = np.array([[0.9, 0.1], [0.5, 0.5]])
    p = stationary_distribution(P)
    np.testing.assert_allclose(p, [5.0 / 6.0, 1.0 / 6.0], atol=1e-12)


def test_markov_measure_validation(golden):
    with pytest.raises(InvalidModel):
        MarkovMeasure(golden, [0.5, 0.5], [[0.5, 0.5], [1.0, 0.0]])  # not stationary
    with pytest.raises(InvalidModel):
        MarkovMeasure.from_transition(golden, [[0.5, 0.5], [0.5, 0.5]])  # forbidden 1 -> 1
    with pytest.raises(InvalidModel):
        MarkovMeasure.from_transition(golden, [[0.5, 0.6], [1.0, 0.0]])


def test_markov_tolerance_bounds_row_defects(golden):
    loose = [[0.5, 0.5 + 1e-10], [1.0, 0.0]]
    assert MarkovMeasure.from_transition(golden, loose).tol == 1e-9
    with pytest.raises(InvalidModel):
        MarkovMeasure.from_transition(golden, loose, tol=1e-12)
    with pytest.raises(InvalidModel):
        MarkovMeasure.from_transition(golden, [[0.5, 0.5 + 1e-6], [1.0, 0.0]])


def test_markov_cylinder_weights(golden):
    mu = MarkovMeasure.from_transition(golden, [[0.5, 0.5], [1.0, 0.0]])
    np.testing.assert_allclose(mu.p, [2.0 / 3.0, 1.0 / 3.0], atol=1e-12)
    assert mu.cylinder_weight((0, 1, 0)) == pytest.approx(2.0 / 3.0 * 0.5)
    with pytest.raises(InadmissibleWord):
        mu.cylinder_weight((1, 1))
    measure = mu.to_measure(4)
    assert measure.total == pytest.approx(1.0)
    assert mu.to_measure(3).is_consistent_with(measure)


def test_product_weights_match_loops(golden, rng):
    initial, transfer, terminal = rng.random(2), rng.random((2, 2)), rng.random(2)
    weights = product_weights(golden, 4, initial, transfer, terminal)
    for word, weight in zip(word_table(golden, 4).words, weights):
        expected = initial[word[0]] * terminal[word[-1]]
        for a, b in zip(word, word[1:]):
            expected *= transfer[a, b]
        assert weight == pytest.approx(expected)


def test_parry_measure_on_golden_mean(golden):
    mu = parry_measure(golden)
    np.testing.assert_allclose(mu.P, [[1 / GOLDEN, GOLDEN ** -2], [1.0, 0.0]], atol=1e-12)
    np.testing.assert_allclose(mu.p, [GOLDEN ** 2 / (GOLDEN ** 2 + 1), 1 / (GOLDEN ** 2 + 1)], atol=1e-12)


def test_gibbs_measure_is_invariant(rng):
    for _ in range(10):
        spec = random_spec(rng, int(rng.integers(2, 5)))
        op = TransferOperator.from_potential(random_potential(rng, spec, 2))
        mu = gibbs_measure(rpf_solve(op), op)
        np.testing.assert_allclose(mu.P.sum(axis=1), 1.0, atol=1e-12)
        np.testing.assert_allclose(mu.p @ mu.P, mu.p, atol=1e-10)


def test_gibbs_of_deep_potential_reads_original_words(golden, rng):
    mu = gibbs_of(random_potential(rng, golden, 3))
    assert mu.spec.d == 3
    three = mu.original_measure(3)
    assert three.total == pytest.approx(1.0, abs=1e-12)
    assert mu.original_measure(2).is_consistent_with(three, tol=1e-12)
    with pytest.raises(InadmissibleWord):
        mu.original_cylinder_weight((1, 1, 0))


def test_eigen_measure_cylinders(full2):
    op = TransferOperator.from_potential(CylinderPotential.constant(full2, 0.0))
    spectral = rpf_solve(op)
    assert eigen_measure_cylinder(spectral, op, (0, 1)) == pytest.approx(0.25, abs=1e-12)
    assert eigen_measure_cylinder(spectral, op, (1, 1, 0)) == pytest.approx(0.125, abs=1e-12)


def test_eigen_measure_is_consistent(golden, rng):
    op = TransferOperator.from_potential(random_potential(rng, golden, 2))
    spectral = rpf_solve(op)
    deep = eigen_measure(spectral, op, 5)
    assert deep.total == pytest.approx(1.0, abs=1e-12)
    for depth in (1, 2, 3, 4):
        assert eigen_measure(spectral, op, depth).is_consistent_with(deep, tol=1e-12)
    for word in word_table(golden, 3).words:
        assert deep.weight(word) == pytest.approx(eigen_measure_cylinder(spectral, op, word), abs=1e-12)
    np.testing.assert_allclose(eigen_measure(spectral, op, 1).weights, spectral.nu.weights, atol=1e-12)


# ==========================================
# Convergence of normalized iterates
# ==========================================
def _normalized(pot):
    op = TransferOperator.from_potential(pot)
    return normalize(op, rpf_solve(op))


def test_constant_function_has_no_error(golden, rng):
    op = _normalized(random_potential(rng, golden, 2))
    report = convergence_report(op, CylinderFunction.constant(golden, 1.0), 10)
    assert report.mean == pytest.approx(1.0)
    assert max(report.errors) < 1e-10
    assert report.bound_holds


def test_full_shift_mixes_in_one_step(full2):
    op = _normalized(CylinderPotential.constant(full2, 0.0))
    report = convergence_report(op, CylinderFunction.indicator(full2, (0,)), 5)
    assert report.mean == pytest.approx(0.5)
    assert report.errors[0] == pytest.approx(0.5)
    assert report.errors[1] == pytest.approx(0.0, abs=1e-14)


def test_golden_mean_rate_matches_gap(golden):
    op = _normalized(CylinderPotential.constant(golden, 0.0))
    report = convergence_report(op, CylinderFunction.indicator(golden, (0,)), 20)
    assert report.gap == pytest.approx(GOLDEN ** -2, rel=1e-9)
    assert report.empirical_rate == pytest.approx(GOLDEN ** -2, rel=1e-6)
    assert report.bound_holds
    assert np.isfinite(report.constant)
    assert report.to_dict()["errors"] == report.errors


def test_deeper_functions_decay_after_the_window(golden, rng):
    op = _normalized(CylinderPotential.constant(golden, 0.0))
    a = CylinderFunction(golden, 3, rng.normal(size=5))
    report = convergence_report(op, a, 25)
    assert report.depth == 3
    assert report.bound_holds
    assert report.errors[-1] < 1e-6


def test_convergence_requires_normalized_operator(b211, full2):
    with pytest.raises(NotNormalized):
        convergence_report(TransferOperator.from_potential(b211), CylinderFunction.constant(full2, 1.0), 3)


def test_empirical_rate_is_bounded_by_the_gap(rng):
    checked = 0
    while checked < 20:
        spec = random_spec(rng, int(rng.integers(2, 4)))
        op = _normalized(random_potential(rng, spec, 2))
        if not 0.0 < spectral_gap(op) < 0.9:
            continue
        report = convergence_report(op, CylinderFunction.indicator(spec, (0,)), 40)
        assert report.empirical_rate <= report.gap + 0.05
        assert report.errors[-1] < 1e-1
        checked += 1


# ==========================================
# Recoding against a direct partition function
# ==========================================
def _log_lambda_by_paths(pot, steps=5000):
    """Z_n over n-words with a depth-3 potential, state = last two symbols"""
    pairs = word_table(pot.spec, 2).words
    index = {pair: i for i, pair in enumerate(pairs)}
    weights = {word: np.exp(value) for word, value in zip(pot.log_weights.words, pot.log_weights.values)}
    v = np.ones(len(pairs))
    log_ratio = 0.0
    for _ in range(steps):
        nxt = np.zeros_like(v)
        for (a, b, c), w in weights.items():
            nxt[index[(b, c)]] += v[index[(a, b)]] * w
        log_ratio = math.log(nxt.sum() / v.sum())
        v = nxt / nxt.sum()
    return log_ratio


def test_recoded_pressure_matches_path_counting(golden, rng):
    for _ in range(5):
        pot = random_potential(rng, golden, 3)
        assert rpf_solve(TransferOperator.from_potential(pot)).log_lambda == pytest.approx(_log_lambda_by_paths(pot), abs=1e-9)


def test_recoded_gibbs_measure_is_shift_invariant(golden, rng):
    mu = gibbs_of(random_potential(rng, golden, 3))
    three = mu.original_measure(3)
    four = mu.original_measure(4)
    # mu[w] = sum over a of mu[a w]
    for word in three.words:
        preimages = sum(four.weight((a,) + word) for a in range(golden.d) if golden.allows(a, word[0]))
        assert preimages == pytest.approx(three.weight(word), abs=1e-12)


def _block_chain_oracle(spec, fn):
    """Dense eigendata of the 2-block chain built straight from a depth-3 function"""
    blocks = [(x, y) for x in range(spec.d) for y in range(spec.d) if spec.allows(x, y)]
    index = {block: i for i, block in enumerate(blocks)}
    M = np.zeros((len(blocks), len(blocks)))
    for (x, y) in blocks:
        for z in range(spec.d):
            if spec.allows(y, z):
                M[index[(x, y)], index[(y, z)]] = math.exp(fn((x, y, z)))
    values, right = np.linalg.eig(M)
    top = int(np.argmax(values.real))
    lam = float(values[top].real)
    values_t, left = np.linalg.eig(M.T)
    u = np.abs(right[:, top].real)
    v = np.abs(left[:, int(np.argmax(values_t.real))].real)
    return index, M, lam, u, v


@pytest.mark.parametrize("d", [2, 3])
def test_depth_three_gibbs_weights_match_a_brute_force_chain(full2, golden, rng, d):
    specs = [full2, golden] + [random_spec(rng, d) for _ in range(4)]
    for spec in specs:
        coeffs = rng.normal(size=3)
        offset = rng.uniform(-1.0, 1.0)
        fn = lambda w: 2.0 * math.tanh(float(coeffs @ np.asarray(w)) + offset)
        pot = CylinderPotential(CylinderFunction.from_function(spec, 3, fn))
        mu = gibbs_of(pot)
        index, M, lam, u, v = _block_chain_oracle(spec, fn)
        assert mu.spectral.lambda_ == pytest.approx(lam, rel=1e-10)

        for n in (2, 3, 4):
            measure = mu.original_measure(n)
            assert measure.is_probability(tol=1e-11)
            for word in measure.words:
                path = [index[word[t:t + 2]] for t in range(n - 1)]
                product = np.prod([M[a, b] for a, b in zip(path, path[1:])]) if n > 2 else 1.0
                # mu[w] = v(b_0) prod M u(b_last) / (lambda^(n-2) <v, u>)
                expected = v[path[0]] * product * u[path[-1]] / (lam ** (n - 2) * float(v @ u))
                assert measure.weight(word) == pytest.approx(expected, rel=1e-9, abs=1e-13)
                # nu[w] = prod M u(b_last) / (lambda^(n-2) sum u)
                nu = eigen_measure_cylinder(mu.spectral, mu.operator, encode_word(spec, 3, word))
                assert nu == pytest.approx(product * u[path[-1]] / (lam ** (n - 2) * u.sum()), rel=1e-9, abs=1e-13)
