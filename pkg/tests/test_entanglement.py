import math

import numpy as np
import pytest
from scipy.optimize import minimize

from qcorrelations.entanglement import closest_separable_state, is_ppt, negativity, product_lmo, ree
from qcorrelations.errors import NotConverged
from qcorrelations.families import (
    bell_state,
    classically_correlated,
    random_density,
    random_local_unitary,
    random_ppt_states,
    random_pure_product,
    werner_state,
)
from qcorrelations.linalg import binary_entropy
from qcorrelations.states import (
    apply_local_unitary,
    partial_trace,
    relative_entropy,
    swap_subsystems,
    validate,
    von_neumann_entropy,
)

from conftest import random_hermitian


def werner_pt_min_eigenvalue(gamma):
    return (1 - 3 * gamma) / 4


def qubit(theta, phi):
    return np.array([math.cos(theta / 2), np.exp(1j * phi) * math.sin(theta / 2)])


def grid_oracle(g):
    """max <a b|g|a b> on 2 x 2: 1-degree Bloch grid over a, exact top eigenvalue over b."""
    g4 = g.reshape(2, 2, 2, 2)

    def best_b(theta, phi):
        a = np.stack([np.cos(theta / 2), np.exp(1j * phi) * np.sin(theta / 2)], axis=-1)
        m_b = np.einsum("...a,ajcl,...c->...jl", a.conj(), g4, a)
        return np.linalg.eigvalsh(m_b)[..., -1]

    th, ph = np.meshgrid(np.radians(np.arange(0, 181)), np.radians(np.arange(0, 360)), indexing="ij")
    vals = best_b(th, ph)
    k = np.unravel_index(np.argmax(vals), vals.shape)
    res = minimize(lambda x: -best_b(x[0], x[1]), [th[k], ph[k]], method="Nelder-Mead",
                   options={"xatol": 1e-12, "fatol": 1e-14, "maxiter": 5000})
    return max(vals.max(), -res.fun)


def test_is_ppt_and_negativity_on_werner():
    assert werner_pt_min_eigenvalue(0.2) == pytest.approx(0.05 * 2)
    assert is_ppt(werner_state(0.2))
    assert not is_ppt(werner_state(0.5))
    assert negativity(bell_state()) == pytest.approx(1.0, abs=1e-12)
    assert negativity(werner_state(1 / 3)) == pytest.approx(0.0, abs=1e-12)
    assert negativity(validate(np.eye(4) / 4, (2, 2))) == 0.0
    for g in np.linspace(0, 1, 101):
        expected = max(0.0, (3 * g - 1) / 2)
        assert negativity(werner_state(g)) == pytest.approx(expected, abs=1e-12)


def test_product_states_are_ppt():
    for s in range(20):
        assert is_ppt(random_pure_product((2, 3), s))


def test_lmo_trivial_cases():
    assert product_lmo(np.eye(4), (2, 2)).value == pytest.approx(1.0)
    pair = product_lmo(np.diag([5.0, 1, 1, 1]), (2, 2))
    assert pair.value == pytest.approx(5.0)
    assert abs(pair.a[0]) == pytest.approx(1.0) and abs(pair.b[0]) == pytest.approx(1.0)


def test_lmo_matches_grid_oracle(rng):
    for s in range(10):
        g = random_hermitian(rng, 4)
        pair = product_lmo(g, (2, 2), seed=s)
        assert np.linalg.norm(pair.a) == pytest.approx(1.0, abs=1e-12)
        assert np.linalg.norm(pair.b) == pytest.approx(1.0, abs=1e-12)
        assert np.vdot(pair.vector, g @ pair.vector).real == pytest.approx(pair.value, abs=1e-10)
        assert pair.value == pytest.approx(grid_oracle(g), abs=1e-6)


def test_lmo_is_deterministic():
    g = random_hermitian(np.random.default_rng(3), 6)
    p1, p2 = product_lmo(g, (2, 3), seed=9), product_lmo(g, (2, 3), seed=9)
    np.testing.assert_array_equal(p1.vector, p2.vector)


@pytest.mark.parametrize("gamma", [0.0, 0.1, 0.2, 0.3, 1 / 3])
def test_ree_vanishes_below_ppt_threshold(gamma):
    assert ree(werner_state(gamma)).value <= 1e-6


def test_ree_bell_state():
    result = ree(bell_state())
    assert result.value == pytest.approx(1.0, abs=1e-4)
    assert relative_entropy(bell_state(), result.sigma_star) == pytest.approx(1.0, abs=1e-4)


def test_ree_werner_08_against_closed_form():
    result = ree(werner_state(0.8), tol=1e-8)
    assert result.converged and result.gap <= 1e-5
    closed = 1 - binary_entropy(0.85)
    assert closed == pytest.approx(0.3902, abs=1e-4)
    # certificate brackets the closed form
    assert result.lower_bound - 1e-12 <= closed <= result.value + 1e-12
    assert result.value == pytest.approx(closed, abs=1e-6)


def test_pure_states_reach_marginal_entropy():
    for s in range(10):
        rho = random_density((2, 2), 1, s)
        result = ree(rho, seed=s)
        entropy = von_neumann_entropy(partial_trace(rho, "B"))
        assert result.lower_bound <= entropy + 1e-9
        assert result.value == pytest.approx(entropy, abs=1e-6)


def test_closest_separable_state_examples():
    for rho in random_ppt_states(5, 100):
        sigma = closest_separable_state(rho)
        assert relative_entropy(rho, sigma) <= 1e-6
    assert relative_entropy(bell_state(), closest_separable_state(bell_state())) == pytest.approx(1.0, abs=1e-4)
    sigma = closest_separable_state(werner_state(0.8))
    assert is_ppt(sigma, tol=1e-8)
    assert np.abs(swap_subsystems(sigma).matrix - sigma.matrix).max() <= 1e-6
    np.testing.assert_allclose(partial_trace(sigma, "A").matrix, np.eye(2) / 2, atol=1e-6)
    np.testing.assert_allclose(partial_trace(sigma, "B").matrix, np.eye(2) / 2, atol=1e-6)


def test_ree_zero_iff_ppt_on_random_states():
    # weakly entangled draws have REE of order negativity^2, which can sit
    # below any fixed threshold; they must still be strictly positive
    for s in range(100):
        rho = random_density((2, 2), 4, s)
        result = ree(rho, seed=s)
        assert result.value >= 0 and result.gap >= 0
        if is_ppt(rho):
            assert result.value <= 1e-5
        else:
            assert result.value > 0
            if negativity(rho) > 1e-2:
                assert result.value > 1e-5


def test_result_invariants():
    for s in range(20):
        rho = random_density((2, 3), 6, s)
        result = ree(rho, seed=s)
        assert result.certified
        assert is_ppt(result.sigma_star, tol=1e-8)
        assert abs(np.sum(result.weights) - 1) < 1e-12
        rebuilt = (result.atoms.T * result.weights) @ result.atoms.conj()
        # the floor-weighted maximally mixed atoms are part of the decomposition
        np.testing.assert_allclose(rebuilt, result.sigma_star.matrix, atol=1e-7)
        # value never exceeds the distance to the product of marginals
        rho_a, rho_b = partial_trace(rho, "B"), partial_trace(rho, "A")
        prod = validate(np.kron(rho_a.matrix, rho_b.matrix), (2, 3))
        assert result.value <= relative_entropy(rho, prod) + 1e-12
        assert result.value <= relative_entropy(rho, validate(np.eye(6) / 6, (2, 3))) + 1e-12


def test_ree_monotone_on_werner_family():
    grid = np.linspace(0.34, 1.0, 34)
    values = [ree(werner_state(g)).value for g in grid]
    assert all(b >= a - 1e-5 for a, b in zip(values, values[1:]))


def test_ree_local_unitary_invariance():
    for s in range(50):
        rho = random_density((2, 2), 4, s)
        u_a, u_b = random_local_unitary((2, 2), s + 500)
        a = ree(rho, seed=s).value
        b = ree(apply_local_unitary(rho, u_a, u_b), seed=s + 1).value
        assert abs(a - b) <= 2e-4


def test_certificate_soundness():
    for s in range(30):
        rho = random_density((2, 2), 4, s)
        first = ree(rho, seed=s)
        second = ree(rho, seed=s + 7, tol=1e-8)
        assert abs(relative_entropy(rho, first.sigma_star) - first.value) <= 1e-9
        assert first.lower_bound <= second.value + 1e-12
        assert second.lower_bound <= first.value + 1e-12


def test_negativity_and_ree_vanish_together_on_werner_grid():
    for g in np.round(np.arange(0, 1.0001, 0.01), 2):
        rho = werner_state(g)
        assert (negativity(rho) > 1e-12) == (ree(rho).value > 1e-6), g


def test_not_converged_carries_result():
    with pytest.raises(NotConverged) as info:
        ree(werner_state(0.8), tol=0.0, max_iters=1)
    result = info.value.result
    assert not result.converged
    assert result.value >= 0.39 - 1e-6
    relaxed = ree(werner_state(0.8), tol=0.0, max_iters=1, strict=False)
    assert relaxed.iterations == 1


def test_classically_correlated_is_separable():
    assert ree(classically_correlated()).value <= 1e-6


def test_stalls_end_early():
    rho = random_ppt_states(1, 3)[0]
    result = ree(rho, tol=1e-14, strict=False)
    assert result.iterations < 100
    assert result.value <= 1e-12


def test_larger_dims_are_upper_bounds():
    rho = random_density((3, 3), 9, 4)
    result = ree(rho, tol=1e-4)
    assert not result.certified
    assert result.value <= relative_entropy(rho, validate(np.eye(9) / 9, (3, 3)))
