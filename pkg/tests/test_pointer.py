import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from weakarrival.errors import GammaSingular, UndefinedConditioning
from weakarrival.pointer import (
    PointerWave,
    density,
    exact_mean_arrival,
    final_pointer_state,
    gamma_form,
    pointer_from_gamma,
    quadrature_mean,
    weak_norm_mean_arrival,
)
from weakarrival.weakvalue import Apparatus, abl_probabilities, weak_arrival


def make_app(theta, phi, epsilon=1.0, sigma=1.0):
    return Apparatus(theta=theta, phi=phi, epsilon=epsilon, sigma=sigma)


def gl_integrate(fn, lo, hi, points=1200):
    nodes, weights = np.polynomial.legendre.leggauss(points)
    y = 0.5 * (hi - lo) * nodes + 0.5 * (hi + lo)
    return 0.5 * (hi - lo) * float(np.dot(weights, fn(y)))


small_angles = st.floats(min_value=-1.5, max_value=1.5, allow_nan=False)
coefficients = st.complex_numbers(max_magnitude=3.0, allow_nan=False, allow_infinity=False)


def test_final_pointer_state_terms():
    w = final_pointer_state(make_app(0.0, 0.0, epsilon=2.0))
    (c0, y0), (c1, y1) = w.terms
    assert (c0, y0) == (1.0 + 0j, 0.0)
    assert c1 == 0.0 and y1 == 2.0

    w = final_pointer_state(make_app(math.pi / 4, math.pi / 4, epsilon=2.0))
    assert abs(w.terms[0][0] - 0.5) < 1e-12
    assert abs(w.terms[1][0] - 0.5) < 1e-12
    assert (w.terms[0][1], w.terms[1][1]) == (0.0, 2.0)

    w = final_pointer_state(make_app(math.pi / 2, 0.0))
    assert abs(w.terms[0][0]) < 1e-12 and abs(w.terms[1][0]) < 1e-12


def test_gamma_form_values():
    assert gamma_form(make_app(0.0, 0.0)).gamma == pytest.approx(1.0)
    g = gamma_form(make_app(math.pi / 8, math.pi / 8))
    assert g.gamma == pytest.approx(math.sqrt(2.0), rel=1e-12)
    assert g.a_bar == g.lam == 0.5
    with pytest.raises(GammaSingular):
        gamma_form(make_app(math.pi / 4, math.pi / 4))


@given(small_angles, small_angles)
def test_gamma_reconstruction_matches_direct_form(theta, phi):
    if abs(math.cos(theta + phi)) <= 1e-8:
        return
    app = make_app(theta, phi, epsilon=1.3, sigma=0.7)
    direct = final_pointer_state(app)
    rebuilt = pointer_from_gamma(gamma_form(app), app)
    for (c_a, y_a), (c_b, y_b) in zip(direct.terms, rebuilt.terms):
        assert abs(c_a - c_b) < 1e-12
        assert abs(y_a - y_b) < 1e-12


@pytest.mark.parametrize("epsilon, sigma", [(0.1, 1.0), (1.0, 1.0), (5.0, 0.3)])
def test_exact_mean_symmetric_case_is_midpoint(epsilon, sigma):
    mean, norm_sq = exact_mean_arrival(
        make_app(math.pi / 4, math.pi / 4, epsilon=epsilon, sigma=sigma)
    )
    assert mean == pytest.approx(epsilon / 2.0, rel=1e-12)
    assert 0.0 < norm_sq <= 1.0 + 1e-12


def test_exact_mean_recovers_weak_value_in_weak_limit():
    # at (pi/3, pi/6) the weak value is exactly eps/2
    app = make_app(math.pi / 3, math.pi / 6, epsilon=0.01, sigma=1.0)
    mean, _ = exact_mean_arrival(app)
    assert abs(mean / (app.epsilon / 2.0) - 1.0) < 1e-3


def test_exact_mean_strong_limit_is_ideal_measurement_mean():
    app = make_app(math.pi / 3, math.pi / 5, epsilon=40.0, sigma=1.0)
    mean, _ = exact_mean_arrival(app)
    a = math.cos(app.phi) * math.cos(app.theta)
    b = math.sin(app.phi) * math.sin(app.theta)
    assert mean == pytest.approx(app.epsilon * b * b / (a * a + b * b), rel=1e-12)
    # the disjoint-envelope weight equals the ideal-measurement V probability
    _, p_v = abl_probabilities(app.pre_state(), app.post_state())
    assert b * b / (a * a + b * b) == pytest.approx(p_v, abs=1e-12)


def test_weak_limit_convergence_is_monotone():
    ratios = [1.0, 0.3, 0.1, 0.03, 0.01]
    theta, phi = math.pi / 3, math.pi / 12
    target = weak_arrival(make_app(theta, phi)).value.real
    deviations = []
    for r in ratios:
        mean, _ = exact_mean_arrival(make_app(theta, phi, epsilon=r, sigma=1.0))
        deviations.append(abs(mean / (r * target) - 1.0))
    assert deviations == sorted(deviations, reverse=True)
    assert deviations[-1] < 1e-3


@given(small_angles, small_angles, st.floats(min_value=0.01, max_value=3.0))
def test_norm_sq_close_to_weak_limit_norm(theta, phi, ratio):
    app = make_app(theta, phi, epsilon=ratio, sigma=1.0)
    a = math.cos(phi) * math.cos(theta)
    b = math.sin(phi) * math.sin(theta)
    try:
        _, norm_sq = exact_mean_arrival(app)
    except UndefinedConditioning:
        return
    bound = 2.0 * abs(a * b) * ratio**2 / 4.0
    assert abs(norm_sq - math.cos(theta - phi) ** 2) <= bound + 1e-15


def test_quadrature_matches_closed_form_symmetric():
    app = make_app(math.pi / 4, math.pi / 4, epsilon=1.0, sigma=1.0)
    assert abs(quadrature_mean(app) - 0.5) < 1e-9 * (1.0 + 1.0)


def test_quadrature_matches_closed_form_at_zero_weight():
    app = make_app(0.0, math.pi / 3, epsilon=1.0, sigma=1.0)
    assert abs(quadrature_mean(app)) < 1e-9 * 2.0


def test_quadrature_exercises_interference_term():
    app = make_app(math.pi / 3, math.pi / 12, epsilon=1.0, sigma=1.0)
    mean, _ = exact_mean_arrival(app)
    assert abs(quadrature_mean(app) - mean) < 1e-9 * (app.epsilon + app.sigma)


def test_quadrature_matches_closed_form_random_parameters():
    rng = np.random.default_rng(7)
    done = 0
    while done < 50:
        theta, phi = rng.uniform(-math.pi, math.pi, size=2)
        ratio = rng.uniform(0.01, 5.0)
        app = make_app(theta, phi, epsilon=ratio, sigma=1.0)
        try:
            mean, norm_sq = exact_mean_arrival(app)
        except UndefinedConditioning:
            continue
        if norm_sq < 1e-4:
            continue
        done += 1
        assert abs(quadrature_mean(app) - mean) < 1e-9 * (app.epsilon + app.sigma)


def test_density_single_term_peak():
    for sigma, coeff in [(1.0, 1.0 + 0j), (0.5, 0.3 - 0.4j)]:
        w = PointerWave(terms=((coeff, 2.0),), sigma=sigma)
        peak = abs(coeff) ** 2 / math.sqrt(sigma**2 * math.pi)
        assert density(w, 2.0) == pytest.approx(peak, rel=1e-12)


def test_density_symmetric_about_midpoint():
    w = final_pointer_state(make_app(math.pi / 4, math.pi / 4, epsilon=1.0))
    x = np.linspace(0.0, 4.0, 50)
    assert np.allclose(w.density(0.5 + x), w.density(0.5 - x), rtol=1e-12, atol=1e-300)


def test_density_normalizes_to_closed_form_norm():
    app = make_app(1.1, 0.4, epsilon=1.7, sigma=0.9)
    w = final_pointer_state(app)
    lo, hi = w.window()
    mass = gl_integrate(w.density, lo, hi)
    assert abs(mass / w.norm_sq() - 1.0) < 1e-9


@settings(max_examples=50)
@given(
    st.lists(st.tuples(coefficients, st.floats(-3.0, 3.0)), min_size=1, max_size=3),
    st.floats(min_value=0.2, max_value=2.0),
)
def test_general_wave_norm_and_density_properties(terms, sigma):
    w = PointerWave(terms=tuple(terms), sigma=sigma)
    n2 = w.norm_sq()
    assert n2 >= -1e-12
    y = np.linspace(*w.window(), 201)
    assert np.all(w.density(y) >= 0.0)
    mass = gl_integrate(w.density, *w.window())
    assert abs(mass - n2) < 1e-9 * max(1.0, n2)


def test_cdf_derivative_matches_density():
    app = make_app(math.pi / 3, math.pi / 12, epsilon=1.0, sigma=1.0)
    w = final_pointer_state(app)
    n2 = w.norm_sq()
    h = 1e-5
    for y in np.linspace(-1.5, 2.5, 21):
        fd = (w.cdf(y + h) - w.cdf(y - h)) / (2.0 * h)
        assert fd == pytest.approx(float(w.density(y)) / n2, rel=1e-6, abs=1e-9)


def test_cdf_limits():
    w = final_pointer_state(make_app(0.7, 0.2, epsilon=2.0, sigma=1.0))
    assert float(w.cdf(-1e3)) == pytest.approx(0.0, abs=1e-12)
    assert float(w.cdf(1e3)) == pytest.approx(1.0, abs=1e-12)


@given(
    st.floats(min_value=0.05, max_value=1.5),
    st.floats(min_value=0.05, max_value=1.5),
    st.floats(min_value=0.05, max_value=4.0),
)
def test_mean_inside_hull_for_same_sign_coefficients(theta, phi, ratio):
    # both coefficients nonnegative in the first quadrant
    app = make_app(theta, phi, epsilon=ratio, sigma=1.0)
    mean, _ = exact_mean_arrival(app)
    assert -1e-12 <= mean <= app.epsilon + 1e-12


def test_mean_escapes_hull_for_opposite_sign_coefficients():
    app = make_app(3 * math.pi / 4 + 0.05, math.pi / 4, epsilon=0.05, sigma=1.0)
    a = math.cos(app.phi) * math.cos(app.theta)
    b = math.sin(app.phi) * math.sin(app.theta)
    assert a * b < 0.0
    mean, _ = exact_mean_arrival(app)
    assert mean < 0.0


def test_weak_norm_variant_identity_and_convergence():
    app = make_app(math.pi / 3, math.pi / 12, epsilon=1.0, sigma=1.0)
    mean, norm_sq = exact_mean_arrival(app)
    alt = weak_norm_mean_arrival(app)
    assert alt == pytest.approx(
        mean * norm_sq / math.cos(app.theta - app.phi) ** 2, rel=1e-12
    )
    weak_app = make_app(math.pi / 3, math.pi / 12, epsilon=1e-3, sigma=1.0)
    assert weak_norm_mean_arrival(weak_app) == pytest.approx(
        exact_mean_arrival(weak_app).mean, rel=1e-6
    )


def test_annihilated_state_raises():
    app = make_app(math.pi / 2, 0.0)
    with pytest.raises(UndefinedConditioning):
        exact_mean_arrival(app)
    with pytest.raises(UndefinedConditioning):
        quadrature_mean(app)


def test_pointer_wave_validation():
    with pytest.raises(ValueError):
        PointerWave(terms=((1.0 + 0j, 0.0),), sigma=0.0)
    with pytest.raises(ValueError):
        PointerWave(terms=(), sigma=1.0)
