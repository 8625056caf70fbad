import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from glmscreen import (
    BoundaryError,
    SaturationError,
    SupportError,
    get_family,
)

FAMILIES = ("gaussian", "bernoulli", "poisson")


@pytest.mark.parametrize(
    "family, theta, expected",
    [
        ("gaussian", 2.0, 2.0),
        ("bernoulli", 0.0, math.log(2.0)),
        ("poisson", 0.0, 1.0),
    ],
)
def test_cumulant_examples(family, theta, expected):
    assert get_family(family).cumulant(theta) == pytest.approx(expected, abs=1e-12)


@pytest.mark.parametrize(
    "family, theta, expected",
    [
        ("gaussian", 3.5, 3.5),
        ("bernoulli", 0.0, 0.5),
        ("poisson", 1.0, math.e),
    ],
)
def test_mean_examples(family, theta, expected):
    assert get_family(family).mean(theta) == pytest.approx(expected, abs=1e-12)


@pytest.mark.parametrize(
    "family, theta, expected",
    [
        ("gaussian", -7.0, 1.0),
        ("bernoulli", 0.0, 0.25),
        ("poisson", 0.0, 1.0),
    ],
)
def test_variance_examples(family, theta, expected):
    assert get_family(family).variance(theta) == pytest.approx(expected, abs=1e-12)


@pytest.mark.parametrize(
    "family, mu, expected",
    [
        ("bernoulli", 0.5, 0.0),
        ("gaussian", -2.0, -2.0),
        ("poisson", 1.0, 0.0),
    ],
)
def test_link_examples(family, mu, expected):
    assert get_family(family).link(mu) == pytest.approx(expected, abs=1e-12)


@pytest.mark.parametrize(
    "family, theta, y, expected",
    [
        ("gaussian", 0.0, 5.0, 0.0),
        ("bernoulli", 0.0, 1.0, math.log(2.0)),
        ("poisson", 0.0, 2.0, 1.0),
    ],
)
def test_neg_loglik_examples(family, theta, y, expected):
    assert get_family(family).neg_loglik(theta, y) == pytest.approx(
        expected, abs=1e-12
    )


@pytest.mark.parametrize("family", FAMILIES)
def test_mean_derivative_matches_variance(family):
    # central difference of b' approximates b'' to 1e-6 relative on [-5, 5]
    fam = get_family(family)
    h = 1e-5
    for theta in np.linspace(-5.0, 5.0, 41):
        approx = (fam.mean(theta + h) - fam.mean(theta - h)) / (2.0 * h)
        exact = fam.variance(theta)
        assert abs(approx - exact) <= 1e-6 * abs(exact)


@pytest.mark.parametrize(
    "family, mus",
    [
        ("gaussian", np.linspace(-40.0, 40.0, 33)),
        ("bernoulli", np.linspace(1e-9, 1.0 - 1e-9, 33)),
        ("poisson", np.geomspace(1e-8, 1e8, 33)),
    ],
)
def test_link_is_two_sided_inverse(family, mus):
    fam = get_family(family)
    for mu in mus:
        theta = fam.link(mu)
        assert abs(fam.mean(theta) - mu) <= 1e-12 * max(1.0, abs(mu))
        if abs(theta) <= 12.0:  # the theta direction degrades near saturation
            assert abs(fam.link(fam.mean(theta)) - theta) <= 1e-9 * max(1.0, abs(theta))


@given(
    theta1=st.floats(-30.0, 30.0),
    theta2=st.floats(-30.0, 30.0),
    t=st.floats(1e-6, 1.0 - 1e-6),
    draw=st.integers(0, 5),
)
def test_neg_loglik_convex_in_theta(theta1, theta2, t, draw):
    responses = {
        "gaussian": [-2.5, 0.0, 1.3],
        "bernoulli": [0.0, 1.0],
        "poisson": [0.0, 1.0, 2.0, 7.0],
    }
    for family in FAMILIES:
        fam = get_family(family)
        y = responses[family][draw % len(responses[family])]
        mid = fam.neg_loglik(t * theta1 + (1.0 - t) * theta2, y)
        chord = t * fam.neg_loglik(theta1, y) + (1.0 - t) * fam.neg_loglik(theta2, y)
        assert mid <= chord + 1e-12 + 1e-12 * abs(chord)


def test_bernoulli_cumulant_is_overflow_safe():
    fam = get_family("bernoulli")
    assert fam.cumulant(1000.0) == 1000.0
    assert fam.cumulant(-1000.0) == 0.0
    assert np.isfinite(fam.cumulant(np.array([-750.0, 750.0]))).all()


def test_poisson_saturation():
    fam = get_family("poisson")
    assert fam.cumulant(700.0) > 0
    with pytest.raises(SaturationError):
        fam.cumulant(701.0)
    with pytest.raises(SaturationError):
        fam.mean(800.0)
    with pytest.raises(SaturationError):
        fam.variance(np.array([0.0, 1000.0]))


@pytest.mark.parametrize(
    "family, mu",
    [
        ("bernoulli", 0.0),
        ("bernoulli", 1.0),
        ("bernoulli", -0.2),
        ("poisson", 0.0),
        ("poisson", -1.0),
    ],
)
def test_link_boundary_errors(family, mu):
    with pytest.raises(BoundaryError):
        get_family(family).link(mu)


@pytest.mark.parametrize(
    "family, y",
    [
        ("bernoulli", 2.0),
        ("bernoulli", 0.5),
        ("poisson", -1.0),
        ("poisson", 1.5),
        ("gaussian", np.nan),
    ],
)
def test_response_support_errors(family, y):
    with pytest.raises(SupportError):
        get_family(family).neg_loglik(0.0, y)


def test_nonfinite_theta_rejected():
    with pytest.raises(ValueError):
        get_family("gaussian").cumulant(np.inf)


def test_unknown_family_token():
    with pytest.raises(ValueError, match="unknown family"):
        get_family("gamma")


def test_family_resolution_round_trip():
    fam = get_family("bernoulli")
    assert get_family(fam) is fam
    assert get_family("Bernoulli") is fam


@pytest.mark.parametrize("family", FAMILIES)
def test_sampling_matches_mean(family):
    fam = get_family(family)
    rng = np.random.default_rng(3)
    theta = np.full(20000, 0.3)
    draws = fam.sample(theta, rng)
    fam.validate_response(draws)
    assert draws.mean() == pytest.approx(fam.mean(0.3), abs=0.05)
