"""Shared catalog fixtures and the randomized admissible-pair family."""

import math

import numpy as np
import pytest

from sturmosc import CoefficientPair, CurvatureProfile, add, constant, power


def euler_pair(mu, label=""):
    """v = 1 on [1, inf) with W = mu/t^2: the classical threshold family."""
    return CoefficientPair(constant(1.0), power(mu, -2.0), b_const=0.0,
                           t_start=1.0, validate=False,
                           label=label or f"euler(mu={mu:g})")


def moore_pair(mu):
    """v = t^2 with W = mu/t^2: product-test limit exactly mu."""
    return CoefficientPair(power(1.0, 2.0), power(mu, -2.0), b_const=0.0,
                           t_start=1.0, validate=False,
                           label=f"moore(mu={mu:g})")


def random_admissible_pair(rng):
    """One random catalog pair with certified W v^2 >= -B^2 and mixed-sign W.

    v = cv t^q and W = c1 t^s + c2.  The product W v^2 has a single interior
    minimum with the closed-form location t_min^s = -2q c2 / (c1 (s + 2q)),
    which certifies the constant B analytically.
    """
    cv = float(rng.uniform(0.5, 2.0))
    q = float(rng.choice([1.0, 1.5, 2.0, 3.0]))
    c1 = float(rng.uniform(0.2, 3.0))
    s = float(rng.choice([0.5, 1.0, 2.0]))
    c2 = float(rng.uniform(-2.0, 2.0))
    if c2 >= 0:
        b = 0.0
    else:
        t_min = (-2.0 * q * c2 / (c1 * (s + 2.0 * q))) ** (1.0 / s)
        g_min = (c1 * t_min ** s + c2) * (cv * t_min ** q) ** 2
        b = math.sqrt(max(0.0, -g_min))
    v = power(cv, q)
    w = add(power(c1, s), constant(c2))
    return CoefficientPair(v, w, b_const=b, label=f"rand(q={q:g},s={s:g})")


def random_curvature(rng):
    """K = c1 t^s + c2 with c1 >= 0, so inf K = c2 certifies B."""
    c1 = float(rng.uniform(0.0, 2.0))
    s = float(rng.choice([0.5, 1.0, 2.0]))
    c2 = float(rng.uniform(-1.5, 1.5))
    b = math.sqrt(max(0.0, -c2))
    k = add(power(c1, s), constant(c2))
    return CurvatureProfile(k, b_const=b, m=2)


@pytest.fixture
def rng():
    return np.random.default_rng(20240615)


@pytest.fixture
def unit_curvature():
    return CurvatureProfile(constant(1.0), b_const=0.0, m=2)


@pytest.fixture
def hyperbolic_curvature():
    return CurvatureProfile(constant(-1.0), b_const=1.0, m=2)


@pytest.fixture
def sinc_pair():
    """v = t^2, W = 1: the closed-form solution is sin(t)/t."""
    return CoefficientPair(power(1.0, 2.0), constant(1.0), b_const=0.0)
