"""Minimax polynomials and capacity ladders against geometry oracles.

Independent checks: on a disc the minimizer is the centered monomial with
norm r^n; the degree-1 problem is the minimum enclosing circle (solved here
by brute force over all pair/triple candidate circles); capacity of a disc
is its radius and scales linearly under affine maps.
"""

import itertools
import math
import os

import numpy as np
import pytest

from landaucap.errors import NonConvergenceError
from landaucap.region import Annulus, Disc, Polygon, affine, boundary_points, contains, convex_hull, dilate
from landaucap.chebyshev import (
    CapacityEstimate,
    chebyshev_polynomial,
    capacity_estimate,
    monic_values,
)

UNIT_SQUARE = Polygon((0j, 1 + 0j, 1 + 1j, 1j))
SQUARE_CAPACITY = 0.5901702995080481  # Gamma(1/4)^2 / (4 pi^(3/2)), side 1


def enclosing_radius(points, center):
    return max(abs(p - center) for p in points)


def min_enclosing_circle(points):
    """Smallest circle containing all points, brute force over candidates."""
    best = (float("inf"), 0j)
    for a, b in itertools.combinations(points, 2):
        c = (a + b) / 2
        r = enclosing_radius(points, c)
        if r < best[0]:
            best = (r, c)
    for a, b, c in itertools.combinations(points, 3):
        d = 2 * ((a.real - c.real) * (b.imag - c.imag) - (b.real - c.real) * (a.imag - c.imag))
        if abs(d) < 1e-14:
            continue
        ux = ((abs(a) ** 2 - abs(c) ** 2) * (b.imag - c.imag) - (abs(b) ** 2 - abs(c) ** 2) * (a.imag - c.imag)) / d
        uy = ((abs(b) ** 2 - abs(c) ** 2) * (a.real - c.real) - (abs(a) ** 2 - abs(c) ** 2) * (b.real - c.real)) / d
        cc = complex(ux, uy)
        r = enclosing_radius(points, cc)
        if r < best[0]:
            best = (r, cc)
    return best[1], best[0]


# ---------------------------------------------------------------- minimizers

def test_disc_minimizer_is_centered_monomial():
    a, r, n = 1 + 0.5j, 1.5, 8
    res = chebyshev_polynomial(Disc(a, r), n)
    assert res.converged
    assert math.isclose(math.exp(res.log_sup_norm / n), r, rel_tol=1e-12)
    for k in range(n):
        exact = math.comb(n, k) * (-a) ** (n - k)
        assert abs(res.coeffs[k] - exact) < 1e-10 * (abs(a) + r) ** n


def test_disc_norm_is_local_minimum():
    # perturbing any coefficient of (z-a)^n must not decrease the sup norm
    a, r, n = 0.4 - 0.2j, 1.2, 5
    zs = a + r * np.exp(2j * np.pi * np.arange(4096) / 4096)
    base = [math.comb(n, k) * (-a) ** (n - k) for k in range(n)]
    sup0 = np.abs(monic_values(base, zs)).max()
    assert math.isclose(sup0, r**n, rel_tol=1e-12)
    for k in range(n):
        for eps in (1e-3, -1e-3, 1e-3j, -1e-3j):
            trial = list(base)
            trial[k] += eps
            assert np.abs(monic_values(trial, zs)).max() >= sup0 * (1 - 1e-12)


def test_unit_disc_cubic_norm_is_one():
    res = chebyshev_polynomial(Disc(0j, 1.0), 3)
    assert abs(res.log_sup_norm) < 1e-12


def test_degree_one_is_min_enclosing_circle():
    region = Polygon((0j, 2 + 0j, 2.5 + 1.2j, 0.8 + 1.9j))
    m = 48
    res = chebyshev_polynomial(region, 1, m=m, tol=1e-4)
    samples = [complex(z) for z in boundary_points(region, m)]
    center, radius = min_enclosing_circle(samples)
    got_center = -res.coeffs[0]
    got_norm = math.exp(res.log_sup_norm)
    assert abs(got_norm - radius) <= 3 * res.solver_tolerance * radius
    assert abs(got_center - center) <= 0.05 * radius


def test_lawson_reports_iteration_budget():
    res = chebyshev_polynomial(UNIT_SQUARE, 16, tol=1e-9)
    assert not res.converged
    assert res.iterations == 500


def test_solver_validation():
    with pytest.raises(ValueError):
        chebyshev_polynomial(UNIT_SQUARE, 0)
    with pytest.raises(ValueError):
        chebyshev_polynomial(UNIT_SQUARE, 4, m=16)
    with pytest.raises(ValueError):
        chebyshev_polynomial(UNIT_SQUARE, 4, tol=0.5)
    with pytest.raises(ValueError):
        chebyshev_polynomial(UNIT_SQUARE, 4, tol=0.0)


def test_zeros_of_minimizer_in_hull():
    hull = dilate(convex_hull(UNIT_SQUARE), 1e-3)
    for n in (4, 8, 16):
        res = chebyshev_polynomial(UNIT_SQUARE, n)
        roots = np.roots([1.0] + list(res.coeffs[::-1]))
        for rt in roots:
            assert contains(hull, complex(rt))
    hull_d = dilate(convex_hull(Disc(0.5j, 1.0)), 1e-3)
    res = chebyshev_polynomial(Disc(0.5j, 1.0), 8)
    for rt in np.roots([1.0] + list(res.coeffs[::-1])):
        assert contains(hull_d, complex(rt))


# ------------------------------------------------------------------ capacity

def test_disc_capacity_two_percent():
    est = capacity_estimate(Disc(1 + 0.5j, 1.5))
    assert abs(est.extrapolated - 1.5) / 1.5 < 0.02


def test_square_capacity_ten_percent():
    est = capacity_estimate(UNIT_SQUARE)
    assert all(est.converged)
    assert 0.9 * SQUARE_CAPACITY < est.extrapolated < 1.1 * SQUARE_CAPACITY


def test_annulus_matches_disc():
    hole = capacity_estimate(Annulus(0j, 0.5, 1.0))
    full = capacity_estimate(Disc(0j, 1.0))
    assert abs(hole.extrapolated - full.extrapolated) < 0.005


def test_affine_scaling_one_percent():
    base = capacity_estimate(UNIT_SQUARE)
    scaled = capacity_estimate(affine(UNIT_SQUARE, 2.0, 1 + 1j))
    assert abs(scaled.extrapolated / base.extrapolated - 2) < 0.02
    rotated = capacity_estimate(affine(UNIT_SQUARE, 1 + 1j, 0j))
    assert abs(rotated.extrapolated / base.extrapolated - math.sqrt(2)) < 0.02 * math.sqrt(2)


def test_translation_invariance():
    base = capacity_estimate(UNIT_SQUARE)
    moved = capacity_estimate(affine(UNIT_SQUARE, 1.0, 5 - 3j))
    assert abs(moved.extrapolated - base.extrapolated) < 0.01 * base.extrapolated


def test_dilation_decreases_to_base():
    base = capacity_estimate(UNIT_SQUARE).extrapolated
    vals = [capacity_estimate(dilate(UNIT_SQUARE, d)).extrapolated for d in (0.1, 0.05, 0.025)]
    assert vals[0] > vals[1] > vals[2] > base - 0.005


def test_nested_monotonicity():
    inner = capacity_estimate(UNIT_SQUARE)
    outer = capacity_estimate(Disc(0.5 + 0.5j, 0.8))
    assert inner.extrapolated <= outer.extrapolated * (1 + 2 * 2e-3)


def test_submultiplicative_norms_on_common_sample():
    # all degrees solved on one fixed 512-point sample, so the sampled
    # minimax values inherit the Fekete inequality up to solver slack
    sups = {}
    for n in (4, 8, 12, 16, 20, 24, 28, 32):
        res = chebyshev_polynomial(UNIT_SQUARE, n, m=512)
        sups[n] = res.log_sup_norm
    for j, k in ((4, 4), (4, 8), (8, 8), (8, 16), (16, 16), (4, 28)):
        assert sups[j + k] <= sups[j] + sups[k] + 3 * 2e-3


def test_capacity_fit_window_containment():
    for region in (UNIT_SQUARE, Polygon((0j, 2 + 0j, 2 + 1j, 1 + 1j, 1 + 2j, 2j))):
        est = capacity_estimate(region)
        window = [est.values[est.degrees.index(n)] for n in est.fit_degrees]
        assert min(window) <= est.extrapolated <= max(window)


def test_capacity_ladder_validation():
    with pytest.raises(ValueError):
        capacity_estimate(UNIT_SQUARE, degrees=[8, 4])
    with pytest.raises(ValueError):
        capacity_estimate(UNIT_SQUARE, degrees=[])
    with pytest.raises(ValueError):
        capacity_estimate(UNIT_SQUARE, degrees=[0, 4, 8])


def test_capacity_needs_three_converged():
    with pytest.raises(NonConvergenceError):
        capacity_estimate(UNIT_SQUARE, degrees=[4, 8, 12], tol=1e-9)


def test_thread_count_does_not_change_result(monkeypatch):
    serial = capacity_estimate(UNIT_SQUARE, threads=1)
    pooled = capacity_estimate(UNIT_SQUARE, threads=3)
    assert serial.values == pooled.values
    assert serial.extrapolated == pooled.extrapolated
    monkeypatch.setenv("LANDAUCAP_THREADS", "4")
    from_env = capacity_estimate(UNIT_SQUARE)
    assert from_env.values == serial.values
