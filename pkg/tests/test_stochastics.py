"""Travel-time distribution and seeded stream tests.

The closed-form CDF is checked against a brute-force trapezoid
integration of the density, sampling against the closed-form moments of
the kernel (std = half_width / sqrt(5)).
"""

import math

import numpy as np
import pytest

from hubfleet.stochastics import (
    DegenerateDist,
    EpanechnikovDist,
    SeededRng,
    epan_cdf,
    epan_from_mean,
    epan_sample,
)


def cdf_by_quadrature(d: EpanechnikovDist, x: float, n: int = 1_000_000) -> float:
    """Trapezoid-rule integral of the density 3/(4b) (1 - u^2) up to x."""
    lo, hi = d.support
    if x <= lo:
        return 0.0
    if x >= hi:
        return 1.0
    grid = np.linspace(lo, x, n)
    u = (grid - d.mu) / d.half_width
    density = 0.75 * (1.0 - u * u) / d.half_width
    return float(np.trapezoid(density, grid))


class TestFromMean:
    def test_scale_rule(self):
        assert epan_from_mean(9.0).half_width == pytest.approx(3.0)
        assert epan_from_mean(3.0).half_width == pytest.approx(1.0)

    def test_mean_preserved(self):
        assert epan_from_mean(7.5).mu == 7.5

    def test_zero_mean_rejected(self):
        with pytest.raises(ValueError):
            epan_from_mean(0.0)
        with pytest.raises(ValueError):
            epan_from_mean(-1.0)

    def test_nonpositive_half_width_rejected(self):
        with pytest.raises(ValueError):
            EpanechnikovDist(mu=1.0, half_width=0.0)


class TestCdf:
    def test_center_is_half(self):
        d = epan_from_mean(9.0)
        assert epan_cdf(d, d.mu) == 0.5

    def test_support_boundaries(self):
        d = epan_from_mean(9.0)
        lo, hi = d.support
        assert epan_cdf(d, lo) == 0.0
        assert epan_cdf(d, hi) == 1.0
        assert epan_cdf(d, lo - 5.0) == 0.0
        assert epan_cdf(d, hi + 5.0) == 1.0

    def test_halfway_point_matches_quadrature(self):
        # Closed form at mu + b/2 is 27/32 = 0.84375.
        d = epan_from_mean(9.0)
        x = d.mu + d.half_width / 2.0
        assert cdf_by_quadrature(d, x) == pytest.approx(0.84375, abs=1e-9)
        assert epan_cdf(d, x) == pytest.approx(0.84375, abs=1e-12)

    def test_matches_quadrature_on_grid(self):
        d = EpanechnikovDist(mu=4.0, half_width=2.5)
        for x in np.linspace(1.0, 7.0, 13):
            assert epan_cdf(d, x) == pytest.approx(
                cdf_by_quadrature(d, x, n=200_000), abs=1e-8
            )

    def test_nondecreasing(self):
        d = EpanechnikovDist(mu=10.0, half_width=4.0)
        xs = np.linspace(2.0, 18.0, 400)
        vals = [epan_cdf(d, x) for x in xs]
        assert all(a <= b for a, b in zip(vals, vals[1:]))


class TestSampling:
    def test_bounded_support(self):
        d = epan_from_mean(6.0)
        rng = SeededRng(11)
        xs = epan_sample(d, rng, size=20_000)
        lo, hi = d.support
        assert xs.min() >= lo and xs.max() <= hi

    def test_moments(self):
        d = epan_from_mean(9.0)
        xs = epan_sample(d, SeededRng(5), size=1_000_000)
        assert xs.mean() == pytest.approx(d.mu, rel=0.01)
        # Kernel variance is b^2/5.
        assert xs.std() == pytest.approx(d.half_width / math.sqrt(5.0), rel=0.01)

    def test_ks_distance_against_cdf(self):
        from scipy.stats import kstest

        d = EpanechnikovDist(mu=5.0, half_width=2.0)
        xs = epan_sample(d, SeededRng(17), size=100_000)
        stat = kstest(xs, lambda v: np.vectorize(d.cdf)(v)).statistic
        assert stat < 0.01

    def test_single_draw_is_scalar(self):
        d = epan_from_mean(2.0)
        x = epan_sample(d, SeededRng(3))
        assert isinstance(float(x), float)


class TestDegenerate:
    def test_point_mass(self):
        d = DegenerateDist(0.0)
        assert d.cdf(-1e-9) == 0.0
        assert d.cdf(0.0) == 1.0
        assert d.sample(SeededRng(1)) == 0.0
        assert list(d.sample(SeededRng(1), size=3)) == [0.0, 0.0, 0.0]


class TestSeededRng:
    def test_identical_streams_replay(self):
        a = SeededRng(123, stream=7).random(10_000)
        b = SeededRng(123, stream=7).random(10_000)
        assert np.array_equal(a, b)

    def test_distinct_streams_differ(self):
        a = SeededRng(123, stream=0).random(100)
        b = SeededRng(123, stream=1).random(100)
        assert not np.array_equal(a, b)

    def test_shuffled_is_deterministic(self):
        items = list(range(20))
        assert SeededRng(9, 2).shuffled(items) == SeededRng(9, 2).shuffled(items)
        assert sorted(SeededRng(9, 2).shuffled(items)) == items
