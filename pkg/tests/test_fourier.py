import math

import numpy as np
import pytest

from kspaces import (
    FrequencyPoint,
    Interval,
    TameFunction,
    fourier_bound_check,
    fourier_tame,
    sinc_tail,
)
from kspaces.verify import random_step

J_BOX = (Interval(-0.5, 0.5),)


def rect():
    return TameFunction(1, lambda x: np.ones_like(x), J_BOX)


class TestSincTail:
    def test_all_explicit_zero(self):
        assert sinc_tail(FrequencyPoint((0.0, 0.0, 0.0)), 1) == 1.0

    def test_integer_frequency_kills_tail(self):
        assert sinc_tail(FrequencyPoint((0.0, 1.0)), 1) == pytest.approx(0.0, abs=1e-16)

    def test_half_frequency(self):
        assert sinc_tail(FrequencyPoint((0.0, 0.5)), 1) == pytest.approx(
            2.0 / math.pi, rel=1e-12
        )

    def test_no_tail_coordinates(self):
        assert sinc_tail(FrequencyPoint((3.7,)), 1) == 1.0
        assert sinc_tail(FrequencyPoint(()), 0) == 1.0

    def test_bounded_by_one(self):
        rng = np.random.default_rng(0)
        for _ in range(200):
            y = FrequencyPoint(tuple(rng.uniform(-20, 20, size=rng.integers(0, 5))))
            assert abs(sinc_tail(y, int(rng.integers(0, 3)))) <= 1.0


class TestFourierTame:
    def test_rect_at_zero(self):
        fv = fourier_tame(rect(), FrequencyPoint((0.0,)))
        assert fv.value == pytest.approx(1.0, abs=1e-12)
        assert fv.tail_factor == 1.0 and fv.head_dim == 1

    def test_rect_at_one_vanishes(self):
        fv = fourier_tame(rect(), FrequencyPoint((1.0,)))
        assert abs(fv.value) < 1e-10

    def test_rect_transform_is_sinc_on_grid(self):
        for y in np.linspace(-4, 4, 64):
            fv = fourier_tame(rect(), FrequencyPoint((float(y),)), tol=1e-12)
            assert abs(fv.value - complex(np.sinc(y))) < 1e-10

    def test_gaussian_self_transform(self):
        f = TameFunction(1, lambda x: np.exp(-np.pi * x**2), (Interval(-5, 5),))
        fv = fourier_tame(f, FrequencyPoint((0.5,)), tol=1e-8)
        assert fv.value.real == pytest.approx(math.exp(-math.pi / 4.0), abs=1e-6)
        assert fv.value.imag == pytest.approx(0.0, abs=1e-8)

    def test_tail_factor_applies_beyond_head(self):
        fv = fourier_tame(rect(), FrequencyPoint((0.0, 0.5)))
        assert fv.tail_factor == pytest.approx(2.0 / math.pi, rel=1e-12)
        assert fv.value == pytest.approx(2.0 / math.pi, rel=1e-10)

    def test_order_two_separable(self):
        f = TameFunction(
            2, lambda x, y: np.ones_like(x * y), (Interval(-0.5, 0.5),) * 2
        )
        y = (0.5, 0.25)
        fv = fourier_tame(f, FrequencyPoint(y), tol=1e-10)
        expected = np.sinc(0.5) * np.sinc(0.25)
        assert fv.value.real == pytest.approx(float(expected), abs=1e-8)

    def test_linearity(self):
        rng = np.random.default_rng(1)
        s1 = random_step(rng, Interval(-0.5, 0.5))
        s2 = random_step(rng, Interval(-0.5, 0.5))
        a, b = 1.7, -0.6
        combo = TameFunction(1, lambda x: a * s1(x) + b * s2(x), J_BOX)
        y = FrequencyPoint((1.234,))
        lhs = fourier_tame(combo, y).value
        rhs = (
            a * fourier_tame(TameFunction(1, s1, J_BOX), y).value
            + b * fourier_tame(TameFunction(1, s2, J_BOX), y).value
        )
        assert abs(lhs - rhs) < 1e-9

    def test_conjugate_symmetry_for_real_cores(self):
        rng = np.random.default_rng(2)
        s = random_step(rng, Interval(-0.5, 0.5))
        f = TameFunction(1, s, J_BOX)
        for y in (0.3, 1.7, 2.9):
            plus = fourier_tame(f, FrequencyPoint((y,))).value
            minus = fourier_tame(f, FrequencyPoint((-y,))).value
            assert abs(minus - plus.conjugate()) < 1e-10


class TestBoundCheck:
    def test_rect_bound_attained_at_zero(self):
        grid = [FrequencyPoint((float(y),)) for y in np.linspace(-3, 3, 31)]
        rep = fourier_bound_check(rect(), grid)
        assert rep.passed
        assert rep.max_abs == pytest.approx(1.0, abs=1e-10)
        assert rep.l1_bound == pytest.approx(1.0, abs=1e-10)
        assert rep.argmax.coords == (0.0,)

    def test_zero_function(self):
        f = TameFunction(1, lambda x: np.zeros_like(x), J_BOX)
        rep = fourier_bound_check(f, [FrequencyPoint((0.0,))])
        assert rep.passed and rep.max_abs == 0.0

    def test_random_step_cores(self):
        rng = np.random.default_rng(3)
        for _ in range(5):
            s = random_step(rng, Interval(-0.5, 0.5))
            f = TameFunction(1, s, J_BOX)
            grid = [
                FrequencyPoint((float(v),)) for v in rng.uniform(-8, 8, size=64)
            ]
            assert fourier_bound_check(f, grid).passed
