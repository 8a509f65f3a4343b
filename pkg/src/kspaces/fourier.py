"""Fourier transform of tame functions.

The transform of an order-n tame function factors into a finite-dimensional
transform of the core (kernel exp(-2*pi*i*<x, y>), so the transform of the
unit interval's indicator is the normalized sinc) times the sinc tail: the
transform of the infinite product of unit intervals.  Since sinc(0) = 1 the
tail is evaluated exactly over the finitely many nonzero frequency
coordinates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .gauge import integrate_nd_result
from .tame import TameFunction


@dataclass(frozen=True)
class FrequencyPoint:
    """Frequency vector with finite support (implicit zero tail)."""

    coords: tuple

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(float(c) for c in self.coords))

    def get(self, k: int) -> float:
        return self.coords[k - 1] if 1 <= k <= len(self.coords) else 0.0

    def __len__(self) -> int:
        return len(self.coords)


@dataclass(frozen=True)
class FourierValue:
    """Transform value at one frequency point.

    ``value`` is the complete transform (head times tail); ``tail_factor``
    is the sinc tail alone and ``head_dim`` the core dimension it starts
    after.
    """

    value: complex
    tail_factor: float
    head_dim: int

    def __post_init__(self):
        if abs(self.tail_factor) > 1.0 + 1e-15:
            raise ValueError("sinc tail cannot exceed one in modulus")

    def __abs__(self) -> float:
        return abs(self.value)


def sinc_tail(y: FrequencyPoint, n: int) -> float:
    """Product of sin(pi y_k)/(pi y_k) over explicit coordinates k > n.

    Implicit zero coordinates contribute exactly one (sinc(0) = 1), so the
    infinite product reduces to the explicit ones.
    """
    tail = y.coords[n:]
    if not tail:
        return 1.0
    return float(np.prod(np.sinc(np.asarray(tail))))


def fourier_tame_result(f: TameFunction, y: FrequencyPoint, tol: float = 1e-10):
    """Like :func:`fourier_tame` but also returns the propagated quadrature
    error bound on the modulus and the evaluation count."""
    ybar = np.array([y.get(k) for k in range(1, f.order + 1)])

    def phase(*xs):
        acc = xs[0] * ybar[0]
        for c, yk in zip(xs[1:], ybar[1:]):
            acc = acc + c * yk
        return 2.0 * math.pi * acc

    re = integrate_nd_result(
        lambda *xs: np.asarray(f.core(*xs)) * np.cos(phase(*xs)), f.box, tol
    )
    im = integrate_nd_result(
        lambda *xs: -np.asarray(f.core(*xs)) * np.sin(phase(*xs)), f.box, tol
    )
    tail = sinc_tail(y, f.order)
    value = FourierValue(complex(re.value, im.value) * tail, tail, f.order)
    error = math.hypot(re.error_estimate, im.error_estimate) * abs(tail)
    return value, error, re.evaluations + im.evaluations


def fourier_tame(f: TameFunction, y: FrequencyPoint, tol: float = 1e-10) -> FourierValue:
    """Transform of a tame function at y: core transform times sinc tail.

    Real and imaginary parts of the head are computed by separate
    quadrature over the working box.
    """
    return fourier_tame_result(f, y, tol)[0]


@dataclass(frozen=True)
class BoundReport:
    max_abs: float
    l1_bound: float
    slack: float
    argmax: FrequencyPoint
    passed: bool


def fourier_bound_check(
    f: TameFunction, grid, tol: float = 1e-10, quad_slack: float = 1e-8
) -> BoundReport:
    """Check |transform| <= integral of |core| over a grid of frequencies."""

    def abs_core(*xs):
        return np.abs(np.asarray(f.core(*xs), dtype=np.float64))

    l1 = integrate_nd_result(abs_core, f.box, tol).value
    best, arg = -1.0, None
    for y in grid:
        v = abs(fourier_tame(f, y, tol))
        if v > best:
            best, arg = v, y
    return BoundReport(best, l1, quad_slack, arg, best <= l1 + quad_slack)
