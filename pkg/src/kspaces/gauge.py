"""One-dimensional gauge (Henstock-Kurzweil) integration.

Two modes:

* verification mode -- explicit gauges, tagged partitions and Riemann sums
  (:func:`is_delta_fine`, :func:`cousin_partition`, :func:`riemann_sum`);
* value mode -- :func:`hk_integrate`, adaptive bisection with a
  Gauss-Kronrod 7/15 error estimate, plus geometric shell refinement toward
  declared singular points so that improper/highly oscillatory integrands
  (the ones that are HK- but not Lebesgue-integrable) converge.

:func:`integrate_nd` is the tensor-product quadrature used by the
higher-dimensional modules.

Integrands are callables of one array argument (n arguments for
``integrate_nd``).  NumPy-vectorized callables are evaluated in batches;
plain scalar functions are detected automatically and looped over (slower).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from . import kernels
from .errors import (
    DimensionCapExceeded,
    EvaluationError,
    PartitionBudgetExceeded,
    ToleranceNotMet,
)

DEFAULT_PARTITION_CAP = 10**7
DEFAULT_DIM_CAP = 6
DEFAULT_MAX_EVALS = 50_000_000
COUSIN_THETA = 0.9

_EPS = float(np.finfo(np.float64).eps)
_MIN_REL_WIDTH = 4.0 * _EPS


@dataclass(frozen=True)
class Interval:
    """Closed bounded interval [lo, hi]."""

    lo: float
    hi: float

    def __post_init__(self):
        object.__setattr__(self, "lo", float(self.lo))
        object.__setattr__(self, "hi", float(self.hi))
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)):
            raise ValueError("interval endpoints must be finite")
        if self.lo > self.hi:
            raise ValueError(f"interval has lo={self.lo} > hi={self.hi}")

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.lo + self.hi)

    def contains(self, x: float) -> bool:
        return self.lo <= x <= self.hi

    def intersect(self, other: "Interval") -> "Interval | None":
        lo = max(self.lo, other.lo)
        hi = min(self.hi, other.hi)
        if lo > hi:
            return None
        return Interval(lo, hi)

    def translate(self, dx: float) -> "Interval":
        return Interval(self.lo + dx, self.hi + dx)


@dataclass(frozen=True)
class Gauge:
    """Strictly positive width function controlling partition fineness."""

    delta: Callable[[float], float]

    def __call__(self, t: float) -> float:
        d = float(self.delta(t))
        if not (d > 0.0) or not math.isfinite(d):
            raise ValueError(f"gauge must be positive and finite, got {d} at t={t}")
        return d


@dataclass(frozen=True)
class TaggedPartition:
    """Ordered tagged cells covering an interval exactly.

    Cells must be adjacent (each cell starts where the previous one ends)
    and each tag must lie inside its cell.
    """

    cells: tuple

    def __post_init__(self):
        cells = tuple((float(t), c) for t, c in self.cells)
        object.__setattr__(self, "cells", cells)
        if not cells:
            raise ValueError("partition needs at least one cell")
        prev_hi = None
        for tag, cell in cells:
            if not isinstance(cell, Interval):
                raise TypeError("partition cells must be Interval instances")
            if not cell.contains(tag):
                raise ValueError(f"tag {tag} outside its cell [{cell.lo}, {cell.hi}]")
            if prev_hi is not None and cell.lo != prev_hi:
                raise ValueError("partition cells must be adjacent and ordered")
            prev_hi = cell.hi

    @property
    def interval(self) -> Interval:
        return Interval(self.cells[0][1].lo, self.cells[-1][1].hi)

    def __len__(self) -> int:
        return len(self.cells)


@dataclass(frozen=True)
class IntegralResult:
    value: float
    error_estimate: float
    evaluations: int

    def __post_init__(self):
        if self.error_estimate < 0:
            raise ValueError("error_estimate must be non-negative")
        if self.evaluations < 0:
            raise ValueError("evaluations must be non-negative")


def is_delta_fine(partition: TaggedPartition, gauge: Gauge) -> bool:
    """True iff every cell sits inside the open gauge ball of its tag."""
    for tag, cell in partition.cells:
        d = gauge(tag)
        if not (tag - d < cell.lo and cell.hi < tag + d):
            return False
    return True


def cousin_partition(
    gauge: Gauge, interval: Interval, max_cells: int = DEFAULT_PARTITION_CAP
) -> TaggedPartition:
    """Greedy left-to-right construction of a delta-fine tagged partition.

    From the current left endpoint x the next cell is
    [x, min(hi, x + 0.9 * delta(x))] with tag x.  Always delta-fine for the
    given gauge; raises :class:`PartitionBudgetExceeded` past ``max_cells``.
    """
    cells = []
    x = interval.lo
    if interval.width == 0.0:
        raise ValueError("cannot partition a degenerate interval")
    while x < interval.hi:
        step = COUSIN_THETA * gauge(x)
        v = min(interval.hi, x + step)
        if v <= x:
            raise PartitionBudgetExceeded(
                f"gauge step underflowed at x={x} (delta too small)"
            )
        cells.append((x, Interval(x, v)))
        if len(cells) > max_cells:
            raise PartitionBudgetExceeded(
                f"partition exceeded {max_cells} cells before covering the interval"
            )
        x = v
    return TaggedPartition(tuple(cells))


def riemann_sum(f, partition: TaggedPartition) -> float:
    """Sum of f(tag) * cell width in cell order, compensated."""
    terms = np.empty(len(partition.cells))
    for i, (tag, cell) in enumerate(partition.cells):
        try:
            y = float(f(tag))
        except Exception as exc:
            raise EvaluationError(f"integrand undefined at tag {tag}") from exc
        if not math.isfinite(y):
            raise EvaluationError(f"integrand non-finite at tag {tag}: {y}")
        terms[i] = y * cell.width
    return kernels.neumaier_sum(terms)


class _Budget:
    __slots__ = ("remaining",)

    def __init__(self, limit: int):
        self.remaining = int(limit)

    def spend(self, n: int):
        self.remaining -= n
        if self.remaining < 0:
            raise ToleranceNotMet("evaluation budget exhausted before convergence")


class _VecFn:
    """Wraps an integrand; batch-evaluates and auto-detects vectorization."""

    def __init__(self, f, budget: _Budget):
        self.f = f
        self.budget = budget
        self.vectorized = None

    def _elementwise(self, xs: np.ndarray) -> np.ndarray:
        flat = xs.ravel()
        out = np.empty(flat.shape)
        for i, x in enumerate(flat):
            try:
                out[i] = float(self.f(float(x)))
            except Exception as exc:
                raise EvaluationError(f"integrand failed at x={x}") from exc
        return out.reshape(xs.shape)

    def __call__(self, xs: np.ndarray) -> np.ndarray:
        self.budget.spend(xs.size)
        with np.errstate(all="ignore"):
            if self.vectorized is None:
                try:
                    r = np.asarray(self.f(xs), dtype=np.float64)
                    if r.shape == xs.shape:
                        self.vectorized = True
                    elif r.ndim == 0:
                        # constant function; broadcast is exact
                        self.vectorized = True
                        r = np.broadcast_to(r, xs.shape)
                    else:
                        raise ValueError
                except EvaluationError:
                    raise
                except Exception:
                    self.vectorized = False
                    r = self._elementwise(xs)
            elif self.vectorized:
                r = np.asarray(self.f(xs), dtype=np.float64)
                if r.ndim == 0:
                    r = np.broadcast_to(r, xs.shape)
            else:
                r = self._elementwise(xs)
        if not np.isfinite(r).all():
            bad = xs[~np.isfinite(r)].ravel()
            raise EvaluationError(
                f"integrand non-finite near x={bad[0]!r}; "
                "declare the point as singular if this is an improper integral"
            )
        return r


def _adaptive(fn, lo: float, hi: float, tol: float):
    """Batched breadth-first GK15 refinement of [lo, hi].

    Splits every panel whose error exceeds its width-proportional share of
    ``tol``; stops early once the global error total drops below ``tol``.
    Panels too narrow to split are force-accepted so the loop always
    terminates with an honest error total.  Returns (value, error).
    """
    total_w = hi - lo
    if total_w <= 0.0:
        return 0.0, 0.0
    active_lo = np.array([lo])
    active_hi = np.array([hi])
    acc_lo, acc_val, acc_err = [], [], []
    acc_err_sum = 0.0

    while active_lo.size:
        centers = 0.5 * (active_lo + active_hi)
        halfw = 0.5 * (active_hi - active_lo)
        xs = centers[:, None] + halfw[:, None] * kernels.GK15_NODES
        fv = fn(xs)
        vals, errs = kernels.gk15_batch(fv, halfw)

        if acc_err_sum + float(errs.sum()) <= tol:
            acc_lo.append(active_lo)
            acc_val.append(vals)
            acc_err.append(errs)
            break

        widths = active_hi - active_lo
        budgets = tol * widths / total_w
        scale = np.maximum(np.maximum(np.abs(active_lo), np.abs(active_hi)), 1.0)
        done = (errs <= budgets) | (widths <= _MIN_REL_WIDTH * scale)
        if done.any():
            acc_lo.append(active_lo[done])
            acc_val.append(vals[done])
            acc_err.append(errs[done])
            acc_err_sum += float(errs[done].sum())
        split = ~done
        if not split.any():
            break
        m = centers[split]
        lo_s, hi_s = active_lo[split], active_hi[split]
        active_lo = np.empty(2 * m.size)
        active_hi = np.empty(2 * m.size)
        active_lo[0::2], active_lo[1::2] = lo_s, m
        active_hi[0::2], active_hi[1::2] = m, hi_s

    lo_all = np.concatenate(acc_lo)
    val_all = np.concatenate(acc_val)
    err_all = np.concatenate(acc_err)
    order = np.argsort(lo_all, kind="stable")
    value = kernels.neumaier_sum(val_all[order])
    error = kernels.neumaier_sum(err_all[order])
    return value, error


def _shell_integrate(fn, s, far, tol_q, cauchy_tol, ratio, max_shells):
    """Improper-mode integration of the segment between ``far`` and the
    singular endpoint ``s`` via geometric shells.

    Stops once three consecutive shell integrals (the Cauchy differences of
    the partial sums) fall below ``cauchy_tol``; that threshold is then
    added to the reported error as the tail allowance.
    """
    span = far - s
    parts, errs = [], []
    small_run = 0
    frac = 1.0
    for m in range(max_shells):
        frac_in = frac * ratio
        x_out = s + span * frac
        x_in = s + span * frac_in
        a, b = (x_in, x_out) if x_in < x_out else (x_out, x_in)
        tol_shell = tol_q * (1.0 - ratio) * frac
        v, e = _adaptive(fn, a, b, tol_shell)
        parts.append(v)
        errs.append(e)
        if abs(v) < cauchy_tol:
            small_run += 1
            if small_run >= 3:
                break
        else:
            small_run = 0
        frac = frac_in
    else:
        raise ToleranceNotMet(
            f"shell integrals near singular point {s} did not settle "
            f"within {max_shells} shells",
            value=kernels.neumaier_sum(parts),
            evaluations=0,
        )
    value = kernels.neumaier_sum(parts)
    error = kernels.neumaier_sum(errs) + cauchy_tol
    return value, error


def _segments(iv: Interval, singular_points):
    """Split ``iv`` at interior singular points; mark singular-facing sides."""
    sings = sorted({float(s) for s in singular_points if iv.contains(float(s))})
    interior = [s for s in sings if iv.lo < s < iv.hi]
    bounds = [iv.lo] + interior + [iv.hi]
    singset = set(sings)
    segs = []
    for a, b in zip(bounds[:-1], bounds[1:]):
        if a == b:
            continue
        left, right = a in singset, b in singset
        if left and right:
            mid = 0.5 * (a + b)
            segs.append((a, mid, "left"))
            segs.append((mid, b, "right"))
        elif left:
            segs.append((a, b, "left"))
        elif right:
            segs.append((a, b, "right"))
        else:
            segs.append((a, b, None))
    return segs


def hk_integrate(
    f,
    iv: Interval,
    tol: float = 1e-10,
    singular_points: Sequence[float] = (),
    max_evals: int = DEFAULT_MAX_EVALS,
    shell_ratio: float = 0.5,
    max_shells: int = 4096,
) -> IntegralResult:
    """Henstock-Kurzweil integral of ``f`` over ``iv``.

    Plain segments use adaptive bisection with the GK 7/15 two-level error
    estimate.  Around each declared singular point the integral is taken in
    improper mode: geometric shells shrinking toward the point, stopped when
    the partial sums are Cauchy (three consecutive shell integrals below
    tol/4, per singular side).  This matches the limit characterization of
    the HK integral over expanding subintervals, which is what makes
    conditionally integrable oscillatory integrands computable.

    Raises :class:`ToleranceNotMet` if the evaluation budget runs out, and
    :class:`EvaluationError` if ``f`` returns non-finite values away from
    declared singular points.
    """
    if tol <= 0.0:
        raise ValueError("tol must be positive")
    if iv.width == 0.0:
        return IntegralResult(0.0, 0.0, 0)
    budget = _Budget(max_evals)
    fn = _VecFn(f, budget)
    segs = _segments(iv, singular_points)
    n_sing = sum(1 for _, _, side in segs if side is not None)
    cauchy_tol = tol / (4.0 * max(1, n_sing))

    parts, errs = [], []
    try:
        for a, b, side in segs:
            tol_seg = 0.5 * tol * (b - a) / iv.width
            if side is None:
                v, e = _adaptive(fn, a, b, tol_seg)
            elif side == "left":
                v, e = _shell_integrate(
                    fn, a, b, tol_seg, cauchy_tol, shell_ratio, max_shells
                )
            else:
                v, e = _shell_integrate(
                    fn, b, a, tol_seg, cauchy_tol, shell_ratio, max_shells
                )
            parts.append(v)
            errs.append(e)
    except ToleranceNotMet as exc:
        exc.evaluations = max_evals - budget.remaining
        raise

    value = kernels.neumaier_sum(parts)
    error = kernels.neumaier_sum(errs)
    evals = max_evals - budget.remaining
    if error > tol:
        raise ToleranceNotMet(
            f"final error estimate {error:.3g} exceeds tol {tol:.3g}",
            value=value,
            error_estimate=error,
            evaluations=evals,
        )
    return IntegralResult(value, error, evals)


class _VecFnND:
    """n-argument integrand wrapper: fixed leading scalars, one array axis."""

    def __init__(self, f, budget: _Budget):
        self.f = f
        self.budget = budget
        self.vectorized = None

    def _elementwise(self, fixed, xs):
        flat = xs.ravel()
        out = np.empty(flat.shape)
        for i, x in enumerate(flat):
            try:
                out[i] = float(self.f(*fixed, float(x)))
            except Exception as exc:
                raise EvaluationError(
                    f"integrand failed at {(*fixed, float(x))}"
                ) from exc
        return out.reshape(xs.shape)

    def call(self, fixed, xs):
        self.budget.spend(xs.size)
        with np.errstate(all="ignore"):
            if self.vectorized is None:
                try:
                    r = np.asarray(self.f(*fixed, xs), dtype=np.float64)
                    if r.ndim == 0:
                        r = np.broadcast_to(r, xs.shape)
                    elif r.shape != xs.shape:
                        raise ValueError
                    self.vectorized = True
                except EvaluationError:
                    raise
                except Exception:
                    self.vectorized = False
                    r = self._elementwise(fixed, xs)
            elif self.vectorized:
                r = np.asarray(self.f(*fixed, xs), dtype=np.float64)
                if r.ndim == 0:
                    r = np.broadcast_to(r, xs.shape)
            else:
                r = self._elementwise(fixed, xs)
        if not np.isfinite(r).all():
            raise EvaluationError("integrand returned non-finite values")
        return r


def _integrate_axis(fnd: _VecFnND, fixed, box, tol):
    iv = box[0]
    if len(box) == 1:
        return _adaptive(lambda xs: fnd.call(fixed, xs), iv.lo, iv.hi, tol)
    w = max(iv.width, _EPS)
    inner_tol = tol / (2.0 * w)

    def g(xs):
        flat = xs.ravel()
        out = np.empty(flat.shape)
        for i, x in enumerate(flat):
            out[i], _ = _integrate_axis(fnd, fixed + (float(x),), box[1:], inner_tol)
        return out.reshape(xs.shape)

    v, e = _adaptive(g, iv.lo, iv.hi, 0.5 * tol)
    return v, e + w * inner_tol


def integrate_nd_result(
    f,
    box: Sequence[Interval],
    tol: float = 1e-8,
    dim_cap: int = DEFAULT_DIM_CAP,
    max_evals: int = DEFAULT_MAX_EVALS,
) -> IntegralResult:
    """Tensor-product adaptive quadrature over a box; full result record.

    The box is a sequence of per-axis intervals.  The tolerance is split
    between the outer axis and the inner integrals (scaled by the outer
    width) so the propagated error stays below ``tol``.
    """
    box = list(box)
    n = len(box)
    if n < 1:
        raise ValueError("box must have at least one axis")
    if n > dim_cap:
        raise DimensionCapExceeded(f"dimension {n} exceeds cap {dim_cap}")
    if tol <= 0.0:
        raise ValueError("tol must be positive")
    budget = _Budget(max_evals)
    fnd = _VecFnND(f, budget)
    if any(iv.width == 0.0 for iv in box):
        return IntegralResult(0.0, 0.0, 0)
    value, error = _integrate_axis(fnd, (), box, tol)
    return IntegralResult(value, error, max_evals - budget.remaining)


def integrate_nd(f, box, tol: float = 1e-8, **kwargs) -> float:
    """Value-only convenience wrapper around :func:`integrate_nd_result`."""
    return integrate_nd_result(f, box, tol, **kwargs).value


def uniform_partition(iv: Interval, n: int, tags: str = "midpoint") -> TaggedPartition:
    """Uniform n-cell partition with midpoint or left tags (test helper)."""
    edges = np.linspace(iv.lo, iv.hi, n + 1)
    cells = []
    for a, b in zip(edges[:-1], edges[1:]):
        tag = 0.5 * (a + b) if tags == "midpoint" else a
        cells.append((tag, Interval(a, b)))
    return TaggedPartition(tuple(cells))
