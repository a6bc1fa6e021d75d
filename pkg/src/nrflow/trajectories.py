"""Periodic benchmark references in output space ``(px, py, pz, psi)``.

Circles and lemniscates of Gerono, either in the horizontal ``x-y`` plane
or the vertical ``x-z`` plane.  For a shape with in-plane amplitudes
``(a1, a2)`` and angular rate ``w = 2 pi / period``:

* circle:      ``(a1 cos wt, a1 sin wt)``
* lemniscate:  ``(a1 sin wt, a2 sin wt cos wt)``

Shape sizes are not published alongside the periods; the defaults here
are read off plotted extents and can be overridden per spec.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from numpy.typing import NDArray
from scipy.optimize import minimize_scalar

HOVER_ALTITUDE = 1.5
CIRCLE_PERIOD = 3.14
LEMNISCATE_PERIOD = 6.28
FAST_LEMNISCATE_PERIOD = 3.14

KINDS = (
    "vertical-circle",
    "horizontal-circle",
    "horizontal-lemniscate",
    "vertical-tall-lemniscate",
    "vertical-short-lemniscate",
)

# grid used by sup_ref_speed for lemniscates before local refinement
SPEED_GRID_POINTS = 10_000


@dataclass(frozen=True)
class TrajectorySpec:
    """A periodic reference.

    Attributes:
        kind: One of :data:`KINDS`.
        period: Period [s].
        center: Center point [m].
        size: In-plane amplitudes ``(a1, a2)`` [m]; circles use ``a1`` only.
        yaw_ref: Constant yaw reference [rad].
    """

    kind: str
    period: float
    center: tuple[float, float, float] = (0.0, 0.0, HOVER_ALTITUDE)
    size: tuple[float, float] = (0.8, 0.8)
    yaw_ref: float = 0.0

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"unknown trajectory {self.kind!r}; valid: {', '.join(KINDS)}")
        if not self.period > 0:
            raise ValueError(f"period must be positive, got {self.period}")

    @property
    def omega(self) -> float:
        return 2.0 * math.pi / self.period

    @property
    def is_circle(self) -> bool:
        return self.kind.endswith("circle")

    @property
    def plane_axes(self) -> tuple[int, int]:
        return (0, 1) if self.kind.startswith("horizontal") else (0, 2)


_DEFAULTS: dict[str, tuple[float, tuple[float, float]]] = {
    "vertical-circle": (CIRCLE_PERIOD, (0.8, 0.8)),
    "horizontal-circle": (CIRCLE_PERIOD, (0.8, 0.8)),
    "horizontal-lemniscate": (LEMNISCATE_PERIOD, (1.0, 1.0)),
    # 1.0 m wide; a2 sin cos spans a2 vertically
    "vertical-tall-lemniscate": (LEMNISCATE_PERIOD, (0.5, 1.0)),
    "vertical-short-lemniscate": (LEMNISCATE_PERIOD, (0.5, 0.5)),
}


def default_spec(kind: str, period: float | None = None) -> TrajectorySpec:
    """Benchmark spec by kebab-case name, optionally with a period override."""
    if kind not in _DEFAULTS:
        raise ValueError(f"unknown trajectory {kind!r}; valid: {', '.join(KINDS)}")
    p, size = _DEFAULTS[kind]
    return TrajectorySpec(kind=kind, period=p if period is None else period, size=size)


def benchmark_suite() -> list[tuple[str, TrajectorySpec]]:
    """The five standard trajectories plus the two fast vertical lemniscates."""
    suite = [(k, default_spec(k)) for k in KINDS]
    for k in ("vertical-tall-lemniscate", "vertical-short-lemniscate"):
        suite.append((f"fast-{k}", default_spec(k, FAST_LEMNISCATE_PERIOD)))
    return suite


def hover_spec(center=(0.0, 0.0, HOVER_ALTITUDE)) -> TrajectorySpec:
    """A constant reference, encoded as a zero-radius circle."""
    return TrajectorySpec("horizontal-circle", CIRCLE_PERIOD, center=tuple(center), size=(0.0, 0.0))


def _plane(spec: TrajectorySpec, wt: float) -> tuple[float, float]:
    a1, a2 = spec.size
    if spec.is_circle:
        return a1 * math.cos(wt), a1 * math.sin(wt)
    s = math.sin(wt)
    return a1 * s, a2 * s * math.cos(wt)


def _plane_rate(spec: TrajectorySpec, wt: float) -> tuple[float, float]:
    a1, a2 = spec.size
    w = spec.omega
    if spec.is_circle:
        return -a1 * w * math.sin(wt), a1 * w * math.cos(wt)
    return a1 * w * math.cos(wt), a2 * w * math.cos(2.0 * wt)


def reference(spec: TrajectorySpec, t: float) -> NDArray[np.float64]:
    """Reference output ``(px, py, pz, psi)`` at time ``t``."""
    wt = spec.omega * math.fmod(t, spec.period)
    i, j = spec.plane_axes
    r = np.array([*spec.center, spec.yaw_ref], dtype=float)
    di, dj = _plane(spec, wt)
    r[i] += di
    r[j] += dj
    return r


def reference_derivative(spec: TrajectorySpec, t: float) -> NDArray[np.float64]:
    """Analytic time derivative of :func:`reference`."""
    wt = spec.omega * math.fmod(t, spec.period)
    i, j = spec.plane_axes
    rd = np.zeros(4)
    rd[i], rd[j] = _plane_rate(spec, wt)
    return rd


def sup_ref_speed(spec: TrajectorySpec) -> float:
    """Supremum of ``|reference_derivative|`` over one period.

    Exact for circles.  For lemniscates the speed is sampled on a
    :data:`SPEED_GRID_POINTS` grid over one period and the best sample is
    polished with a bounded scalar search over its two neighbouring cells.
    """
    if spec.is_circle:
        return spec.size[0] * spec.omega

    def speed(t: float) -> float:
        return float(np.hypot(*_plane_rate(spec, spec.omega * t)))

    ts = np.linspace(0.0, spec.period, SPEED_GRID_POINTS + 1)
    wt = spec.omega * ts
    a1, a2 = spec.size
    w = spec.omega
    speeds = np.hypot(a1 * w * np.cos(wt), a2 * w * np.cos(2.0 * wt))
    k = int(np.argmax(speeds))
    h = ts[1] - ts[0]
    res = minimize_scalar(
        lambda t: -speed(t),
        bounds=(ts[k] - h, ts[k] + h),
        method="bounded",
        options={"xatol": 1e-12},
    )
    return max(float(speeds[k]), -float(res.fun))


def with_period(spec: TrajectorySpec, period: float) -> TrajectorySpec:
    return replace(spec, period=period)
