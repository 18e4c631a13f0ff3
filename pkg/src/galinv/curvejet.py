"""Space-time curves (t, X(t)) and their jets up to fourth order.

Two sources of jets are supported: analytic curve families with closed-form
derivatives, and uniformly sampled curves differentiated with central finite
differences.  All derivatives are taken with respect to the curve's own
parameter, which for a space-time curve is the time coordinate t.

Stencils used by `jet_fd` (step h, offsets -3..3):

    X'    (1, -8, 0, 8, -1) / 12h                      5 points, O(h^4)
    X''   (-1, 16, -30, 16, -1) / 12h^2                 5 points, O(h^4)
    X'''  (1, -8, 13, 0, -13, 8, -1) / 8h^3             7 points, O(h^4)
    X'''' (-1, 12, -39, 56, -39, 12, -1) / 6h^4         7 points, O(h^4)

Jets are only produced on the interior window 4 <= i <= n-5; endpoints are
never extrapolated.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.integrate import cumulative_simpson
from scipy.interpolate import PchipInterpolator

from .errors import DomainError, IndexOutOfRange, RegularityError
from .galgroup import GalileanElement

TOL_DEGEN = 1e-9
MIN_SAMPLES = 11
EDGE = 4

# central stencils on offsets -3..3, numerators only
_D1 = np.array([0, 1, -8, 0, 8, -1, 0]) / 12.0
_D2 = np.array([0, -1, 16, -30, 16, -1, 0]) / 12.0
_D3 = np.array([1, -8, 13, 0, -13, 8, -1]) / 8.0
_D4 = np.array([-1, 12, -39, 56, -39, 12, -1]) / 6.0
_OFFSETS = np.arange(-3, 4)

# one-sided 4th-order first-derivative stencils, used only for speed at the
# two nodes nearest each end of the arc-length table
_D1_LEFT0 = np.array([-25, 48, -36, 16, -3]) / 12.0      # offsets 0..4
_D1_LEFT1 = np.array([-3, -10, 18, -6, 1]) / 12.0        # offsets -1..3


@dataclass(frozen=True, eq=False)
class CurveJet:
    t: float
    x: np.ndarray
    d1: np.ndarray
    d2: np.ndarray
    d3: np.ndarray
    d4: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "t", float(self.t))
        for name in ("x", "d1", "d2", "d3", "d4"):
            arr = np.array(getattr(self, name), dtype=float).reshape(3)
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)


def transform_jet(g: GalileanElement, j: CurveJet) -> CurveJet:
    """Push a jet through t -> t+s, X -> RX + tv + y.

    The derivative laws are X' -> RX' + v and X^(k) -> R X^(k) for k >= 2.
    """
    r = g.r
    return CurveJet(
        t=j.t + g.s,
        x=r @ j.x + j.t * g.v + g.y,
        d1=r @ j.d1 + g.v,
        d2=r @ j.d2,
        d3=r @ j.d3,
        d4=r @ j.d4,
    )


# -- analytic families ------------------------------------------------------

class AnalyticCurve:
    """Base class for curves with exact jets.  Subclasses implement `_jet`."""

    def jet(self, t: float) -> CurveJet:
        t = float(t)
        if not np.isfinite(t):
            raise DomainError(f"parameter {t!r} is not finite")
        return self._jet(t)

    def _jet(self, t: float) -> CurveJet:
        raise NotImplementedError

    def time(self, t: float) -> float:
        """Space-time coordinate t of the point at parameter t."""
        return float(t)

    def positions(self, ts) -> np.ndarray:
        return np.array([self.jet(t).x for t in np.atleast_1d(ts)])

    def sample(self, t0: float, dt: float, n: int) -> "CurveSamples":
        ts = t0 + dt * np.arange(n)
        return CurveSamples(self.time(t0), dt, self.positions(ts))


class Helix(AnalyticCurve):
    """Circular helix of radius a and pitch b.

    Raw form is (a cos t, a sin t, b t).  With ``arclength=True`` the
    parameter is rescaled by c = sqrt(a^2 + b^2) so that |X'| = 1, i.e. time
    and arc length coincide.  Curvature a/c^2, torsion b/c^2.
    """

    def __init__(self, a: float, b: float, arclength: bool = False):
        if not a > 0:
            raise ValueError("helix radius a must be positive")
        if b == 0:
            raise ValueError("helix pitch b must be nonzero (b = 0 is planar)")
        self.a = float(a)
        self.b = float(b)
        self.arclength = arclength
        self.rate = 1.0 / np.hypot(a, b) if arclength else 1.0

    @property
    def curvature(self) -> float:
        return self.a / (self.a ** 2 + self.b ** 2)

    @property
    def torsion(self) -> float:
        return self.b / (self.a ** 2 + self.b ** 2)

    def _jet(self, t):
        a, b, w = self.a, self.b, self.rate
        c, s = np.cos(w * t), np.sin(w * t)
        return CurveJet(
            t=t,
            x=[a * c, a * s, b * w * t],
            d1=[-a * w * s, a * w * c, b * w],
            d2=[-a * w**2 * c, -a * w**2 * s, 0.0],
            d3=[a * w**3 * s, -a * w**3 * c, 0.0],
            d4=[a * w**4 * c, a * w**4 * s, 0.0],
        )

    def positions(self, ts):
        ts = np.atleast_1d(np.asarray(ts, dtype=float))
        w = self.rate
        return np.column_stack([self.a * np.cos(w * ts), self.a * np.sin(w * ts), self.b * w * ts])

    def __repr__(self):
        return f"Helix(a={self.a}, b={self.b}, arclength={self.arclength})"


class Polynomial(AnalyticCurve):
    """X(t) = sum_k c_k t^k with 3-vector coefficients, degree <= 5."""

    def __init__(self, coefficients: Sequence[Sequence[float]]):
        c = np.array(coefficients, dtype=float).reshape(-1, 3)
        if len(c) > 6:
            raise ValueError("polynomial degree must be at most 5")
        self.coefficients = np.vstack([c, np.zeros((6 - len(c), 3))])

    def _derivative(self, k, t):
        out = np.zeros(3)
        for p in range(k, 6):
            fall = np.prod(np.arange(p - k + 1, p + 1)) if k else 1.0
            out += fall * self.coefficients[p] * t ** (p - k)
        return out

    def _jet(self, t):
        return CurveJet(t, *(self._derivative(k, t) for k in range(5)))

    def positions(self, ts):
        ts = np.atleast_1d(np.asarray(ts, dtype=float))
        powers = ts[:, None] ** np.arange(6)
        return powers @ self.coefficients


class Transformed(AnalyticCurve):
    """The image g . c of an analytic curve, parameterized like the inner curve.

    The point at parameter t sits at time t + s.
    """

    def __init__(self, inner: AnalyticCurve, g: GalileanElement):
        self.inner = inner
        self.g = g

    def _jet(self, t):
        return transform_jet(self.g, self.inner.jet(t))

    def time(self, t):
        return self.inner.time(t) + self.g.s

    def positions(self, ts):
        ts = np.atleast_1d(np.asarray(ts, dtype=float))
        inner_t = np.array([self.inner.time(t) for t in ts])
        return self.inner.positions(ts) @ self.g.r.T + np.outer(inner_t, self.g.v) + self.g.y

    def __repr__(self):
        return f"Transformed({self.inner!r}, {self.g!r})"


def jet_analytic(c: AnalyticCurve, t: float) -> CurveJet:
    return c.jet(t)


# -- sampled curves ---------------------------------------------------------

@dataclass(frozen=True, eq=False)
class CurveSamples:
    """Uniformly sampled curve: X(t0 + i dt) = xs[i]."""

    t0: float
    dt: float
    xs: np.ndarray

    def __post_init__(self):
        xs = np.array(self.xs, dtype=float)
        if xs.ndim != 2 or xs.shape[1] != 3:
            raise ValueError(f"expected an (n, 3) array of positions, got shape {xs.shape}")
        if len(xs) < MIN_SAMPLES:
            raise ValueError(f"need at least {MIN_SAMPLES} samples, got {len(xs)}")
        if not (self.dt > 0 and np.isfinite(self.dt) and np.isfinite(self.t0)):
            raise ValueError("dt must be positive and t0 finite")
        if not np.all(np.isfinite(xs)):
            raise ValueError("sample coordinates must be finite")
        xs.flags.writeable = False
        object.__setattr__(self, "t0", float(self.t0))
        object.__setattr__(self, "dt", float(self.dt))
        object.__setattr__(self, "xs", xs)

    @property
    def n(self) -> int:
        return len(self.xs)

    @property
    def ts(self) -> np.ndarray:
        return self.t0 + self.dt * np.arange(self.n)

    def interior(self) -> range:
        return range(EDGE, self.n - EDGE)

    def index_of(self, t: float) -> int:
        return int(round((t - self.t0) / self.dt))

    def transformed(self, g: GalileanElement) -> "CurveSamples":
        ts = self.ts
        return CurveSamples(self.t0 + g.s, self.dt, self.xs @ g.r.T + np.outer(ts, g.v) + g.y)

    def downsample(self, stride: int) -> "CurveSamples":
        return CurveSamples(self.t0, self.dt * stride, self.xs[::stride])


def fd_derivatives(samples: CurveSamples, indices) -> tuple[np.ndarray, ...]:
    """Vectorized stencils: arrays d1..d4 of shape (len(indices), 3)."""
    idx = np.asarray(indices, dtype=int)
    if idx.size and (idx.min() < EDGE or idx.max() > samples.n - 1 - EDGE):
        bad = idx[(idx < EDGE) | (idx > samples.n - 1 - EDGE)][0]
        raise IndexOutOfRange(f"index {bad} outside interior window [{EDGE}, {samples.n - 1 - EDGE}]")
    window = samples.xs[idx[:, None] + _OFFSETS]          # (k, 7, 3)
    h = samples.dt
    d1 = np.einsum("o,kod->kd", _D1, window) / h
    d2 = np.einsum("o,kod->kd", _D2, window) / h**2
    d3 = np.einsum("o,kod->kd", _D3, window) / h**3
    d4 = np.einsum("o,kod->kd", _D4, window) / h**4
    return d1, d2, d3, d4


def jet_fd(samples: CurveSamples, i: int) -> CurveJet:
    d1, d2, d3, d4 = fd_derivatives(samples, [i])
    return CurveJet(samples.t0 + i * samples.dt, samples.xs[i], d1[0], d2[0], d3[0], d4[0])


def jets_fd(samples: CurveSamples, indices=None) -> list[CurveJet]:
    indices = list(samples.interior()) if indices is None else list(indices)
    d1, d2, d3, d4 = fd_derivatives(samples, indices)
    return [CurveJet(samples.t0 + i * samples.dt, samples.xs[i], d1[k], d2[k], d3[k], d4[k])
            for k, i in enumerate(indices)]


def nondegeneracy(j: CurveJet) -> float:
    """Scalar triple product det(X', X'', X''') = X' . (X'' x X''')."""
    return float(np.dot(j.d1, np.cross(j.d2, j.d3)))


def is_st_curve(j: CurveJet, tol: float = TOL_DEGEN) -> bool:
    return nondegeneracy(j) > tol


# -- arc length -------------------------------------------------------------

def _velocity(samples: CurveSamples) -> np.ndarray:
    xs, h, n = samples.xs, samples.dt, samples.n
    v = np.empty_like(xs)
    v[2:n - 2] = (xs[:-4] - 8 * xs[1:-3] + 8 * xs[3:-1] - xs[4:]) / 12.0
    v[0] = _D1_LEFT0 @ xs[0:5]
    v[1] = _D1_LEFT1 @ xs[0:5]
    v[n - 1] = -(_D1_LEFT0 @ xs[n - 1:n - 6:-1])
    v[n - 2] = -(_D1_LEFT1 @ xs[n - 1:n - 6:-1])
    return v / h


def arc_length_table(samples: CurveSamples, tol: float = TOL_DEGEN) -> tuple[np.ndarray, np.ndarray]:
    """Cumulative arc length s_i at every sample node, with s_0 = 0.

    Speed comes from fourth-order differences (one-sided at the ends) and is
    integrated with the composite Simpson rule.
    """
    speed = np.linalg.norm(_velocity(samples), axis=1)
    interior = speed[EDGE:samples.n - EDGE]
    if np.any(interior <= tol):
        i = EDGE + int(np.argmin(interior))
        raise RegularityError(f"curve is not regular: |X'| = {speed[i]:.3e} at node {i}")
    s = cumulative_simpson(speed, dx=samples.dt, initial=0.0)
    if np.any(np.diff(s) <= 0):
        raise RegularityError("arc length is not strictly increasing")
    return samples.ts, s


def reparameterize_by_arclength(samples: CurveSamples, m: int) -> CurveSamples:
    """Resample onto m equally spaced arc-length nodes (PCHIP per coordinate)."""
    if m < MIN_SAMPLES:
        raise ValueError(f"need at least {MIN_SAMPLES} arc-length nodes, got {m}")
    _, s = arc_length_table(samples)
    grid = np.linspace(0.0, s[-1], m)
    xs = PchipInterpolator(s, samples.xs, axis=0)(grid)
    return CurveSamples(0.0, grid[1] - grid[0], xs)


def to_arclength(j: CurveJet, tol: float = TOL_DEGEN) -> CurveJet:
    """Rewrite a jet's derivatives with respect to arc length (chain rule).

    With u = 1/|X'| and D_s = u D_t this is exact given the time jet; the
    returned jet keeps the original t and x.
    """
    x1, x2, x3, x4 = j.d1, j.d2, j.d3, j.d4
    sig = float(np.linalg.norm(x1))
    if sig <= tol:
        raise RegularityError(f"|X'| = {sig:.3e}: curve not regular here")
    # derivatives of the speed
    s1 = x1 @ x2 / sig
    s2 = (x2 @ x2 + x1 @ x3 - s1**2) / sig
    s3 = (3 * x2 @ x3 + x1 @ x4 - 3 * s1 * s2) / sig
    # derivatives of u = 1/sig
    u = 1.0 / sig
    u1 = -s1 * u**2
    u2 = -s2 * u**2 + 2 * s1**2 * u**3
    u3 = -s3 * u**2 + 6 * s1 * s2 * u**3 - 6 * s1**3 * u**4
    # Xs = u X', then repeatedly apply u d/dt
    y1 = u * x1
    y2 = u * (u1 * x1 + u * x2)
    p = (u1**2 + u * u2) * x1 + 3 * u * u1 * x2 + u**2 * x3
    y3 = u * p
    dp = ((3 * u1 * u2 + u * u3) * x1 + 4 * (u1**2 + u * u2) * x2
          + 5 * u * u1 * x3 + u**2 * x4)
    y4 = u * (u1 * p + u * dp)
    return CurveJet(j.t, j.x, y1, y2, y3, y4)
