"""The special Galilean group SGal(4) as a concrete 5x5 matrix group.

An element (R, v, y, s) acts on space-time events by

    t -> t + s,    X -> R X + t v + y

and is embedded in GL(5) with the block layout

    [ 1  0  s ]
    [ v  R  y ]
    [ 0  0  1 ]

acting on homogeneous columns (t, X, 1).  Orientation-reversing rotations
(the full Galilean group) are rejected at construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import NotOrthogonal, NotSpecial, SingularMatrix

TOL_ORTH = 1e-12
MAX_CONDITION = 1e12


def _frozen(a, shape) -> np.ndarray:
    arr = np.array(a, dtype=float).reshape(shape)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class Event:
    t: float
    x: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "t", float(self.t))
        object.__setattr__(self, "x", _frozen(self.x, (3,)))
        if not (np.isfinite(self.t) and np.all(np.isfinite(self.x))):
            raise ValueError("event components must be finite")

    def homogeneous(self) -> np.ndarray:
        return np.concatenate([[self.t], self.x, [1.0]])

    def __eq__(self, other):
        if not isinstance(other, Event):
            return NotImplemented
        return self.t == other.t and bool(np.array_equal(self.x, other.x))

    __hash__ = None


@dataclass(frozen=True, eq=False)
class GalileanElement:
    """Validated special Galilean transformation. Build with `make_element`."""

    r: np.ndarray
    v: np.ndarray
    y: np.ndarray
    s: float

    def matrix(self) -> np.ndarray:
        return embed(self)

    def to_json(self) -> dict:
        return {
            "r": [float(c) for c in self.r.ravel()],
            "v": [float(c) for c in self.v],
            "y": [float(c) for c in self.y],
            "s": float(self.s),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "GalileanElement":
        return make_element(np.reshape(obj["r"], (3, 3)), obj["v"], obj["y"], obj["s"])

    def __repr__(self):
        return (f"GalileanElement(r={self.r.tolist()}, v={self.v.tolist()}, "
                f"y={self.y.tolist()}, s={self.s!r})")


@dataclass(frozen=True, eq=False)
class AlgebraElement:
    """A 5x5 matrix in (or near) the Lie algebra sgal(4), rates per unit parameter."""

    m: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "m", _frozen(self.m, (5, 5)))

    @property
    def rotation_block(self) -> np.ndarray:
        return self.m[1:4, 1:4]

    def skew_defect(self) -> float:
        """Max-norm of the symmetric part of the rotation block."""
        w = self.rotation_block
        return float(np.max(np.abs(w + w.T)) / 2)

    def structure_defect(self) -> float:
        """Largest deviation from the sgal(4) pattern (row 1, row 5, skew block)."""
        row1 = np.max(np.abs(self.m[0, :4]))
        row5 = np.max(np.abs(self.m[4, :]))
        return float(max(row1, row5, self.skew_defect()))

    def is_valid(self, tol: float) -> bool:
        return self.structure_defect() <= tol


def make_element(r, v, y, s) -> GalileanElement:
    """Validate and build an element of SGal(4).

    Raises NotOrthogonal if ``max|r^T r - I| > TOL_ORTH`` and NotSpecial when
    ``det(r) < 0``.
    """
    r = _frozen(r, (3, 3))
    v = _frozen(v, (3,))
    y = _frozen(y, (3,))
    s = float(s)
    if not (np.all(np.isfinite(r)) and np.all(np.isfinite(v))
            and np.all(np.isfinite(y)) and np.isfinite(s)):
        raise ValueError("element components must be finite")
    defect = np.max(np.abs(r.T @ r - np.eye(3)))
    if defect > TOL_ORTH:
        raise NotOrthogonal(f"r^T r deviates from identity by {defect:.3e}")
    det = np.linalg.det(r)
    if det < 0:
        raise NotSpecial("det(r) = -1: orientation-reversing rotations are not in SGal(4)")
    if abs(det - 1.0) > TOL_ORTH:
        raise NotOrthogonal(f"det(r) = {det!r}")
    return GalileanElement(r, v, y, s)


def identity() -> GalileanElement:
    return make_element(np.eye(3), np.zeros(3), np.zeros(3), 0.0)


def boost(v) -> GalileanElement:
    return make_element(np.eye(3), v, np.zeros(3), 0.0)


def time_shift(s: float) -> GalileanElement:
    return make_element(np.eye(3), np.zeros(3), np.zeros(3), s)


def translation(y) -> GalileanElement:
    return make_element(np.eye(3), np.zeros(3), y, 0.0)


def rotation(r) -> GalileanElement:
    return make_element(r, np.zeros(3), np.zeros(3), 0.0)


def embed(g: GalileanElement) -> np.ndarray:
    m = np.eye(5)
    m[0, 4] = g.s
    m[1:4, 0] = g.v
    m[1:4, 1:4] = g.r
    m[1:4, 4] = g.y
    return m


def snap_to_group(m) -> GalileanElement:
    """Decode a near-group 5x5 matrix, projecting its rotation block onto SO(3).

    The projection is the orthogonal polar factor (closest rotation in the
    Frobenius norm).  Only called on explicit request, never by the
    constructor.
    """
    m = np.asarray(m, dtype=float)
    u, _, vt = np.linalg.svd(m[1:4, 1:4])
    d = np.sign(np.linalg.det(u @ vt))
    r = u @ np.diag([1.0, 1.0, d]) @ vt
    return make_element(r, m[1:4, 0], m[1:4, 4], m[0, 4])


def orthogonality_defect(r) -> float:
    r = np.asarray(r, dtype=float)
    return float(np.max(np.abs(r.T @ r - np.eye(3))))


def compose(g1: GalileanElement, g2: GalileanElement) -> GalileanElement:
    r = g1.r @ g2.r
    v = g1.v + g1.r @ g2.v
    y = g1.r @ g2.y + g2.s * g1.v + g1.y
    s = g1.s + g2.s
    return _revalidate(r, v, y, s)


def inverse(g: GalileanElement) -> GalileanElement:
    rt = g.r.T
    return _revalidate(rt, -rt @ g.v, -rt @ (g.y - g.s * g.v), -g.s)


def _revalidate(r, v, y, s) -> GalileanElement:
    # products of valid rotations drift by a few ulps; re-project only when
    # the drift is at roundoff level so genuine errors still surface
    if orthogonality_defect(r) > TOL_ORTH:
        if orthogonality_defect(r) > 1e-9:
            raise NotOrthogonal("composed rotation lost orthogonality")
        u, _, vt = np.linalg.svd(r)
        r = u @ vt
    return make_element(r, v, y, s)


def act(g: GalileanElement, e: Event) -> Event:
    return Event(e.t + g.s, g.r @ e.x + e.t * g.v + g.y)


def rotation_from_quaternion(q) -> np.ndarray:
    w, x, y, z = np.asarray(q, dtype=float) / np.linalg.norm(q)
    return np.array([
        [1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)],
        [2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)],
        [2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)],
    ])


def random_rotation(rng: np.random.Generator) -> np.ndarray:
    """Haar-uniform rotation: a normalized 4D Gaussian is a uniform unit quaternion."""
    q = rng.standard_normal(4)
    return rotation_from_quaternion(q)


def random_special(seed: int, bound: float = 5.0) -> GalileanElement:
    rng = np.random.default_rng(seed)
    r = random_rotation(rng)
    v = rng.uniform(-bound, bound, 3)
    y = rng.uniform(-bound, bound, 3)
    s = rng.uniform(-bound, bound)
    return _revalidate(r, v, y, s)


def left_log_derivative(path: Callable[[float], np.ndarray], t: float,
                        h: float = 1e-5) -> AlgebraElement:
    """Numerical pullback of the Maurer-Cartan form, ``P(t)^-1 P'(t)``.

    Uses the central difference ``(P(t+h) - P(t-h)) / 2h``, so the error is
    O(h^2) for smooth paths.
    """
    p = np.asarray(path(t), dtype=float)
    cond = np.linalg.cond(p)
    if not np.isfinite(cond) or cond > MAX_CONDITION:
        raise SingularMatrix(f"path({t}) has condition number {cond:.3e}")
    dp = (np.asarray(path(t + h)) - np.asarray(path(t - h))) / (2 * h)
    return AlgebraElement(np.linalg.solve(p, dp))
