"""Rebuild constant-invariant ST-curves by integrating d(frame)/ds = frame . b.

For |X''| = w1 and |X'''| = w2 constant at unit speed the pullback is the
constant matrix b with

    b[0, 4] = 1,   b[1, 0] = w1,   b[1, 3] = w2/w1,   b[3, 1] = -w2/w1

(0-based indices).  The underlying curve is a helix with curvature
kappa = w1 and torsion tau = sqrt((w2/w1)^2 - w1^2).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .curvejet import CurveSamples, Helix
from .errors import InvalidInvariants, StepTooLarge
from .galgroup import AlgebraElement, orthogonality_defect
from .invariants import EquivalenceReport, Signature, equivalent, signature

REORTH_TOL = 1e-6
FAIL_TOL = 1e-3
MAX_STEP = 1e-2


@dataclass(frozen=True)
class ConstantInvariants:
    w1: float
    w2: float

    def __post_init__(self):
        if not (self.w1 > 0 and self.w2 > 0):
            raise InvalidInvariants("w1 and w2 must be positive")
        if not self.w2 > self.w1 ** 2:
            raise InvalidInvariants(f"need w2 > w1^2 for positive torsion, got w1={self.w1}, w2={self.w2}")

    @property
    def kappa(self) -> float:
        return self.w1

    @property
    def rate(self) -> float:
        """sqrt(kappa^2 + tau^2) = w2 / w1, the turning rate of e1 and e3."""
        return self.w2 / self.w1

    @property
    def tau(self) -> float:
        return float(np.sqrt(self.rate ** 2 - self.w1 ** 2))

    def helix(self) -> Helix:
        c2 = self.rate ** 2
        return Helix(self.kappa / c2, self.tau / c2, arclength=True)


def algebra_matrix(inv: ConstantInvariants) -> AlgebraElement:
    b = np.zeros((5, 5))
    b[0, 4] = 1.0
    b[1, 0] = inv.w1
    b[1, 3] = inv.rate
    b[3, 1] = -inv.rate
    return AlgebraElement(b)


def initial_frame(inv: ConstantInvariants) -> np.ndarray:
    """Frame at the origin with e1, e2, e3 along the axes and a consistent unit tangent.

    For the helix, X' = (tau e2 + kappa e3) / sqrt(kappa^2 + tau^2).
    """
    a = np.eye(5)
    a[2, 0] = inv.tau / inv.rate
    a[3, 0] = inv.kappa / inv.rate
    return a


def rk4_step(f: Callable[[float, np.ndarray], np.ndarray], s: float, y: np.ndarray, h: float) -> np.ndarray:
    """Increment of one classical Runge-Kutta step (caller adds it to y)."""
    k1 = f(s, y)
    k2 = f(s + h / 2, y + h / 2 * k1)
    k3 = f(s + h / 2, y + h / 2 * k2)
    k4 = f(s + h, y + h * k3)
    return h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)


def _polar(e: np.ndarray) -> np.ndarray:
    u, _, vt = np.linalg.svd(e)
    return u @ vt


@dataclass(frozen=True, eq=False)
class ReconstructionResult:
    samples: CurveSamples
    frames: np.ndarray            # (n, 5, 5)
    max_orth_defect: float
    reorthonormalizations: int


def integrate_frame(inv: ConstantInvariants | None, alpha0, length: float, h: float = 1e-3, *,
                    b: np.ndarray | None = None) -> ReconstructionResult:
    """Integrate d(alpha)/ds = alpha . b from alpha0 over [0, length] with RK4.

    The update uses compensated summation so that rounding does not swamp
    the O(h^4) truncation error on long runs.  The rotation block is checked
    after every step: above 1e-6 from orthonormal it is re-projected (and the
    event counted); above 1e-3 the step is rejected with StepTooLarge.

    ``b`` overrides the generator built from ``inv`` (testing hook).
    """
    if not 0 < h <= MAX_STEP:
        raise ValueError(f"step h must be in (0, {MAX_STEP}], got {h}")
    gen = algebra_matrix(inv).m if b is None else np.asarray(b, dtype=float)
    alpha = np.array(alpha0, dtype=float)
    if orthogonality_defect(alpha[1:4, 1:4]) > REORTH_TOL:
        raise ValueError("alpha0 rotation block is not orthonormal")
    steps = int(round(length / h))
    rhs = lambda s, a: a @ gen
    frames = np.empty((steps + 1, 5, 5))
    frames[0] = alpha
    comp = np.zeros((5, 5))
    worst = 0.0
    events = 0
    for k in range(steps):
        inc = rk4_step(rhs, k * h, alpha, h) - comp
        new = alpha + inc
        comp = (new - alpha) - inc
        alpha = new
        defect = orthogonality_defect(alpha[1:4, 1:4])
        worst = max(worst, defect)
        if defect > FAIL_TOL:
            raise StepTooLarge(f"orthonormality defect {defect:.3e} at step {k + 1}; reduce h")
        if defect > REORTH_TOL:
            alpha[1:4, 1:4] = _polar(alpha[1:4, 1:4])
            comp[1:4, 1:4] = 0.0
            events += 1
        frames[k + 1] = alpha
    samples = CurveSamples(frames[0, 0, 4], h, frames[:, 1:4, 4])
    return ReconstructionResult(samples, frames, worst, events)


def constant_signature(inv: ConstantInvariants, s: np.ndarray) -> Signature:
    one = np.ones_like(s)
    return Signature(s, inv.w1 * one, inv.w2 * one, inv.w1 * inv.w2 * one, {"method": "target"})


def roundtrip(inv: ConstantInvariants, h: float = 1e-3, length: float | None = None,
              tol: float = 1e-5, signature_dt: float = 1e-2) -> EquivalenceReport:
    """Reconstruct from (w1, w2), recompute the signature, compare with the target.

    The reconstructed trajectory is thinned to a spacing near ``signature_dt``
    before differencing; differencing at the integration step itself would
    be dominated by rounding in the third derivative.
    """
    if length is None:
        length = 4 * np.pi / inv.rate           # two turns of the helix
    res = integrate_frame(inv, initial_frame(inv), length, h)
    stride = max(1, int(round(signature_dt / h)))
    sig = signature(res.samples.downsample(stride))
    return equivalent(constant_signature(inv, sig.s), sig, tol)
