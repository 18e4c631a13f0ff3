"""Moving frame, Maurer-Cartan pullback and SGal(4) invariants of ST-curves.

The frame attached to a jet (t, X, X', X'', X''') is the 5x5 matrix

    [ 1   0   0   0   t ]
    [ X'  e1  e2  e3  X ]
    [ 0   0   0   0   1 ]

with e1 = X''/|X''|, e2 = B/|B|, e3 = X'' x B / |X'' x B| and B = X'' x X'''.
It is a special Galilean element, and frame(g . c) = g . frame(c), so the
pullback frame^-1 . d(frame) is unchanged by the group.  Its entries give the
invariants

    w1 = |X''|,   w2 = |X'''|,   w3 = |X'' x X'''|

(acceleration, jerk and their cross-product norm when the parameter is time).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np
from scipy.integrate import quad

from .curvejet import (
    TOL_DEGEN, AnalyticCurve, CurveJet, CurveSamples, arc_length_table, jets_fd,
    to_arclength,
)
from .errors import DegenerateJet, NoOverlap, NonPositiveMass, NotInGroup
from .galgroup import AlgebraElement, GalileanElement, embed, orthogonality_defect, snap_to_group

Curve = Union[AnalyticCurve, CurveSamples]

TOL_ANALYTIC = 1e-6
TOL_FD = 1e-3
RECOVERY_ORTH_TOL = 1e-6
MIN_OVERLAP_STEPS = 10


def _frame_vectors(j: CurveJet, tol: float = TOL_DEGEN, index: int | None = None):
    n2 = float(np.linalg.norm(j.d2))
    if n2 <= tol:
        raise DegenerateJet("X''", n2, index)
    b = np.cross(j.d2, j.d3)
    nb = float(np.linalg.norm(b))
    if nb <= tol:
        raise DegenerateJet("X''xX'''", nb, index)
    d = np.cross(j.d2, b)
    nd = float(np.linalg.norm(d))
    return j.d2 / n2, b / nb, d / nd, n2, b, nb, d, nd


@dataclass(frozen=True, eq=False)
class Frame:
    m: np.ndarray

    @property
    def e1(self):
        return self.m[1:4, 1]

    @property
    def e2(self):
        return self.m[1:4, 2]

    @property
    def e3(self):
        return self.m[1:4, 3]

    @property
    def rotation(self):
        return self.m[1:4, 1:4]


def frame(j: CurveJet, tol: float = TOL_DEGEN) -> Frame:
    """Moving frame of a jet.

    Requires |X''| > tol and |X'' x X'''| > tol, both of which are SGal
    invariants.  The triple-product sign test of `is_st_curve` is deliberately
    not enforced here: it changes under boosts, and the frame must stay
    equivariant under the whole group.
    """
    e1, e2, e3, *_ = _frame_vectors(j, tol)
    m = np.eye(5)
    m[0, 4] = j.t
    m[1:4, 0] = j.d1
    m[1:4, 1] = e1
    m[1:4, 2] = e2
    m[1:4, 3] = e3
    m[1:4, 4] = j.x
    m.flags.writeable = False
    return Frame(m)


def frame_inverse(f: Frame, j: CurveJet) -> np.ndarray:
    """Closed-form inverse of `frame(j)`.

    Written with the curve quantities B = X''xX''' and A = |X''x(X''xX''')|:

        row 1    (1, 0, -t)
        row 2    (-X'.X''/|X''|,       e1^T, (t X'.X'' - X.X'')/|X''|)
        row 3    (-X'.B/|B|,           e2^T, (t X'.B - X.B)/|B|)
        row 4    (-(X'xX'').B / A,     e3^T, (t (X'xX'').B - (XxX'').B)/A)
        row 5    (0, 0, 1)
    """
    x, x1, x2 = j.x, j.d1, j.d2
    e1, e2, e3, n2, b, nb, _, a = _frame_vectors(j)
    t = j.t
    inv = np.zeros((5, 5))
    inv[0, 0] = 1.0
    inv[0, 4] = -t
    inv[1, 0] = -(x1 @ x2) / n2
    inv[1, 1:4] = e1
    inv[1, 4] = (t * (x1 @ x2) - x @ x2) / n2
    inv[2, 0] = -(x1 @ b) / nb
    inv[2, 1:4] = e2
    inv[2, 4] = (t * (x1 @ b) - x @ b) / nb
    x1x2_b = np.cross(x1, x2) @ b
    inv[3, 0] = -x1x2_b / a
    inv[3, 1:4] = e3
    inv[3, 4] = (t * x1x2_b - np.cross(x, x2) @ b) / a
    inv[4, 4] = 1.0
    return inv


def frame_derivative(j: CurveJet) -> np.ndarray:
    """d(frame)/dt by the quotient rule on the three unit columns.

    With C = X'' x X'''' and D = X'' x B the column derivatives are

        A1 = (X''' |X''|^2 - X'' (X''.X''')) / |X''|^3
        A2 = (C |B|^2 - (B.C) B) / |B|^3
        A3 = (D' |D|^2 - (D.D') D) / |D|^3,   D' = X''' x B + X'' x C
    """
    x1, x2, x3, x4 = j.d1, j.d2, j.d3, j.d4
    _, _, _, n2, b, nb, d, nd = _frame_vectors(j)
    c = np.cross(x2, x4)
    dd = np.cross(x3, b) + np.cross(x2, c)
    a1 = (x3 * n2**2 - x2 * (x2 @ x3)) / n2**3
    a2 = (c * nb**2 - (b @ c) * b) / nb**3
    a3 = (dd * nd**2 - (d @ dd) * d) / nd**3
    m = np.zeros((5, 5))
    m[0, 4] = 1.0
    m[1:4, 0] = x2
    m[1:4, 1] = a1
    m[1:4, 2] = a2
    m[1:4, 3] = a3
    m[1:4, 4] = x1
    return m


def pullback(j: CurveJet) -> AlgebraElement:
    """frame^-1 . d(frame), the Maurer-Cartan form pulled back to the curve."""
    f = frame(j)
    return AlgebraElement(frame_inverse(f, j) @ frame_derivative(j))


def invariants_of(j: CurveJet) -> tuple[float, float, float]:
    """(w1, w2, w3) = (|X''|, |X'''|, |X'' x X'''|)."""
    return (float(np.linalg.norm(j.d2)), float(np.linalg.norm(j.d3)),
            float(np.linalg.norm(np.cross(j.d2, j.d3))))


# -- signatures -------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Signature:
    s: np.ndarray
    w1: np.ndarray
    w2: np.ndarray
    w3: np.ndarray
    meta: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "s": [float(v) for v in self.s],
            "w1": [float(v) for v in self.w1],
            "w2": [float(v) for v in self.w2],
            "w3": [float(v) for v in self.w3],
            "meta": dict(self.meta),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "Signature":
        return cls(*(np.asarray(obj[k], dtype=float) for k in ("s", "w1", "w2", "w3")),
                   meta=dict(obj.get("meta", {})))

    @property
    def step(self) -> float:
        return float(np.median(np.diff(self.s)))


def _node_indices(samples: CurveSamples, m: int | None) -> np.ndarray:
    interior = np.arange(4, samples.n - 4)
    if m is None or m >= len(interior):
        return interior
    if m < 2:
        raise ValueError("m must be at least 2")
    stride = max(1, (len(interior) - 1) // (m - 1))
    return interior[::stride][:m]


def _signature_from_jets(jets: Sequence[CurveJet], s: np.ndarray, nodes, meta, tol) -> Signature:
    w = np.empty((len(jets), 3))
    for k, j in enumerate(jets):
        w[k] = invariants_of(j)
        if w[k, 0] <= tol:
            raise DegenerateJet("X''", w[k, 0], int(nodes[k]))
        if w[k, 2] <= tol:
            raise DegenerateJet("X''xX'''", w[k, 2], int(nodes[k]))
    return Signature(np.asarray(s) - s[0], w[:, 0], w[:, 1], w[:, 2], meta)


def signature(curve: Curve, m: int | None = None, *, span: tuple[float, float] | None = None,
              parameter: str = "time", tol: float = TOL_DEGEN, source: str = "") -> Signature:
    """Invariant signature (w1, w2, w3) of a curve, tabulated from its first node.

    ``parameter="time"`` differentiates with respect to the space-time
    coordinate t.  Time is only shifted by the group, so this signature is
    invariant under every special Galilean transformation, boosts included.

    ``parameter="arclength"`` first rewrites each jet with respect to the
    arc length of X.  Boosts change |X'|, so this variant is only invariant
    under rotations, translations and time shifts.

    Sampled curves use the interior nodes (every k-th one when ``m`` is
    given); analytic curves need ``span=(t_start, t_end)`` and use ``m``
    (default 201) equally spaced parameter values.
    """
    if parameter not in ("time", "arclength"):
        raise ValueError(f"unknown parameter {parameter!r}")
    if isinstance(curve, CurveSamples):
        nodes = _node_indices(curve, m)
        jets = jets_fd(curve, nodes)
        if parameter == "time":
            s = curve.ts[nodes]
        else:
            _, table = arc_length_table(curve)
            s = table[nodes]
        meta = {"source": source, "dt": curve.dt, "method": "fd", "parameter": parameter}
    else:
        if span is None:
            raise ValueError("analytic curves need span=(t_start, t_end)")
        m = 201 if m is None else m
        nodes = np.linspace(span[0], span[1], m)
        jets = [curve.jet(t) for t in nodes]
        if parameter == "time":
            s = np.array([curve.time(t) for t in nodes])
        else:
            speed = lambda t: float(np.linalg.norm(curve.jet(t).d1))
            pieces = [quad(speed, a, b, epsabs=1e-13, epsrel=1e-13)[0]
                      for a, b in zip(nodes[:-1], nodes[1:])]
            s = np.concatenate([[0.0], np.cumsum(pieces)])
        meta = {"source": source or repr(curve), "dt": float(nodes[1] - nodes[0]),
                "method": "analytic", "parameter": parameter}
        nodes = np.arange(m)
    if parameter == "arclength":
        jets = [to_arclength(j) for j in jets]
    return _signature_from_jets(jets, s, nodes, meta, tol)


@dataclass(frozen=True)
class EquivalenceReport:
    equivalent: bool
    max_dev_w1: float
    max_dev_w2: float
    max_dev_w3: float
    overlap: tuple[float, float]
    tol: float

    def to_json(self) -> dict:
        return {
            "equivalent": self.equivalent,
            "max_dev_w1": self.max_dev_w1,
            "max_dev_w2": self.max_dev_w2,
            "max_dev_w3": self.max_dev_w3,
            "overlap": list(self.overlap),
            "tol": self.tol,
        }


def equivalent(sa: Signature, sb: Signature, tol: float = TOL_FD) -> EquivalenceReport:
    """Decide SGal equivalence from (w1, w2) on the common parameter span.

    Both signatures start at 0.  They are linearly interpolated onto a shared
    grid with the coarser of the two steps.  w3 is reported but not used.
    """
    length = min(sa.s[-1], sb.s[-1])
    step = max(sa.step, sb.step)
    if not length >= MIN_OVERLAP_STEPS * step * (1 - 1e-9):
        raise NoOverlap(f"common span {length:.6g} is shorter than "
                        f"{MIN_OVERLAP_STEPS} grid steps of {step:.6g}")
    grid = np.linspace(0.0, length, int(np.floor(length / step * (1 + 1e-9))) + 1)
    devs = [float(np.max(np.abs(np.interp(grid, sa.s, getattr(sa, k))
                                - np.interp(grid, sb.s, getattr(sb, k)))))
            for k in ("w1", "w2", "w3")]
    ok = devs[0] <= tol and devs[1] <= tol
    return EquivalenceReport(bool(ok), devs[0], devs[1], devs[2], (0.0, float(length)), float(tol))


# -- recovery ---------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class RecoveryReport:
    g: GalileanElement
    residual: float
    orth_defect: float

    def to_json(self) -> dict:
        return {"g": self.g.to_json(), "residual": self.residual, "orth_defect": self.orth_defect}


def _paired_jets(ca: Curve, cb: Curve, t0: float, ts):
    if isinstance(ca, CurveSamples) and isinstance(cb, CurveSamples):
        i0 = ca.index_of(t0)
        last = min(ca.n, cb.n) - 5
        if not 4 <= i0 <= last:
            raise ValueError(f"t0 = {t0} is not an interior node of both curves")
        nodes = np.arange(4, last + 1) if ts is None else np.array([ca.index_of(t) for t in ts])
        ja, jb = jets_fd(ca, nodes), jets_fd(cb, nodes)
        k0 = int(np.searchsorted(nodes, i0))
        if k0 >= len(nodes) or nodes[k0] != i0:
            ja0, jb0 = jets_fd(ca, [i0])[0], jets_fd(cb, [i0])[0]
        else:
            ja0, jb0 = ja[k0], jb[k0]
        return ja0, jb0, ja, jb
    if isinstance(ca, AnalyticCurve) and isinstance(cb, AnalyticCurve):
        ts = t0 + np.linspace(-1.0, 1.0, 21) if ts is None else np.asarray(ts)
        return ca.jet(t0), cb.jet(t0), [ca.jet(t) for t in ts], [cb.jet(t) for t in ts]
    raise TypeError("both curves must be analytic or both sampled")


def recover_transformation(ca: Curve, cb: Curve, t0: float, *, ts=None,
                           residual_tol: float | None = None) -> RecoveryReport:
    """Find g in SGal(4) with cb = g . ca from the frames at parameter t0.

    g is decoded from frame_b(t0) . frame_a(t0)^-1 using the block layout
    (s at (1,5), v in column 1, R in the middle block, y in column 5) and
    projected onto SO(3).  The residual is the largest entry of
    g . frame_a - frame_b over the comparison nodes: every shared interior
    node for sampled curves, ``ts`` (default t0 +- 1) for analytic ones.

    Raises NotInGroup when the quotient is not a group element, or when
    ``residual_tol`` is given and exceeded.
    """
    ja0, jb0, ja, jb = _paired_jets(ca, cb, t0, ts)
    fa = frame(ja0)
    q = frame(jb0).m @ frame_inverse(fa, ja0)
    defect = max(orthogonality_defect(q[1:4, 1:4]),
                 float(np.max(np.abs(q[0, :4] - [1, 0, 0, 0]))),
                 float(np.max(np.abs(q[4] - [0, 0, 0, 0, 1]))))
    if defect > RECOVERY_ORTH_TOL:
        raise NotInGroup(f"frame quotient is {defect:.3e} away from SGal(4)", defect)
    g = snap_to_group(q)
    gm = embed(g)
    residual = 0.0
    for a, b in zip(ja, jb):
        residual = max(residual, float(np.max(np.abs(gm @ frame(a).m - frame(b).m))))
    report = RecoveryReport(g, residual, defect)
    if residual_tol is not None and residual > residual_tol:
        err = NotInGroup(f"curves are not equivalent: residual {residual:.3e} > {residual_tol:.1e}",
                         residual)
        err.report = report
        raise err
    return report


# -- relations at arc-length parameter --------------------------------------

def invariant_relations_check(j: CurveJet, window: Sequence[CurveJet] = ()) -> list[tuple[str, float]]:
    """Defects of the identities satisfied by unit-speed, constant-invariant curves.

    Relations evaluated at ``j``:

        X'.X''                  0 at unit speed
        X'.X''' + |X''|^2       0 at unit speed
        X''.X'''                0 when |X''| is constant
        X'''.X''''              0 when |X'''| is constant
        X''.X'''' + |X'''|^2    0 when |X''| is constant
        gram                    [X''.(X'''xX'''')]^2 - det Gram(X'', X''', X''''), always 0

    When a window of neighbouring jets is given, the spread (max - min) of
    |X''|, |X'''| and |X''xX'''| over it is appended.
    """
    x1, x2, x3, x4 = j.d1, j.d2, j.d3, j.d4
    vecs = np.array([x2, x3, x4])
    triple = float(x2 @ np.cross(x3, x4))
    out = [
        ("X'.X''", float(x1 @ x2)),
        ("X'.X'''+|X''|^2", float(x1 @ x3 + x2 @ x2)),
        ("X''.X'''", float(x2 @ x3)),
        ("X'''.X''''", float(x3 @ x4)),
        ("X''.X''''+|X'''|^2", float(x2 @ x4 + x3 @ x3)),
        ("gram", triple**2 - float(np.linalg.det(vecs @ vecs.T))),
    ]
    if len(window):
        w = np.array([invariants_of(k) for k in window])
        spread = w.max(axis=0) - w.min(axis=0)
        out += [("|X''| spread", float(spread[0])), ("|X'''| spread", float(spread[1])),
                ("|X''xX'''| spread", float(spread[2]))]
    return out


def force_signature(mass: float, sig: Signature) -> Signature:
    """Signature of the force F = m X'': |F| = m w1, |F'| = m w2, |F x F'| = m^2 w3."""
    if not mass > 0:
        raise NonPositiveMass(f"mass must be positive, got {mass}")
    meta = dict(sig.meta, mass=float(mass))
    return Signature(sig.s, mass * sig.w1, mass * sig.w2, mass**2 * sig.w3, meta)
