"""Special Galilean differential invariants of space-time curves.

Moving frames, Maurer-Cartan pullbacks, signature-based equivalence,
transformation recovery and constant-invariant reconstruction.
"""

from .curvejet import (
    CurveJet, CurveSamples, Helix, Polynomial, Transformed, arc_length_table, is_st_curve,
    jet_analytic, jet_fd, jets_fd, nondegeneracy, reparameterize_by_arclength, to_arclength,
    transform_jet,
)
from .errors import (
    DegenerateJet, DomainError, GalinvError, IndexOutOfRange, InvalidInvariants, NoOverlap,
    NonPositiveMass, NotInGroup, NotOrthogonal, NotSpecial, RegularityError, SingularMatrix,
    StepTooLarge,
)
from .galgroup import (
    AlgebraElement, Event, GalileanElement, act, compose, embed, identity, inverse,
    left_log_derivative, make_element, random_special, snap_to_group,
)
from .invariants import (
    EquivalenceReport, Frame, RecoveryReport, Signature, equivalent, force_signature, frame,
    frame_derivative, frame_inverse, invariant_relations_check, pullback, recover_transformation,
    signature,
)
from .reconstruct import (
    ConstantInvariants, ReconstructionResult, algebra_matrix, integrate_frame, roundtrip,
)

__version__ = "0.1.0"
