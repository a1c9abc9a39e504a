"""Skateboard flip tricks as continuous rotation curves.

Tricks are curves in SO(3) starting at the identity and landing either
back at the identity or in the reversed (nose/tail swapped) configuration.
Lifting them through the quaternion double cover classifies every trick
into one of exactly four deformation classes, which add like residues
mod 4 under concatenation. The package also provides explicit homotopies
between standard tricks and a stabilization procedure that deforms a trick
with a wandering rotation axis into a constant-rate rotation.
"""

from .errors import FlipTrickError
from .homotopy import (
    Homotopy,
    NAMED_HOMOTOPIES,
    UnsupportedPair,
    VerificationReport,
    contract_double_kickflip,
    kick_to_360shuv,
    kick_to_heel,
    spread_concat,
    varial_to_540,
    verify,
)
from .lifting import (
    ContinuousLift,
    HomotopyClass,
    InsufficientContinuity,
    NotALandingLift,
    QuatPath,
    UnknownLift,
    analytic_lift,
    class_add,
    classify,
    endpoint_snap,
    lift,
)
from .exports import (
    DegenerateProjection,
    FrameSequence,
    ProjectedCurve,
    export_frames,
    frame_sequence,
    homotopy_document,
    lift_document,
    project,
    projection_document,
)
from .quat import (
    ImaginaryQuaternion,
    NonUnitAxis,
    Quaternion,
    UnitQuaternion,
    ZeroQuaternion,
    conj,
    from_axis_angle,
    inverse,
    mul,
    re,
    im,
    rho,
    rotate_vector,
    rotation_about,
)
from .so3 import (
    AmbiguousPreimage,
    IDENTITY,
    LandingConfig,
    NotARotation,
    REVERSED,
    Rotation,
    is_special_orthogonal,
    nearest_preimage,
    to_quaternion,
)
from .stabilize import (
    AxisFrame,
    DiscontinuousAngle,
    EndpointNotOnParallelCircle,
    IntersectsPerpendicularCircle,
    NearPerpendicularCircle,
    StabilizedForm,
    WobbleParams,
    fit_stabilized_form,
    linearize_angle,
    retract,
    retract_n,
    stabilize,
    unwrap_angles,
    wobble_axis,
    wobble_n,
    wobble_shuvit,
)
from .tricks import (
    Concat,
    DomainError,
    Flip,
    NotAFlip,
    OShift,
    Power,
    Primitive,
    Product,
    Reverse,
    TimeScale,
    TrickExpr,
    TrickSyntaxError,
    UnknownPrimitive,
    UnknownTrick,
    catalog,
    concat,
    evaluate,
    flip_from_sampler,
    format_expr,
    lookup,
    make_flip,
    parse,
    power,
    primitive,
    trick,
    validate_flip,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
