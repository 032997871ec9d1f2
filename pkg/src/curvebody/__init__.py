"""Two-body kinematics and dynamics on the 3-sphere and hyperbolic 3-space.

Points are unit biquaternions over the ring R[u]/(u^2 - sigma) with
sigma = +1 (sphere) or -1 (hyperbolic space), viewed through Beltrami charts.
"""

from .dynamics import PotentialSpec, eom_rhs, integrate, potential_eval, total_energy
from .errors import *  # noqa: F401,F403
from .kinematics import (
    CenterOfMass,
    KinematicRates,
    PhaseState,
    RelativeSet,
    TwoBodyConfig,
    center_of_mass,
    kinematic_rates,
    per_particle_relative,
    reconstruct_points,
    relative_variables,
)
from .lagrangian import (
    FROZEN_CORRECTIONS,
    KineticReport,
    PolarRelative,
    audit,
    kinetic_chart,
    kinetic_cm_rel,
    kinetic_embedding,
    kinetic_equal_mass,
    kinetic_polar,
    kinetic_small_r,
    kinetic_y12,
    polar_decompose,
)
from .ring import Biquaternion, RingScalar, RingVector3, SpaceSign, bq_mul, bq_norm, bq_normalize
from .space import (
    ChartPoint,
    Isometry,
    embedding_to_point,
    geodesic_distance,
    metric_tensor,
    pair_transform,
    point_to_embedding,
    point_velocity,
    random_isometry,
    vector_add,
)

__version__ = "0.1.0"
