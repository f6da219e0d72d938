"""Multipole solvers and decoupling diagnostics for elastic scattering by a ball."""
from .ball_solver import (
    BallScatterer,
    BoundaryKind,
    MultipoleSolution,
    boundary_residuals,
    boundary_traction,
    eval_field,
    eval_scalar_vector_parts,
    far_field,
    kupradze_quantities,
    solve_ball,
)
from .decoupling import decoupling_residual, farfield_correspondence, reflect_check
from .errors import (
    DegenerateModeError,
    DomainError,
    ElastodecError,
    GridError,
    MultipoleIndexError,
    OrderOverflowError,
    PreconditionError,
    RegularityError,
    SamplingError,
)
from .geometry import admissibility, curvature_mesh, curvature_parametric
from .metrics import farfield_distance, hausdorff, stability_modulus
from .wavefuncs import IncidentWave, WaveParams

__version__ = "0.1.0"
