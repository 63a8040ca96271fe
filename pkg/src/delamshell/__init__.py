"""Layered Kirchhoff-Love shells with structural cohesive interfaces.

Composite plies are modelled by flat triangular shell layers (constant-strain
membrane plus a cubic plate bending field); delamination between them by
conforming cohesive elements whose interface opening is reconstructed from
the shell kinematics, which lets the mesh be much coarser than the cohesive
zone.  Includes the DCB / ENF / MMB / SLB benchmark models, a displacement-
controlled quasi-static solver and the closed-form reference curves.
"""

from .laminate import (OrthotropicPly, PlyLayup, BendingRigidity,
                       MembraneStiffness, LaminateSection, reduced_stiffness,
                       transform_stiffness, bending_rigidity,
                       membrane_stiffness, effective_rigidities_slb,
                       section_from_layup, builtin_materials, load_materials)
from .plate import TriangleGeometry, triangle_local_frame, k_plate
from .shell import k_shell, k_membrane, f_int_shell
from .cohesive import (CohesiveProperties, CohesiveState, StructuralCE,
                       penalty_stiffness, damage_update, d_ce_matrix,
                       opening_vector, shape_w, shape_theta, b_ce,
                       k_ce_and_f_int)
from .quadrature import cowper_13
from .mesh import (BenchmarkGeometry, LayeredModel, default_geometry,
                   build_model, precrack_contact, boundary_and_load_sets)
from .solver import (SolverSettings, LoadDisplacementCurve, GlobalSystem,
                     run_analysis)
from .analytic import (AnalyticCurve, dcb_curve, enf_curve, mmb_curve,
                       slb_curve, bk_toughness)
from .config import RunConfig, parse_config, defaults_text
from .errors import (DelamshellError, MaterialError, DegenerateElementError,
                     ModelError, ConfigError, ConvergenceError)

__version__ = "0.1.0"
