"""Quantization characters of toric momentum data and index checks on 1D model spaces.

Modules: :mod:`lattice_core` (exact lattice algebra), :mod:`polytope`
(rational polyhedra), :mod:`character` (formal characters),
:mod:`quantize` (quantization and reduction), :mod:`dirac1d` (deformed
Dirac operators on the cylinder and disc), :mod:`cli`.
"""

from .character import FormalCharacter, add, delta, evaluate, indicator, restrict, scale, tensor
from .dirac1d import (
    ConstantT,
    EpsilonFamily,
    IndexResult,
    ModelSpec1D,
    ProfileMu,
    ProperFunction,
    analytic_zero_mode_count,
    build_cylinder_operator,
    build_disc_operator,
    compute_index,
    deformation_sweep,
    probe_acyclicity,
    product_index,
)
from .lattice_core import complete_to_basis, hermite_normal_form, primitive
from .polytope import (
    Halfspace,
    Polyhedron,
    contains,
    delzant_check,
    is_bounded,
    lattice_points,
    parse_polytope,
    slice_polyhedron,
    vertices,
)
from .quantize import localization_report, quantize, reduce, riemann_roch, verify_qr

__version__ = "0.1.0"
