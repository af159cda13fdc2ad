"""Porous scaffold construction via radial basis function interpolation.

A volumetric mesh (triangles, tetrahedra, or hexahedra) is turned into an
implicit field by assigning +1 to mesh vertices and -1 to interior centers,
fitting an RBF interpolant over those constraints, sampling the field on a
voxel grid, and extracting iso-surfaces.  The anisotropic variant measures
distance to line segments joining face centers to cell centers, which opens
pore channels along those directions; isotropic point-only interpolation,
TPMS level sets, and seeded mesh perturbation are included as baselines.
"""

from .errors import (
    DegenerateResultError,
    DuplicateCenterError,
    HeaderMismatchError,
    InvalidBBoxError,
    ParseError,
    ScaffoldError,
    SingularMatrixError,
    ValidationError,
)
from .distance import dist_point_point, dist_point_segment, dist_segment_segment
from .mesh import (
    CenterSegment,
    NodalValue,
    VolumetricMesh,
    assemble_center_set,
    build_segments,
    compute_centers,
    load_mesh,
    make_mesh,
    save_mesh,
)
from .rbf import (
    Basis,
    InterpolationModel,
    assemble_matrix,
    eval_basis,
    fit,
    fit_mesh,
    fit_with_report,
    load_model,
    pairwise_distance,
    save_model,
    solve_weights,
)
from .grid import (
    VoxelGrid,
    make_grid,
    make_grid_2d,
    read_volume,
    sample_field,
    solid_fraction,
    write_volume,
)
from .isosurface import (
    ContourSet,
    TriangleSoup,
    euler_characteristic,
    export_obj,
    export_pgm,
    load_obj,
    marching_cubes,
    marching_squares,
    surface_area,
)
from .tpms import TpmsField, eval_tpms, sample_tpms
from .perturb import PerturbSpec, perturb_mesh

__version__ = "0.1.0"

__all__ = [
    "Basis",
    "CenterSegment",
    "ContourSet",
    "DegenerateResultError",
    "DuplicateCenterError",
    "HeaderMismatchError",
    "InterpolationModel",
    "InvalidBBoxError",
    "NodalValue",
    "ParseError",
    "PerturbSpec",
    "ScaffoldError",
    "SingularMatrixError",
    "TpmsField",
    "TriangleSoup",
    "ValidationError",
    "VolumetricMesh",
    "VoxelGrid",
    "assemble_center_set",
    "assemble_matrix",
    "build_segments",
    "compute_centers",
    "dist_point_point",
    "dist_point_segment",
    "dist_segment_segment",
    "euler_characteristic",
    "eval_basis",
    "eval_tpms",
    "export_obj",
    "export_pgm",
    "fit",
    "fit_mesh",
    "fit_with_report",
    "load_mesh",
    "load_model",
    "load_obj",
    "make_grid",
    "make_grid_2d",
    "make_mesh",
    "marching_cubes",
    "marching_squares",
    "pairwise_distance",
    "perturb_mesh",
    "read_volume",
    "sample_field",
    "sample_tpms",
    "save_mesh",
    "save_model",
    "solid_fraction",
    "solve_weights",
    "surface_area",
    "write_volume",
]
