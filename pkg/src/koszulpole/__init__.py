"""Koszul cohomology, Milnor algebras and pole order filtrations of projective hypersurfaces."""

from .fields import GF, QQ, FieldSpec
from .koszul import Hypersurface, KoszulReport, analyze, milnor_dims, smooth_series, syzygy_space, thm5_basis
from .linalg import BACKEND, DEFAULT_PRIMES, DegreeMatrix, Solver
from .parse import parse_poly
from .points import PointSet, cb_check, certified_defect, corC1_check, defect, parse_points, verify_nodes
from .poly import HomPoly, RingCtx, render
from .spectral import curve_report, e1_table, e2_table, surface_report

__all__ = [
    "BACKEND", "DEFAULT_PRIMES", "DegreeMatrix", "FieldSpec", "GF", "HomPoly", "Hypersurface", "KoszulReport",
    "PointSet", "QQ", "RingCtx", "Solver", "analyze", "cb_check", "certified_defect", "corC1_check", "curve_report",
    "defect", "e1_table", "e2_table", "milnor_dims", "parse_points", "parse_poly", "render", "smooth_series",
    "surface_report", "syzygy_space", "thm5_basis", "verify_nodes",
]
