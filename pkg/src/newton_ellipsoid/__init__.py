"""Newton-Ellipsoid and basic-family polynomial root finding with polynomiography."""

from .bounds import Rect, best_bound, bound, bounding_square, radical
from .ellipse import DegenerateNormal, Ellipse2, area, contains, cut, initial_disk
from .family import DSequence, DegenerateDenominator, b_m_step, d_sequence, family_direction
from .parse import PositionedParseError, format_polynomial, parse_polynomial
from .poly import Polynomial, deflate, eval_derivs, eval_poly, from_roots
from .render import BasinImage, Method, basin_grid, basin_stats, reference_roots, write_image
from .solver import (
    IncompleteRoots,
    SolveOptions,
    SolveTrace,
    Status,
    all_roots,
    bm_ellipsoid_solve,
    bm_solve,
    halfspace_has_root,
    newton_ellipsoid_solve,
    newton_solve,
)

__version__ = "0.1.0"
