"""Newton polygons of Artin-Schreier curves: predictions, strata and a brute-force oracle."""

from .covers import (
    BranchDatum,
    CoverSpec,
    Exactness,
    ds_prank,
    exactness_class,
    hodge_lower_bound,
    reduce_artin_schreier,
    rh_genus,
    swan_conductors,
)
from .families import construct_theorem4, construct_theorem5, frequency_report, oort_witness
from .fpoly import RationalFunction, parse_rational_function
from .polygon import (
    PARABOLA,
    NewtonPolygon,
    PiecewiseLinear,
    amalgamate,
    evaluate,
    from_slopes,
    lattice_points_below,
    lies_above,
    min_gap,
    parse_slopes,
    scaled,
)
from .strata import is_unlikely_polygon, moduli_dims, unlikely_family_report
from .zeta import build_field, count_points, curve_from_function, l_polynomial, newton_polygon_of_L, verify_prediction

__version__ = "0.1.0"
