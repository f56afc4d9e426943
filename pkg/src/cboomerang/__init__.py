"""c-differential and c-boomerang uniformity over finite fields."""

from .boomerang_system import BoomerangSystemParams, count_solutions, from_boomerang, from_inverse_boomerang
from .errors import EnumerationCapError, FieldError, HypothesisError, NotBijectiveError
from .field import GF, make_field
from .gtds import GTDS, RoundSpec, bct_bound, ddt_bound, make_hades
from .polynomial import UniPoly, make_monomial_spec
from .space import FieldMap, VectorSpace, monomial_map
from .uniformity import bct_table, boomerang_uniformity, ddt_table, differential_uniformity

__version__ = "0.1.0"

__all__ = [
    "BoomerangSystemParams", "count_solutions", "from_boomerang", "from_inverse_boomerang",
    "EnumerationCapError", "FieldError", "HypothesisError", "NotBijectiveError",
    "GF", "make_field",
    "GTDS", "RoundSpec", "bct_bound", "ddt_bound", "make_hades",
    "UniPoly", "make_monomial_spec",
    "FieldMap", "VectorSpace", "monomial_map",
    "bct_table", "boomerang_uniformity", "ddt_table", "differential_uniformity",
]
