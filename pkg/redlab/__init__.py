"""Borel reductions into sequence spaces, checked at truncation scale."""
from .errors import RedlabError
from .hierarchy import ReducibilityRegistry
from .reductions import gen_params, reduce_point, validate_schedule
from .relations import DECIDERS

__version__ = "0.1.0"

__all__ = ["DECIDERS", "RedlabError", "ReducibilityRegistry", "gen_params", "reduce_point", "validate_schedule"]
