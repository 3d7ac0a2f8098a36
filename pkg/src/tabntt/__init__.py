"""Number theoretic transforms and integer multiplication over Z/P with
precomputed lookup tables standing in for modular arithmetic."""

from .bigmult import CapacityError, multiply, multiply_many
from .counts import Cost, OpCounts
from .ntt import ntt_forward, ntt_inverse
from .numtheory import find_field_prime, find_root_of_unity, is_prime
from .planner import PlanError, TableBudgetError, TransformPlan, make_mult_plan, make_plan
from .tables import TableSet, preprocess, tabular_mulmod

__version__ = "0.1.0"

__all__ = [
    "CapacityError", "Cost", "OpCounts", "PlanError", "TableBudgetError", "TableSet", "TransformPlan",
    "find_field_prime", "find_root_of_unity", "is_prime", "make_mult_plan", "make_plan", "multiply",
    "multiply_many", "ntt_forward", "ntt_inverse", "preprocess", "tabular_mulmod",
]
