from .field import FINITE, PRIME_INFINITE, RATIONAL, FieldError, FieldMode
from .linalg import EchelonSpace, ExactMatrix, LinearSolution, solve_linear
from .multipoly import MultiPoly, func_reduce, reduce_exponent

__all__ = [
    "FieldMode", "FieldError", "RATIONAL", "PRIME_INFINITE", "FINITE",
    "MultiPoly", "func_reduce", "reduce_exponent",
    "EchelonSpace", "ExactMatrix", "LinearSolution", "solve_linear",
]
