from .dense import DenseState, dense_run, unitary
from .structured import StructuredProgram, StructuredState, structured_run

__all__ = ["DenseState", "dense_run", "unitary", "StructuredProgram", "StructuredState", "structured_run"]
