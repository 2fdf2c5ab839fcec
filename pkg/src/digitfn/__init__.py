"""Quasiadditive and quasimultiplicative digital functions.

Evaluation by block splitting, decision procedures on exact rational linear
representations, and central-limit constants with numerical cross-checks.
"""

from .digits import count_block, gray_weight, naf, naf_weight, to_expansion
from .quasi import ADDITIVE, MULTIPLICATIVE, QuasiSpec, eval_by_splitting, split_blocks, verify_identity
from .regular import LinearRepresentation, Transducer, check_quasiadditive, check_quasimultiplicative, minimize

__all__ = [
    "ADDITIVE", "MULTIPLICATIVE", "LinearRepresentation", "QuasiSpec", "Transducer",
    "check_quasiadditive", "check_quasimultiplicative", "count_block", "eval_by_splitting",
    "gray_weight", "minimize", "naf", "naf_weight", "split_blocks", "to_expansion", "verify_identity",
]

__version__ = "0.1.0"
