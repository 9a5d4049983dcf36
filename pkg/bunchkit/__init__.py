"""
bunchkit

A semantics workbench for the bunched logics (BI, BBI, De Morgan BI,
Classical BI, the Bi-intuitionistic variants, layered graph logics,
concurrent Kleene BI and separating modal logic).

Main features:
- Parses formulas and sequents, and checks Hilbert proofs
- Checks frames and algebras against the conditions of their logic
- Evaluates formulas on finite models, under strong or UDMF clauses
- Builds complex algebras and prime filter frames, and checks both round trips
- Models stacks and heaps, and the store-indexed frames of pointer logic
- Searches for small countermodels and fuzzes soundness and persistence
"""

__version__ = "1.0.0"

from .exceptions import (
    AlgebraError, BudgetExhausted, BunchkitError, FrameError, InputError, ParseError,
    SignatureError,
)
from .syntax import Logic, LogicName, ModalClass, SigmaAxiom, parse_formula, parse_sequent
from .frames import Frame, Model, check_frame, satisfies
from .algebras import Algebra, check_algebra
from .duality import complex_algebra, prime_filter_frame
from .explorer import SearchBudget, countermodel_search
from .workbench import Workbench

__all__ = [
    'Workbench',
    'Logic',
    'LogicName',
    'ModalClass',
    'SigmaAxiom',
    'parse_formula',
    'parse_sequent',
    'Frame',
    'Model',
    'check_frame',
    'satisfies',
    'Algebra',
    'check_algebra',
    'complex_algebra',
    'prime_filter_frame',
    'SearchBudget',
    'countermodel_search',
    'BunchkitError',
    'ParseError',
    'SignatureError',
    'FrameError',
    'AlgebraError',
    'InputError',
    'BudgetExhausted',
]
