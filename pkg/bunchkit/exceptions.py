"""
Custom exceptions for bunchkit
"""

from typing import Optional


class BunchkitError(Exception):
    """Base exception for workbench operations"""
    pass


class ParseError(BunchkitError):
    """Exception raised when formula or sequent text cannot be parsed"""

    def __init__(self, message: str, position: Optional[int] = None):
        if position is not None:
            message = f"{message} (at column {position + 1})"
        super().__init__(message)
        self.position = position


class SignatureError(BunchkitError):
    """Exception raised when a connective or flag is not admitted by a logic"""
    pass


class FrameError(BunchkitError):
    """Exception raised for structurally invalid frames"""
    pass


class AlgebraError(BunchkitError):
    """Exception raised for structurally invalid algebras"""
    pass


class InputError(BunchkitError):
    """Exception raised for malformed JSON documents, stores or heaps"""
    pass


class BudgetExhausted(BunchkitError):
    """Exception raised when a search runs out of its time or size budget"""

    def __init__(self, message: str, explored: int = 0):
        super().__init__(message)
        self.explored = explored
