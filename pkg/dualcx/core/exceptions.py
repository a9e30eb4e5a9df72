from typing import Any, Optional


class DualComplexError(Exception):
    """Base error for the package"""


class InvalidInputError(DualComplexError, ValueError):
    """Input violates an operation's preconditions"""


class CertificationError(DualComplexError):
    """An identity the construction guarantees did not hold"""

    def __init__(self, message: str, witness: Optional[Any] = None):
        super().__init__(message)
        self.witness = witness

    def __str__(self) -> str:
        base = super().__str__()
        if self.witness is None:
            return base
        return f"{base} (witness: {self.witness})"


class EmbeddingError(CertificationError):
    """The input complex no longer embeds in the current dual complex"""
