from __future__ import annotations

from typing import Dict, Optional


class FernhexError(Exception):
    """Base class for every error raised by fernhex."""


class InvalidInput(FernhexError, ValueError):
    """Caller supplied parameters that violate a precondition."""


class NonClosingBoundary(InvalidInput):
    pass


class BadDentCount(InvalidInput):
    pass


class DentOutOfRange(InvalidInput):
    pass


class BadDentPositions(InvalidInput):
    pass


class NonLatticeTransform(InvalidInput):
    pass


class NegativeArgument(InvalidInput):
    pass


class PreconditionViolated(InvalidInput):
    pass


class FernDoesNotFit(InvalidInput):
    def __init__(self, message: str, cell: Optional[object] = None):
        super().__init__(message)
        self.cell = cell


class InstanceTooLarge(FernhexError):
    def __init__(self, engine: str, size: int, cap: int):
        super().__init__(f"{engine}: instance size {size} exceeds cap {cap}")
        self.engine = engine
        self.size = size
        self.cap = cap


class EngineMismatch(FernhexError):
    def __init__(self, counts: Dict[str, int]):
        detail = ", ".join(f"{name}={value}" for name, value in counts.items())
        super().__init__(f"engines disagree: {detail}")
        self.counts = dict(counts)


class NonIntegralResult(FernhexError):
    pass


class DivisionByZero(FernhexError, ZeroDivisionError):
    pass
