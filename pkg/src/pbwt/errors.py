"""Exception types shared across the package."""


class PBWTError(Exception):
    """Base class for all library errors."""


class AlphabetError(PBWTError):
    pass


class UnknownSymbol(PBWTError):
    def __init__(self, position, symbol=None):
        self.position = position
        self.symbol = symbol
        super().__init__(f"unknown symbol {symbol!r} at position {position}")


class TerminatorMisplaced(PBWTError):
    def __init__(self, position):
        self.position = position
        super().__init__(f"terminator '$' found at internal position {position}")


class MissingTerminator(PBWTError):
    pass


class IndexOutOfRange(PBWTError, IndexError):
    pass


class NotEnoughOccurrences(PBWTError):
    pass


class NotEnoughValues(PBWTError):
    pass


class NoSuchChild(PBWTError):
    pass


class RootHasNoParent(PBWTError):
    pass


class DepthOutOfRange(PBWTError):
    pass


class NotPPreceded(PBWTError):
    """Raised when a p-only operation is asked about a statically preceded row."""


class RangeOutOfBounds(PBWTError):
    pass


class DuplicatePattern(PBWTError):
    def __init__(self, i, j):
        self.i, self.j = i, j
        super().__init__(f"patterns {i} and {j} have the same prev encoding")


class CounterOverflow(PBWTError):
    pass


class FormatError(PBWTError):
    """Corrupt or incompatible index file."""
