"""Exception hierarchy shared by every module in the package."""


class AutlError(Exception):
    """Base class for all package errors."""


class InvalidGroup(AutlError):
    """A table or permutation set does not describe a finite group."""


class InvalidPermutation(InvalidGroup):
    pass


class ClosureCapExceeded(AutlError):
    pass


class ParentMismatch(AutlError):
    pass


class NotNormal(AutlError):
    pass


class NotNilpotent(AutlError):
    pass


class NotAbelian(AutlError):
    pass


class NotPGroup(AutlError):
    pass


class InvalidParameter(AutlError):
    pass


class OracleCapExceeded(AutlError):
    pass


class EnumerationCapExceeded(AutlError):
    """Raised when an automorphism search produces more maps than allowed."""

    def __init__(self, message: str, partial_count: int):
        super().__init__(message)
        self.partial_count = partial_count


class SearchTimeout(AutlError):
    def __init__(self, message: str, partial_count: int = 0):
        super().__init__(message)
        self.partial_count = partial_count
