"""Exception hierarchy shared by all kexshard modules."""


class KexshardError(Exception):
    pass


class ContractViolation(KexshardError, ValueError):
    """A caller broke a documented precondition."""


class CounterOverflow(ContractViolation):
    pass


class SizeLimitError(ContractViolation):
    pass


class EvenLengthRequired(ContractViolation):
    pass


class InsufficientData(ContractViolation):
    pass


class IncompleteShareSet(KexshardError):
    """Raised when one or more shares of a set are absent."""

    def __init__(self, missing, message=None):
        self.missing = sorted(missing)
        super().__init__(message or f"incomplete share set, missing indices {self.missing}")


class CorruptShareSet(KexshardError):
    pass


class ContainerError(KexshardError, ValueError):
    pass


class BadMagic(ContainerError):
    pass


class UnsupportedVersion(ContainerError):
    pass


class ChecksumMismatch(ContainerError):
    pass


class TruncatedContainer(ContainerError):
    pass
