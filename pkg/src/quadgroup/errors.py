"""Exception hierarchy. Each class carries the CLI exit code it maps to."""


class QuadGroupError(Exception):
    exit_code = 3


class ParseError(QuadGroupError):
    """Malformed input file or unknown name."""

    exit_code = 2


class InvalidInput(QuadGroupError):
    """Algebraically invalid input; ``witness`` pins down the violation."""

    exit_code = 3

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class CapExceeded(QuadGroupError):
    exit_code = 4


class CheckFailed(QuadGroupError):
    """A verified identity did not hold. On valid input this is a library defect."""

    exit_code = 1

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness
