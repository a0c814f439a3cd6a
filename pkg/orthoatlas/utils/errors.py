"""
Exception hierarchy. Every error carries the CLI exit code it maps to; the handlers
registered in ``create_cli`` turn them into a message on stderr and that code.
"""


class AtlasError(Exception):
    exit_code = 1

    def __init__(self, message="", **details):
        super().__init__(message)
        self.message = message
        self.details = details


class InvalidParameters(AtlasError):
    exit_code = 1


class NonFinite(InvalidParameters):
    exit_code = 1


class OutOfFamily(AtlasError):
    exit_code = 2


class OutputError(AtlasError):
    exit_code = 3


class VerificationFailed(AtlasError):
    exit_code = 4


class DegenerateElimination(AtlasError):
    pass


class GridTooSmall(AtlasError):
    pass


class NoSignatureMatch(AtlasError):
    # raw metrics travel in details["metrics"]
    pass


# non-fatal warning codes attached to results
RESOLUTION_WARNING = "ResolutionWarning"
PROVISIONAL_RULE = "ProvisionalRule"
ANALYTIC_DISAGREEMENT = "AnalyticDisagreement"
SINGULAR_SET_EMPTY = "SingularSetEmpty"
