class GblxError(Exception):
    """Base class for every error raised by gblx."""


class FormulaSyntaxError(GblxError):
    def __init__(self, message, offset=None):
        self.reason = message
        self.offset = offset
        if offset is not None:
            message = f"{message} (at byte {offset})"
        super().__init__(message)


class AlgebraError(GblxError):
    pass


class NotAConucleus(AlgebraError):
    pass


class CapExceeded(GblxError):
    pass


class EvaluationError(GblxError):
    pass


class DerivationError(GblxError):
    pass
