"""Exception hierarchy shared by every module of the package."""


class SftWeylError(Exception):
    """Base class for all errors raised by sftweyl."""


class ParseError(SftWeylError):
    """Malformed input text; carries a 1-based line and column."""

    def __init__(self, message, line=0, column=0):
        self.message = message
        self.line = line
        self.column = column
        super().__init__(f"{line}:{column}: {message}")


class ValidationError(SftWeylError):
    pass


class UnknownGenerator(ParseError):
    pass


class WindowOverflow(ParseError):
    pass


class NonHomogeneous(SftWeylError):
    pass


class MixedSignature(SftWeylError):
    pass


class WindowMismatch(SftWeylError):
    pass


class WindowNotContained(SftWeylError):
    pass


class HbarPresent(SftWeylError):
    pass


class EvenSummand(SftWeylError):
    pass


class MasterFails(SftWeylError):
    pass


class NoDivisorForm(SftWeylError):
    pass


class WindowTooSmall(SftWeylError):
    pass


class NotClosed(SftWeylError):
    pass


class NotDSpace(SftWeylError):
    pass


class ZeroWeightMonomial(SftWeylError):
    pass


class FundamentalFails(SftWeylError):
    pass


class WrongEnd(SftWeylError):
    pass


class SelfTestFailed(SftWeylError):
    pass
