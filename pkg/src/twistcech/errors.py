"""Shared exception types."""


class TwistcechError(Exception):
    pass


class CompositionNonzero(TwistcechError):
    """A supposed complex has d_out . d_in != 0."""


class CapRequired(TwistcechError):
    """An even-degree free generator needs a truncation cap."""


class DegreeMismatch(TwistcechError):
    """Element fed to an operation living over the wrong algebra or degree."""


class NotClosed(TwistcechError):
    """A twist class or differential input fails d(x) = 0."""


class MissingPullback(TwistcechError):
    """A site lacks a recorded fibre-product witness the computation needs."""


class NoGlobalForm(TwistcechError):
    """The gluing system for a global form is inconsistent."""


class NotUnique(TwistcechError):
    """Joint injectivity fails, so a glued form is not unique."""


class ValidationFailed(TwistcechError):
    """Construction was attempted on data that fails validation."""


class NotApplicable(TwistcechError):
    """A check's precondition (e.g. a formal d=0 model) does not hold."""


class DegreeOverflow(TwistcechError):
    """A product or map escapes the degree range the complex was built for."""
