class PGLError(ValueError):
    """Base class; carries an optional residual that triggered the refusal."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class DimensionMismatch(PGLError):
    pass


class FlatPreservationError(PGLError):
    """The pullback of a map does not carry the target flat subspace into the source one."""


class NotCoisotropicError(PGLError):
    pass


class NotFlatError(PGLError):
    """A differential or one-form leaves the admissible covector rows."""


class StructureConstantError(PGLError):
    pass


class WrongSideError(PGLError):
    pass


class MembershipError(PGLError):
    pass


class NotComposableError(PGLError):
    pass


class IncompatibleFamilyError(PGLError):
    pass


class NotInImageError(PGLError):
    pass
