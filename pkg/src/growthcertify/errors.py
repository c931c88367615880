"""Exception hierarchy shared by all modules."""


class GrowthCertifyError(Exception):
    """Base class for every error raised by this package."""


class WordError(GrowthCertifyError):
    pass


class UnknownGenerator(WordError):
    pass


class MalformedToken(WordError):
    pass


class RankMismatch(WordError):
    pass


class IdentityHasNoRoot(WordError):
    pass


class LawError(GrowthCertifyError):
    pass


class ArityMismatch(LawError):
    pass


class LawOverflow(LawError):
    """A law constructor would exceed the configured length cap."""


class ElementCapExceeded(GrowthCertifyError):
    """Ball enumeration touched more elements than allowed.

    ``partial`` carries whatever was completed (a census or element list),
    ``radius`` the last radius that was fully enumerated.
    """

    def __init__(self, message, radius=None, partial=None):
        super().__init__(message)
        self.radius = radius
        self.partial = partial


class NotInverse(GrowthCertifyError):
    def __init__(self, generator, residue):
        super().__init__(
            f"claimed inverse fails on generator {generator}: residue {residue}"
        )
        self.generator = generator
        self.residue = residue


class NotCommuting(GrowthCertifyError):
    pass


class ExponentCapExceeded(GrowthCertifyError):
    pass


class QuotientLawFails(GrowthCertifyError):
    def __init__(self, witness):
        super().__init__(f"law does not hold in the abelian quotient on {witness}")
        self.witness = witness


class VerificationFailed(GrowthCertifyError):
    """A certificate failed independent re-verification (always a bug)."""


class CapExceeded(GrowthCertifyError):
    pass


class SpecError(GrowthCertifyError):
    """Invalid group-spec file; ``where`` addresses the offending field."""

    def __init__(self, where, message):
        super().__init__(f"{where}: {message}")
        self.where = where
