"""Exception types shared across the package."""


class PgmError(Exception):
    """Base class for all errors raised by this package."""


class InputError(PgmError):
    """Malformed input: bad word, bad presentation text, out-of-range index."""


class InconsistentPresentation(PgmError):
    """A presentation failed its consistency test where consistency was required."""


class NotMaximalClass(PgmError):
    """The group is not of maximal class (class != n-1)."""


class FrameError(PgmError):
    """Maximal-class frame cannot be built (n too small, p even, ...)."""


class InfiniteSection(PgmError):
    """A nilpotent-quotient class step produced a section of unbounded order."""


class NotPGroupSection(PgmError):
    """A quotient section has order not a power of the working prime."""


class TailsSystemError(PgmError):
    """Internal contradiction in the tails linear system (bug signal)."""


class NotAbelian(PgmError):
    """Abelian invariants requested for a non-abelian subgroup."""


class PsiNotHomomorphism(PgmError):
    """A relator of the exterior-square quotient has nontrivial image under psi."""


class KappaCertificationError(PgmError):
    """A sampled diagonal commutator failed to sift into kappa; carries the witness."""


class CapExceeded(PgmError):
    """An enumeration or homology cap was exceeded."""


class CorpusIntegrityError(PgmError):
    """Bundled fixture corpus failed its integrity (hash) check."""


class CheckFailure(PgmError):
    """A structural check that should hold for valid input failed."""
