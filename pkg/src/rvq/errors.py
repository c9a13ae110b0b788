"""Exception hierarchy shared across the package."""


class RVQError(Exception):
    """Base class for all library errors."""


class MalformedText(RVQError):
    """Input text is not a two-row permutation description."""


class LetterCountError(RVQError):
    """A letter does not occur exactly twice (or the alphabet is too small)."""


class EmptyRow(RVQError):
    """An operation would leave one of the two rows empty."""


class MoveUndefined(RVQError):
    """The requested induction move is not defined at this vertex."""


class ReducibleSeed(RVQError):
    """Class enumeration was started from a reducible permutation."""


class BudgetExceeded(RVQError):
    """A configured element/vertex budget was hit.

    The partial result, when one exists, is attached as ``partial``.
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class ReverseArrowMissing(RVQError):
    """No arrow of the requested kind enters this vertex."""


class ReverseArrowAmbiguous(RVQError):
    """More than one arrow of one kind enters a vertex (cannot happen in a
    Rauzy class; kept as an internal trap)."""


class IllegalPosition(RVQError):
    """A letter insertion violates the simple-extension position rules."""


class AlphabetMismatch(RVQError):
    """Two permutations do not differ by exactly one letter."""


class NotSplittable(RVQError):
    """The chosen singularity cannot be split as requested."""


class OrbitTooSmall(RVQError):
    """Internal consistency failure while splitting a singularity."""


class ParityError(RVQError):
    """An order that must be odd is even."""


class CaseUnmatched(RVQError):
    """The extension of an arrow does not fall into a supported case."""


class ConventionViolated(RVQError):
    """A strict generalized permutation lacks a duplicate in one of the rows."""


class InconsistentGenus(RVQError):
    """Genus from singularity orders disagrees with homology rank (bug trap)."""


class NotOmegaPreserving(RVQError):
    """A matrix does not preserve the intersection form by conjugation."""


class NonSymplecticGenerator(RVQError):
    """A mod-p generator does not preserve the symplectic form."""


class NonDividingOrder(RVQError):
    """A subgroup order fails to divide the ambient group order (bug trap)."""


class CriterionInapplicable(RVQError):
    """The hyperellipticity criterion's precondition does not hold."""


class UnknownLabel(RVQError):
    """Unrecognized canonical representative label."""


class OutOfRange(RVQError):
    """A canonical representative parameter is outside its legal range."""
