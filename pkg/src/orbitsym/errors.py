"""Exception hierarchy used across the package.

Every failure that callers are expected to handle is a subclass of
OrbitsymError, so `except OrbitsymError` catches exactly the documented
failure modes and nothing else.
"""

from __future__ import annotations


class OrbitsymError(Exception):
    """Base class for all documented failures."""


class BadParameter(OrbitsymError):
    """A constructor argument is out of its documented range."""


class SizeLimit(OrbitsymError):
    """The object exceeds a hard size cap."""


class NoIdentity(OrbitsymError):
    """A multiplication table has no two-sided identity."""


class NoInverse(OrbitsymError):
    """Some element of a multiplication table has no inverse."""


class NonAssociative(OrbitsymError):
    """A multiplication table fails associativity; reports the first bad triple."""


class BadGaloisExponent(OrbitsymError):
    """Galois action requested for an exponent not coprime to the conductor."""


class DimensionMismatch(OrbitsymError):
    """Matrix or vector shapes are incompatible."""


class GroupMismatch(OrbitsymError):
    """Two objects live over different groups."""


class ValidationFailure(OrbitsymError):
    """A character table failed its orthogonality or degree checks."""


class NotIrreducible(OrbitsymError):
    """An operation requiring an irreducible character got a reducible one."""


class NotACharacter(OrbitsymError):
    """Class-function input is not a genuine character."""


class NotCyclicModuleCharacter(OrbitsymError):
    """Some irreducible multiplicity exceeds its degree."""


class SearchBudgetExceeded(OrbitsymError):
    """A backtracking search hit its node or size budget before finishing."""


class NotAbelian(OrbitsymError):
    """An abelian-only operation was handed a nonabelian group."""


class NotGenerating(OrbitsymError):
    """The given elements do not generate the group."""


class RelationViolated(OrbitsymError):
    """Assigned matrices contradict a multiplication relation of the group."""


class Singular(OrbitsymError):
    """A matrix that must be invertible is singular."""


class NotRationalIdealCharacter(OrbitsymError):
    """The character is not a rational multiple-free ideal-component character."""


class NotSpanning(OrbitsymError):
    """An orbit does not span the ambient space."""


class NotCyclic(OrbitsymError):
    """No generic point was found; the module may not be cyclic."""


class PersistentMismatch(OrbitsymError):
    """Theory and oracle disagree even after resampling."""


class NotAGenericSymmetry(OrbitsymError):
    """A permutation lies outside the symmetry group in question."""


class BadWitnessData(OrbitsymError):
    """Witness ingredients fail their hypotheses; names the first violator."""


class SchemaError(OrbitsymError):
    """Serialized input does not match its schema; carries a JSON-pointer path."""
