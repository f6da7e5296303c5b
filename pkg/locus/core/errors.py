"""
Exception hierarchy for the locus toolkit.

Library code raises these; the CLI maps them to exit codes.
"""


class LocusError(Exception):
    """Base class for every error raised by locus."""


class FieldError(LocusError):
    """Bad field parameters: reducible modulus, wrong degree, wrong bit length, inverse of zero."""


class CodeError(LocusError):
    """Malformed linear code or message: rank deficiency, length mismatch, infeasible constraint."""


class ContainmentError(LocusError):
    """A subspace expected to contain another does not."""


class CompletenessViolation(LocusError):
    """A decoder support set does not determine the target symbol."""


class BudgetExceeded(LocusError):
    """An exact enumeration or search would exceed the configured budget."""


class HypothesisViolation(LocusError):
    """An operation was called outside the hypotheses it is defined for."""


class TransformationImpossible(LocusError):
    """A decoder transformation cannot produce a decoder for some target."""


class InvariantViolation(LocusError):
    """A checked proof obligation failed on a concrete instance."""


class ConfigError(LocusError):
    """Malformed experiment configuration."""
