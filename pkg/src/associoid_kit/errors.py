"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class AssocKitError(Exception):
    """Base class; ``witness`` carries a counterexample when one exists."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class IncompatibleGroundsError(AssocKitError):
    pass


class NotEndorelationError(AssocKitError):
    pass


class NotEquivalenceError(AssocKitError):
    pass


class NotTransversalError(AssocKitError):
    pass


class NotCommutingError(AssocKitError):
    pass


class NotBisectionError(AssocKitError):
    pass


class NotBijectionError(AssocKitError):
    pass


class GroupAxiomError(AssocKitError):
    pass


class NotSubgroupError(AssocKitError):
    pass


class StructureError(AssocKitError):
    """Malformed table or a failed law check during construction."""

    def __init__(self, message: str, witness=None, reports=None):
        super().__init__(message, witness)
        self.reports = list(reports or [])


class ActionError(AssocKitError):
    pass
