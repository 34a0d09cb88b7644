"""Exception types shared across the package."""

from __future__ import annotations


class LocsysError(Exception):
    """Base class for every error raised by locsys."""


class DimensionMismatch(LocsysError):
    pass


class FieldMismatch(LocsysError):
    pass


class ShapeError(LocsysError):
    pass


class NotAComplex(LocsysError):
    def __init__(self, degree: int):
        super().__init__(f"d_{degree - 1} o d_{degree} != 0")
        self.degree = degree


class NotAChainMap(LocsysError):
    def __init__(self, degree: int):
        super().__init__(f"chain map fails to commute with d_{degree}")
        self.degree = degree


class SimplicialIdentityViolation(LocsysError):
    def __init__(self, i: int, j: int, n: int, rule: str = ""):
        super().__init__(f"simplicial identity {rule} fails for i={i}, j={j} at level {n}")
        self.i, self.j, self.n = i, j, n


class ShapeMismatch(LocsysError):
    pass


class LawViolation(LocsysError):
    def __init__(self, which: str, witness):
        super().__init__(f"{which}: {witness!r}")
        self.which = which
        self.witness = witness


class NotAGroup(LocsysError):
    pass


class NotDiscrete(LocsysError):
    pass


class FunctorialityViolation(LocsysError):
    def __init__(self, morphism):
        super().__init__(f"functoriality fails at morphism {morphism!r}")
        self.morphism = morphism


class NaturalityViolation(LocsysError):
    def __init__(self, morphism):
        super().__init__(f"naturality fails at morphism {morphism!r}")
        self.morphism = morphism


class BaseMismatch(LocsysError):
    pass


class ObjectMismatch(LocsysError):
    pass


class UnsupportedBasePushout(LocsysError):
    pass


class NotDiscreteBase(LocsysError):
    pass


class BudgetExceeded(LocsysError):
    def __init__(self, needed: int, budget: int):
        super().__init__(f"enumeration needs {needed} items, budget is {budget}")
        self.needed = needed
        self.budget = budget


class RationalFieldUnsupported(LocsysError):
    pass


class ParseError(LocsysError):
    def __init__(self, line: int, reason: str):
        super().__init__(f"line {line}: {reason}")
        self.line = line
        self.reason = reason


class VersionMismatch(LocsysError):
    pass


class UnknownSuite(LocsysError):
    pass
