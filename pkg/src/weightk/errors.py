"""Exception hierarchy.

``InputError`` subclasses signal malformed input (CLI exit code 2); ``IdentityFailure``
signals that a mathematical identity did not hold (exit code 1).
"""


class WeightKError(Exception):
    pass


class InputError(WeightKError):
    pass


class IdentityFailure(WeightKError):
    pass


class CompositionNonzero(InputError):
    pass


class IncompatibleMap(InputError):
    pass


class UnsupportedRing(InputError):
    pass


class NotContractible(WeightKError):
    pass


class NotPure(WeightKError):
    pass


class UnregisteredFunctor(InputError):
    pass


class NoTensorRegistered(InputError):
    pass


class InvalidTable(InputError):
    def __init__(self, invariant: str, detail: str = ""):
        self.invariant = invariant
        msg = invariant if not detail else f"{invariant}: {detail}"
        super().__init__(msg)


class NoDualityFlag(InputError):
    pass


class MalformedExpression(InputError):
    pass


class MissingGysinMap(InputError):
    pass


class NonFreeClass(IdentityFailure):
    pass


class UncountableAtom(InputError):
    pass


class NotCellular(InputError):
    pass


class Mismatch(IdentityFailure):
    pass


class SchemaError(InputError):
    def __init__(self, path, field: str, detail: str = ""):
        self.path = path
        self.field = field
        super().__init__(f"{path}: field {field!r}" + (f": {detail}" if detail else ""))


class UnknownSuite(InputError):
    pass
