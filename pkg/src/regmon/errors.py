"""Exception hierarchy shared by every module."""


class RegmonError(Exception):
    """Base class for all library errors."""


class UnknownGenerator(RegmonError):
    def __init__(self, name, index=None):
        self.name = name
        self.index = index
        where = "" if index is None else f" in slice {index}"
        super().__init__(f"unknown generator {name!r}{where}")


class BoundaryMismatch(RegmonError):
    def __init__(self, message, index=None):
        self.index = index
        super().__init__(message)


class AlphabetMismatch(RegmonError):
    pass


class NotScalar(RegmonError):
    pass


class ArityMismatch(RegmonError):
    def __init__(self, message, edge=None):
        self.edge = edge
        super().__init__(message)


class NotConvex(RegmonError):
    def __init__(self, report):
        self.report = report
        super().__init__(f"automaton is not convex: {report}")


class NotInImage(RegmonError):
    def __init__(self, reason):
        self.reason = reason
        super().__init__(reason)


class NotMergeable(RegmonError):
    pass


class SearchBudgetExceeded(RegmonError):
    def __init__(self, limit):
        self.limit = limit
        super().__init__(f"search budget of {limit} states exceeded")


class CapacityMismatch(RegmonError):
    pass


class IncompleteTables(RegmonError):
    pass


class TableLookupMissing(RegmonError):
    pass


class NotWordShaped(RegmonError):
    pass


class UnknownEntry(RegmonError):
    pass
