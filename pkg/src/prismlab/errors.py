"""Exception hierarchy shared by all modules."""


class PrismlabError(Exception):
    """Base class for every error raised by prismlab."""


class NotAUnit(PrismlabError, ArithmeticError):
    pass


class RingMismatch(PrismlabError, ValueError):
    pass


class PrecisionExhausted(PrismlabError, ArithmeticError):
    pass


class NotInMaximalIdeal(PrismlabError, ValueError):
    pass


class NoSolution(PrismlabError, ArithmeticError):
    pass


class UnitIdeal(PrismlabError, ArithmeticError):
    pass


class NotArtinian(PrismlabError, ValueError):
    pass


class NotLocal(PrismlabError, ValueError):
    pass


class NotFree(PrismlabError, ValueError):
    def __init__(self, message, generators=None, module_length=None, ring_length=None):
        super().__init__(message)
        self.generators = generators
        self.module_length = module_length
        self.ring_length = ring_length


class WindowTooSmall(PrismlabError, ValueError):
    pass


class NotDistinguished(PrismlabError, ValueError):
    pass


class MembershipFailed(PrismlabError, ArithmeticError):
    def __init__(self, message, system=None):
        super().__init__(message)
        self.system = system


class NormalizationFailed(PrismlabError, ArithmeticError):
    pass


class NoOrientationFound(PrismlabError, ValueError):
    def __init__(self, message, linear_parts=None):
        super().__init__(message)
        self.linear_parts = linear_parts


class NotInvertibleModM(PrismlabError, ValueError):
    pass


class CommutationFailed(PrismlabError, ArithmeticError):
    pass


# --- input layer -----------------------------------------------------------

class InputError(PrismlabError, ValueError):
    """Malformed user input (expressions or spec documents)."""


class ParseError(InputError):
    def __init__(self, message, position=None, line=None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if position is not None:
            where.append(f"col {position + 1}")
        super().__init__(f"{message} ({', '.join(where)})" if where else message)
        self.position = position
        self.line = line


class UnknownVariable(InputError):
    pass


class ExponentTooLarge(InputError):
    pass


class MissingField(InputError):
    pass


class ValidationError(InputError):
    pass
