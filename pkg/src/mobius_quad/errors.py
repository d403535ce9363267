"""Exception hierarchy shared by all modules."""


class MobiusQuadError(Exception):
    """Base class for every error raised by this package."""


# weights

class WeightError(MobiusQuadError, ValueError):
    pass


class OddDegree(WeightError):
    pass


class NonPositiveLeading(WeightError):
    pass


class RealRootDetected(WeightError):
    pass


class DegenerateConstant(WeightError):
    pass


class WeightOverflow(MobiusQuadError, OverflowError):
    pass


class OrderTooHigh(MobiusQuadError, ValueError):
    pass


class WeightSpecError(MobiusQuadError, ValueError):
    """Malformed textual weight specification."""


# change of variables / rule construction

class DomainError(MobiusQuadError, ValueError):
    pass


class SizeOutOfRange(MobiusQuadError, ValueError):
    pass


class NonFiniteWeight(MobiusQuadError, ArithmeticError):
    pass


class NonFiniteSample(MobiusQuadError, ArithmeticError):
    def __init__(self, node: float, value: float):
        super().__init__(f"integrand is not finite at node x={node!r} (got {value!r})")
        self.node = node
        self.value = value


# reference values

class NotIntegrable(MobiusQuadError, ValueError):
    pass


class NoConvergence(MobiusQuadError, ArithmeticError):
    pass


class CrossCheckFailure(MobiusQuadError, ArithmeticError):
    pass


# convergence studies

class TooFewPoints(MobiusQuadError, ValueError):
    pass


# expression language

class ExprError(MobiusQuadError, ValueError):
    pass


class ExprSyntaxError(ExprError):
    def __init__(self, message: str, offset: int, expected: str | None = None):
        text = f"{message} at offset {offset}"
        if expected:
            text += f" (expected {expected})"
        super().__init__(text)
        self.offset = offset
        self.expected = expected


class UnknownFunction(ExprError):
    def __init__(self, name: str, offset: int):
        super().__init__(f"unknown function {name!r} at offset {offset}")
        self.name = name
        self.offset = offset


class ArityMismatch(ExprError):
    def __init__(self, name: str, expected: int, got: int, offset: int):
        super().__init__(f"{name}() takes {expected} argument(s), got {got} (offset {offset})")
        self.name = name
        self.expected = expected
        self.got = got
        self.offset = offset


class DomainViolation(ExprError, ArithmeticError):
    def __init__(self, op: str, argument: float):
        super().__init__(f"{op} is undefined for argument {argument!r}")
        self.op = op
        self.argument = argument
