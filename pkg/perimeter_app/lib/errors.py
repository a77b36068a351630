class PerimeterAppError(Exception):
    """Base class for every error the counting code raises on purpose."""


class InvalidInputError(PerimeterAppError, ValueError):
    pass


class FormulaDomainError(InvalidInputError):
    """A closed form was asked for outside the sizes where it is defined.

    `route` names the command that serves the request instead (usually the enumerator).
    """

    def __init__(self, message: str, route: str = "enumerate") -> None:
        super().__init__(message)
        self.route = route


class BudgetExceededError(PerimeterAppError):
    def __init__(self, message: str, estimate: int, budget: int) -> None:
        super().__init__(f"{message} (estimated {estimate:,} visits, budget {budget:,})")
        self.estimate = estimate
        self.budget = budget


class FormulaMisuseError(PerimeterAppError, ArithmeticError):
    """An exact division left a remainder or a count came out negative."""


class VerificationError(PerimeterAppError):
    pass
