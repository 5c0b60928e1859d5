class RB3Error(Exception):
    """Base class for errors raised by rb3lie."""


class InputError(RB3Error, ValueError):
    """Malformed input: bad shapes, mismatched dimensions, unknown names."""


class ParseError(InputError):
    """A file or rational literal could not be parsed."""


class SkewSymmetryError(InputError):
    """Structure constants or actions that are not skew-symmetric."""


class PreconditionError(RB3Error, ValueError):
    """An operation was called on objects that fail its precondition."""


class BudgetExceededError(RB3Error):
    """An exhaustive search would exceed the configured candidate budget."""

    def __init__(self, required, budget):
        super().__init__(f"search needs {required} candidates, budget is {budget}")
        self.required = required
        self.budget = budget
