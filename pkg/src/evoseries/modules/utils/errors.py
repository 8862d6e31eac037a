class EvoSeriesError(Exception):
    pass


class DegenerateExpression(EvoSeriesError):
    """Constant folding met a division by an exact zero."""


class UnboundSymbol(EvoSeriesError):
    def __init__(self, name):
        super().__init__("unbound symbol: {}".format(name))
        self.name = name


class PoleEvaluation(EvoSeriesError):
    """A denominator evaluated to exactly zero."""


class AtomMergeFailure(EvoSeriesError):
    pass


class UnresolvedOperator(EvoSeriesError):
    """dx/dxx/shift nodes reached an operation that needs them resolved first."""


class SourceError(EvoSeriesError):
    def __init__(self, line, column, message, token=''):
        super().__init__("line {}, column {}: {}{}".format(line, column, message,
                                                          " ({!r})".format(token) if token else ''))
        self.line = line
        self.column = column
        self.message = message
        self.token = token


class ValidationError(EvoSeriesError):
    pass


class OrderOverflow(EvoSeriesError):
    def __init__(self, field, order, size, budget):
        super().__init__("coefficient {} of field {} has {} nodes, budget is {}".format(order, field, size, budget))
        self.field = field
        self.order = order
        self.size = size
        self.budget = budget


class StabilityViolation(EvoSeriesError):
    pass


class BlowUp(EvoSeriesError):
    pass
