class TwistableException(Exception):
    def __init__(self, message, **details):
        self.message = message
        self.details = details
        super().__init__(self.message)


class ConfigurationError(TwistableException):
    pass


class MatchingViolation(TwistableException):
    def __init__(self, weights, message="matching conditions violated"):
        self.weights = tuple(weights)
        super().__init__(f"{message} > {self.weights}", weights=self.weights)


class PeripheralComponent(TwistableException):
    def __init__(self, weights, label):
        self.weights = tuple(weights)
        self.label = label
        super().__init__(
            f"component {self.weights} is peripheral around {label}",
            weights=self.weights,
            label=label,
        )


class FillsSurface(TwistableException):
    pass


class UnknownGenerator(TwistableException):
    def __init__(self, letter, available):
        self.letter = letter
        self.available = available
        super().__init__(
            f"unknown generator {letter} (atlas has {available})",
            letter=letter,
            available=available,
        )


class BudgetExceeded(TwistableException):
    pass


class PoolTooSmall(TwistableException):
    pass


class Disconnected(TwistableException):
    def __init__(self, radius):
        self.radius = radius
        super().__init__(f"endpoints disconnected within radius {radius}", radius=radius)


class SpanDegenerate(TwistableException):
    pass


class CompletionFailed(TwistableException):
    pass


class AnnularTarget(TwistableException):
    pass


class EmptyProjection(TwistableException):
    pass


class Disjoint(TwistableException):
    pass


class UncertifiedGeodesic(TwistableException):
    pass


class NotMaximalComplexity(TwistableException):
    pass


class EndpointMismatch(TwistableException):
    pass


class Type2PlacementViolation(TwistableException):
    pass


class OracleFailure(TwistableException):
    pass
