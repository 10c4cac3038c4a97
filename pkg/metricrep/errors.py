class MetricrepError(ValueError):
    pass


class MetricViolation(MetricrepError):
    pass


class Asymmetric(MetricViolation):
    def __init__(self, x: int, y: int):
        super().__init__(f"distance matrix is not symmetric at ({x}, {y})")
        self.points = (x, y)


class NegativeDistance(MetricViolation):
    def __init__(self, x: int, y: int):
        super().__init__(f"negative distance at ({x}, {y})")
        self.points = (x, y)


class NonzeroDiagonal(MetricViolation):
    def __init__(self, x: int):
        super().__init__(f"nonzero self-distance at {x}")
        self.points = (x,)


class TriangleViolation(MetricViolation):
    def __init__(self, x: int, y: int, z: int):
        super().__init__(f"triangle inequality violated: d({x},{z}) > d({x},{y}) + d({y},{z})")
        self.points = (x, y, z)


class ProfileShapeMismatch(MetricrepError):
    pass


class CommitteeSizeError(MetricrepError):
    pass


class MetricMissing(MetricrepError):
    pass


class ExactModeUnsupported(MetricrepError):
    pass


class PartialMetric(MetricrepError):
    pass


class EnumerationCapExceeded(MetricrepError):
    def __init__(self, n: int, cap: int):
        super().__init__(f"{n} voters exceed the enumeration cap of {cap}")
        self.n = n
        self.cap = cap


class AlphaOutOfRange(MetricrepError):
    pass


class NonIntegralK(MetricrepError):
    pass


class KTooLarge(MetricrepError):
    pass


class FormatError(MetricrepError):
    pass
