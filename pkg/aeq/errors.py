class AeqError(Exception):
    """Base class for every error raised by the aeq package."""


class InputError(AeqError):
    """
    Malformed input: a bad file, an invalid parameter, or an invalid record.

    Args:
        message: Human readable description
        field: Name/path of the offending field, e.g. "points[3]"
        line: Line number in the source document when known
    """

    def __init__(self, message, field=None, line=None):
        self.field = field
        self.line = line
        location = []
        if line is not None:
            location.append(f"line {line}")
        if field is not None:
            location.append(field)
        prefix = f"{', '.join(location)}: " if location else ""
        super().__init__(prefix + message)


class ToleranceError(InputError):
    pass


class CoincidentPointsError(InputError):
    def __init__(self, pair, distance):
        self.pair = pair
        self.distance = distance
        i, j = pair
        super().__init__(
            f"points {i} and {j} coincide (distance {distance:.3e})",
            field=f"points[{i}],points[{j}]",
        )


class NotAlmostEquidistantError(AeqError):
    def __init__(self, witness):
        self.witness = witness
        super().__init__(
            f"not almost-equidistant: no unit pair among points {witness}"
        )


class SimplexError(AeqError):
    pass


class CliqueLimitError(AeqError):
    def __init__(self, n, limit):
        self.n = n
        self.limit = limit
        super().__init__(
            f"exact clique search is limited to {limit} vertices (got {n}); "
            "use the heuristic clique mode (--heuristic-clique)"
        )


class AuditError(AeqError):
    pass
