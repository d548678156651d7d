class QedPolyError(Exception):
    """Base class for all errors raised by qedpoly."""


class TadpoleContraction(QedPolyError):
    pass


class Disconnected(QedPolyError):
    pass


class SameEdge(QedPolyError):
    pass


class InvalidQed(QedPolyError):
    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


class NoExternals(QedPolyError):
    pass


class SchemaError(QedPolyError):
    pass


class ParseError(QedPolyError):
    def __init__(self, message, line=None, field=None):
        self.line = line
        self.field = field
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field!r}")
        super().__init__(f"{message} ({', '.join(where)})" if where else message)
