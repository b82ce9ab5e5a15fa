"""Exception hierarchy. ``exit_code`` is what the CLI returns for each kind."""


class DhgError(Exception):
    exit_code = 2
    kind = "error"

    def payload(self):
        return {"kind": self.kind, "message": str(self)}


class ParseError(DhgError, ValueError):
    kind = "parse"

    def __init__(self, line, message):
        super().__init__(f"line {line}: {message}")
        self.line = line

    def payload(self):
        return {"kind": self.kind, "message": str(self), "line": self.line}


class DomainError(DhgError, ValueError):
    kind = "domain"


class ParameterError(DhgError, ValueError):
    kind = "parameter"


class PreconditionError(DhgError, ValueError):
    kind = "precondition"


class NoPathError(DhgError):
    kind = "no-path"


class GenerationError(DhgError):
    kind = "generation"


class CapacityError(DhgError):
    exit_code = 3
    kind = "capacity"


class ExpansionNeeded(DhgError):
    exit_code = 3
    kind = "expansion-needed"

    def __init__(self, message, required_radius):
        super().__init__(f"{message} (required radius >= {required_radius})")
        self.required_radius = required_radius

    def payload(self):
        return {"kind": self.kind, "message": str(self),
                "requiredRadius": self.required_radius}
