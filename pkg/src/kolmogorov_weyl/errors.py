class DomainError(ValueError):
    """Raised when an operation receives arguments outside its domain."""


class ParseError(DomainError):
    """Syntax error in an expression, with the offending position."""

    def __init__(self, message: str, text: str = "", pos: int = -1):
        self.text = text
        self.pos = pos
        if pos >= 0:
            message = f"{message} at position {pos}"
        super().__init__(message)
