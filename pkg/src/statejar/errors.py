"""Exception types shared across the package."""

from __future__ import annotations


class CookieSyntaxError(ValueError):
    """A cookie header could not be parsed or serialized.

    ``code`` is a stable class name (``MissingNameValue``, ``InvalidDate`` ...)
    that the CLI and the conformance corpus report instead of the message.
    """

    def __init__(self, code: str, message: str = "") -> None:
        self.code = code
        super().__init__(f"{code}: {message}" if message else code)


class InvalidDate(CookieSyntaxError):
    def __init__(self, message: str = "") -> None:
        super().__init__("InvalidDate", message)


class CookieFileError(ValueError):
    """Malformed persistent cookie file."""

    def __init__(self, lineno: int, message: str) -> None:
        self.lineno = lineno
        super().__init__(f"line {lineno}: {message}")


class ScriptError(ValueError):
    """An exchange script is malformed or violates its integrity rules."""

    def __init__(self, step: int | None, message: str, lineno: int | None = None) -> None:
        self.step = step
        self.lineno = lineno
        where = []
        if step is not None:
            where.append(f"step {step}")
        if lineno is not None:
            where.append(f"line {lineno}")
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(prefix + message)
