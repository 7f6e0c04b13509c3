"""Exceptions raised by the readers, writers and option system."""

from typing import Optional


class FormatError(ValueError):
    """Malformed input text; names the offending line and token."""

    def __init__(self, reason: str, lineno: Optional[int] = None, token: Optional[str] = None, source: str = ""):
        self.reason = reason
        self.lineno = lineno
        self.token = token
        self.source = source
        where = f"line {lineno}: " if lineno is not None else ""
        what = f" (token '{token}')" if token is not None else ""
        prefix = f"{source}: " if source else ""
        super().__init__(f"{prefix}{where}{reason}{what}")


class OptionError(ValueError):
    """Unknown option key, bad option value, or inconsistent option combination."""
    pass
