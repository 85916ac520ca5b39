"""Exception types and the pass/fail record returned by checkers."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


class CoarseHexError(Exception):
    """Base class for all errors raised by this package."""


class InvalidInputError(CoarseHexError, ValueError):
    """An argument violates a documented precondition."""


class InternalContradiction(CoarseHexError, RuntimeError):
    """A branch the underlying theorem rules out was reached.

    Seeing this means the implementation is wrong, not the input.
    """


class ResourceLimitError(CoarseHexError):
    """An input exceeds a configured size cap."""


@dataclass(frozen=True)
class Check:
    """Outcome of a verification: ``ok`` plus the first violated condition."""

    ok: bool
    reason: str | None = None
    detail: dict[str, Any] = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.ok

    @classmethod
    def passed(cls, **detail: Any) -> "Check":
        return cls(True, None, detail)

    @classmethod
    def failed(cls, reason: str, **detail: Any) -> "Check":
        return cls(False, reason, detail)

    def to_json(self) -> dict[str, Any]:
        return {"ok": self.ok, "reason": self.reason, "detail": self.detail}
