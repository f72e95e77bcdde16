"""Per-transaction request context."""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace
from typing import Iterable, Optional
from urllib.parse import urlsplit

from .matching import DomainPattern, HostName

__all__ = ["Trigger", "RequestContext"]


class Trigger(str, enum.Enum):
    """Why a user agent issued a request the user did not ask for directly."""

    INLINE = "InlineEntity"
    REDIRECT = "Redirect3xx"
    FORM_AUTO_SUBMIT = "FormAutoSubmit"


@dataclass(frozen=True)
class RequestContext:
    """One transaction as the user agent sees it.

    A context without a ``trigger`` is an origin (user-initiated)
    transaction.  Derived contexts point at a snapshot of their origin, and
    that snapshot's ``origin_cookie_domains`` lists the domains of cookies
    sent or received in it.
    """

    host: HostName
    port: int = 80
    path: str = "/"
    secure_channel: bool = False
    trigger: Optional[Trigger] = None
    origin: Optional["RequestContext"] = None
    origin_cookie_domains: tuple[DomainPattern, ...] = ()

    def __post_init__(self) -> None:
        if (self.trigger is None) != (self.origin is None):
            raise ValueError("derived contexts need both a trigger and an origin")
        if self.origin is not None and not self.origin.is_origin:
            raise ValueError("origin reference must be an origin transaction")
        if not 1 <= self.port <= 65535:
            raise ValueError(f"port out of range: {self.port}")
        if not self.path.startswith("/"):
            raise ValueError(f"request path must start with '/': {self.path!r}")

    @classmethod
    def from_url(cls, url: str, **kwargs) -> "RequestContext":
        parts = urlsplit(url if "//" in url else "http://" + url)
        if not parts.hostname:
            raise ValueError(f"no host in {url!r}")
        secure = parts.scheme == "https"
        port = parts.port or (443 if secure else 80)
        return cls(
            HostName.parse(parts.hostname),
            port=port,
            path=parts.path or "/",
            secure_channel=secure,
            **kwargs,
        )

    @property
    def is_origin(self) -> bool:
        return self.trigger is None

    @property
    def kind(self) -> str:
        return "Origin" if self.is_origin else "Derived"

    @property
    def origin_ctx(self) -> "RequestContext":
        return self if self.origin is None else self.origin

    def derive(self, url: str, trigger: Trigger) -> "RequestContext":
        """A derived request caused by this transaction, sharing its origin."""
        return RequestContext.from_url(url, trigger=trigger, origin=self.origin_ctx)

    def with_origin_cookie_domains(self, domains: Iterable[DomainPattern]) -> "RequestContext":
        if self.origin is not None:
            return replace(self, origin=self.origin.with_origin_cookie_domains(domains))
        return replace(self, origin_cookie_domains=tuple(domains))
