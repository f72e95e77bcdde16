"""Cookie storage: replacement, expiry, session end, selection and ordering."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace
from typing import Callable, Iterator, Optional

from .context import RequestContext
from .headers import CookieSpec, PortKind
from .matching import (
    DomainPattern,
    HostName,
    domain_match,
    path_match,
    port_match,
    validate_domain_v0,
    validate_domain_v1,
)
from .verdict import Reason, Verdict

__all__ = [
    "FixedClock",
    "StoredCookie",
    "StoreResult",
    "StoreOutcome",
    "Jar",
    "default_path",
]

Clock = Callable[[], int]


class FixedClock:
    """A manually advanced clock; jars never read the system time."""

    def __init__(self, now: int = 0) -> None:
        self.now = now

    def __call__(self) -> int:
        return self.now

    def advance(self, seconds: int) -> int:
        self.now += seconds
        return self.now


def default_path(request_path: str) -> str:
    """The request path up to and including its right-most ``/``."""
    return request_path[: request_path.rfind("/") + 1] or "/"


@dataclass(frozen=True)
class StoredCookie:
    spec: CookieSpec
    origin_host: HostName
    origin_port: int
    effective_domain: DomainPattern
    effective_path: str
    created_at: int
    is_session: bool
    # Insertion order, used only to break created_at ties deterministically.
    seq: int = field(default=0, compare=False)

    @property
    def key(self) -> tuple[str, str, str]:
        return (self.spec.name, self.effective_domain.text, self.effective_path)

    @property
    def host_only(self) -> bool:
        return self.spec.domain is None

    @property
    def expiry(self) -> Optional[int]:
        if self.spec.version == 0:
            return self.spec.expires
        if self.spec.max_age is None:
            return None
        return self.created_at + self.spec.max_age

    def expired(self, now: int) -> bool:
        expiry = self.expiry
        return expiry is not None and expiry <= now

    def domain_ok(self, host: HostName) -> bool:
        # Without a Domain attribute a cookie goes back only to its own host.
        if self.host_only:
            return DomainPattern.for_host(host).text == self.effective_domain.text
        return domain_match(host, self.effective_domain)

    def matches(self, ctx: RequestContext) -> bool:
        return (
            self.domain_ok(ctx.host)
            and path_match(ctx.path, self.effective_path)
            and port_match(ctx.port, self.origin_port, self.spec.port_spec)
            and (ctx.secure_channel or not self.spec.secure)
        )


class StoreResult(str, enum.Enum):
    STORED = "Stored"
    REPLACED = "Replaced"
    DELETED = "Deleted"
    REJECTED = "Rejected"


@dataclass(frozen=True)
class StoreOutcome:
    result: StoreResult
    cookie: Optional[StoredCookie] = None
    # The entry that was replaced or deleted, if any.
    previous: Optional[StoredCookie] = None
    reason: Optional[Reason] = None
    detail: Optional[Verdict] = None

    def __str__(self) -> str:
        if self.reason is not None:
            return f"{self.result.value}({self.reason.value})"
        return self.result.value


def _is_session(spec: CookieSpec) -> bool:
    if spec.discard:
        return True
    if spec.version == 0:
        return spec.expires is None
    return spec.max_age is None


class Jar:
    """A keyed set of cookies; ``(name, domain, path)`` is unique.

    Mutations are not synchronized.  Share a jar between threads only behind
    a lock of your own.
    """

    def __init__(
        self,
        clock: Optional[Clock] = None,
        max_total: int = 300,
        max_per_domain: int = 20,
    ) -> None:
        self.clock: Clock = clock if clock is not None else FixedClock()
        self.max_total = max_total
        self.max_per_domain = max_per_domain
        self._entries: dict[tuple[str, str, str], StoredCookie] = {}
        self._seq = 0

    def __len__(self) -> int:
        return len(self._entries)

    def __iter__(self) -> Iterator[StoredCookie]:
        return iter(self.cookies())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Jar):
            return NotImplemented
        return self._entries == other._entries

    def __repr__(self) -> str:
        return f"Jar({self.cookies()!r})"

    def cookies(self) -> list[StoredCookie]:
        return sorted(self._entries.values(), key=lambda c: (c.created_at, c.seq))

    def get(self, name: str, domain: str, path: str) -> Optional[StoredCookie]:
        return self._entries.get((name, domain, path))

    def _next_seq(self) -> int:
        self._seq += 1
        return self._seq

    def add(self, cookie: StoredCookie) -> None:
        """Insert an already-built entry as is (used when loading files)."""
        if cookie.seq == 0:
            cookie = _with_seq(cookie, self._next_seq())
        else:
            self._seq = max(self._seq, cookie.seq)
        self._entries[cookie.key] = cookie

    def store(self, spec: CookieSpec, ctx: RequestContext) -> StoreOutcome:
        """Store a cookie received in the response to ``ctx``.

        Privacy policy must already have approved it; the Domain and Port
        attributes are re-validated here.
        """
        if spec.domain is not None:
            try:
                attr = DomainPattern.parse(spec.domain)
            except ValueError:
                return StoreOutcome(StoreResult.REJECTED, reason=Reason.INVALID_DOMAIN)
            validate = validate_domain_v0 if spec.version == 0 else validate_domain_v1
            verdict = validate(ctx.host, attr)
            if not verdict.accepted:
                return StoreOutcome(StoreResult.REJECTED, reason=Reason.INVALID_DOMAIN, detail=verdict)
            domain = attr if spec.version == 0 else attr.dotted()
        else:
            domain = DomainPattern.for_host(ctx.host)
        if spec.port_spec.kind is PortKind.LIST and ctx.port not in spec.port_spec.ports:
            return StoreOutcome(StoreResult.REJECTED, reason=Reason.INVALID_PORT)

        now = self.clock()
        path = spec.path if spec.path is not None else default_path(ctx.path)
        key = (spec.name, domain.text, path)
        existing = self._entries.get(key)
        cookie = StoredCookie(
            spec=spec,
            origin_host=ctx.host,
            origin_port=ctx.port,
            effective_domain=domain,
            effective_path=path,
            created_at=now,
            is_session=_is_session(spec),
            seq=existing.seq if existing else 0,
        )
        if spec.max_age == 0 or cookie.expired(now):
            self._entries.pop(key, None)
            return StoreOutcome(StoreResult.DELETED, previous=existing)
        if existing is not None:
            self._entries[key] = cookie
            return StoreOutcome(StoreResult.REPLACED, cookie=cookie, previous=existing)
        cookie = _with_seq(cookie, self._next_seq())
        self._entries[key] = cookie
        self._enforce_limits(cookie)
        return StoreOutcome(StoreResult.STORED, cookie=cookie)

    def _enforce_limits(self, keep: StoredCookie) -> None:
        def oldest(candidates: list[StoredCookie]) -> StoredCookie:
            return min(
                (c for c in candidates if c.key != keep.key),
                key=lambda c: (c.created_at, c.seq),
            )

        same_domain = [c for c in self._entries.values() if c.effective_domain.text == keep.effective_domain.text]
        while len(same_domain) > self.max_per_domain:
            victim = oldest(same_domain)
            del self._entries[victim.key]
            same_domain.remove(victim)
        while len(self._entries) > self.max_total:
            del self._entries[oldest(list(self._entries.values())).key]

    def select(self, ctx: RequestContext, now: Optional[int] = None) -> list[StoredCookie]:
        """Cookies to send with ``ctx``, most specific path first.

        Equal path lengths keep creation order.
        """
        if now is None:
            now = self.clock()
        chosen = [c for c in self._entries.values() if not c.expired(now) and c.matches(ctx)]
        chosen.sort(key=lambda c: (-len(c.effective_path), c.created_at, c.seq))
        return chosen

    def purge_expired(self, now: Optional[int] = None) -> int:
        if now is None:
            now = self.clock()
        doomed = [k for k, c in self._entries.items() if c.expired(now)]
        for k in doomed:
            del self._entries[k]
        return len(doomed)

    def end_session(self) -> int:
        doomed = [k for k, c in self._entries.items() if c.is_session or c.spec.discard]
        for k in doomed:
            del self._entries[k]
        return len(doomed)

    def save(self) -> bytes:
        from .cookiefile import dump_jar

        return dump_jar(self)

    @classmethod
    def load(cls, data: bytes, clock: Optional[Clock] = None) -> "Jar":
        from .cookiefile import load_jar

        return load_jar(data, cls(clock))



def _with_seq(cookie: StoredCookie, seq: int) -> StoredCookie:
    return replace(cookie, seq=seq)
