"""Trace events and their one-record-per-line text form.

Each line is a run of tab-separated ``key=value`` fields in a fixed order;
empty fields are omitted.  Tabs, newlines and backslashes inside values are
backslash-escaped, so every event stays on one line and golden-file diffs
stay local.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Optional

__all__ = ["EventKind", "TraceEvent", "format_trace", "parse_trace"]


class EventKind(str, enum.Enum):
    COOKIE_ACCEPTED = "CookieAccepted"
    COOKIE_REJECTED = "CookieRejected"
    COOKIE_SENT = "CookieSent"
    COOKIE_SUPPRESSED = "CookieSuppressed"
    CACHE_STORED = "CacheStored"
    CACHE_SERVED = "CacheServed"
    SET_COOKIE_STRIPPED = "SetCookieStripped"
    NEGOTIATED = "Negotiated"
    SESSION_ENDED = "SessionEnded"


_FIELDS = ("step", "kind", "rule", "client", "host", "name", "domain", "path", "reason", "detail")
_ESCAPES = {"\\": "\\\\", "\t": "\\t", "\n": "\\n", "\r": "\\r"}
_UNESCAPES = {"\\": "\\", "t": "\t", "n": "\n", "r": "\r"}


def _escape(text: str) -> str:
    return "".join(_ESCAPES.get(c, c) for c in text)


def _unescape(text: str) -> str:
    out = []
    chars = iter(text)
    for c in chars:
        if c == "\\":
            nxt = next(chars, "")
            if nxt not in _UNESCAPES:
                raise ValueError(f"bad escape \\{nxt} in {text!r}")
            out.append(_UNESCAPES[nxt])
        else:
            out.append(c)
    return "".join(out)


@dataclass(frozen=True)
class TraceEvent:
    step: int
    kind: EventKind
    rule: str
    client: Optional[str] = None
    host: Optional[str] = None
    # Cookie key: name, effective domain, effective path.
    cookie: Optional[tuple[str, str, str]] = None
    reason: Optional[str] = None
    detail: Optional[str] = None

    def to_line(self) -> str:
        name = domain = path = None
        if self.cookie is not None:
            name, domain, path = self.cookie
        values = (
            str(self.step), self.kind.value, self.rule, self.client, self.host,
            name, domain, path, self.reason, self.detail,
        )
        return "\t".join(f"{k}={_escape(v)}" for k, v in zip(_FIELDS, values) if v)

    @classmethod
    def from_line(cls, line: str) -> "TraceEvent":
        values: dict[str, str] = {}
        for part in line.rstrip("\n").split("\t"):
            key, sep, value = part.partition("=")
            if not sep or key not in _FIELDS or key in values:
                raise ValueError(f"bad trace field {part!r}")
            values[key] = _unescape(value)
        try:
            step, kind, rule = int(values["step"]), EventKind(values["kind"]), values["rule"]
        except (KeyError, ValueError) as exc:
            raise ValueError(f"bad trace line {line!r}: {exc}") from None
        cookie = None
        if "name" in values:
            cookie = (values["name"], values.get("domain", ""), values.get("path", ""))
        return cls(step, kind, rule, values.get("client"), values.get("host"), cookie,
                   values.get("reason"), values.get("detail"))


def format_trace(events: Iterable[TraceEvent]) -> str:
    return "".join(e.to_line() + "\n" for e in events)


def parse_trace(text: str) -> list[TraceEvent]:
    return [TraceEvent.from_line(line) for line in text.splitlines() if line.strip()]
