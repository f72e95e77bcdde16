"""Flat ``key=value`` dumps of parse results.

The CLI prints these and the conformance corpus compares against them, so a
corpus expectation is simply a line of CLI output.
"""

from __future__ import annotations

from typing import Optional

from .headers import CookieRequestParse, CookieSpec, PortKind

__all__ = ["dump_set_cookie", "dump_cookie_request", "format_dump"]

Dump = list[tuple[str, str]]


def _opt(value: Optional[object]) -> str:
    return "" if value is None else str(value)


def _flag(value: bool) -> str:
    return "true" if value else "false"


def _port(spec: CookieSpec) -> str:
    ps = spec.port_spec
    if ps.kind is PortKind.LIST:
        return "PortList:" + ",".join(str(p) for p in ps.ports)
    return ps.kind.value


def dump_set_cookie(specs: list[CookieSpec]) -> Dump:
    out: Dump = [("cookies", str(len(specs)))]
    for i, s in enumerate(specs):
        out += [
            (f"{i}.name", s.name),
            (f"{i}.value", s.value),
            (f"{i}.version", str(s.version)),
            (f"{i}.domain", _opt(s.domain)),
            (f"{i}.path", _opt(s.path)),
            (f"{i}.expires", _opt(s.expires)),
            (f"{i}.max_age", _opt(s.max_age)),
            (f"{i}.secure", _flag(s.secure)),
            (f"{i}.discard", _flag(s.discard)),
            (f"{i}.comment", _opt(s.comment)),
            (f"{i}.comment_url", _opt(s.comment_url)),
            (f"{i}.port", _port(s)),
            (f"{i}.extras", str(len(s.extras))),
        ]
        for j, (name, raw) in enumerate(s.extras):
            out.append((f"{i}.extra.{j}", name if raw is None else f"{name}={raw}"))
    return out


def dump_cookie_request(parsed: CookieRequestParse) -> Dump:
    out: Dump = [("version", str(parsed.version)), ("entries", str(len(parsed.entries)))]
    for i, e in enumerate(parsed.entries):
        out += [
            (f"{i}.name", e.name),
            (f"{i}.value", e.value),
            (f"{i}.path", _opt(e.path)),
            (f"{i}.domain", _opt(e.domain)),
            (f"{i}.port", _opt(e.port)),
        ]
    return out


def format_dump(dump: Dump) -> str:
    return "".join(f"{k}={v}\n" for k, v in dump)
