"""Persistent cookie file: one tab-separated line per cookie.

Field order (version first)::

    version name value domain path effective_domain effective_path
    origin_host origin_port secure expires max_age comment comment_url
    port created_at extras

``\\N`` marks an absent value.  Backslash, tab, CR and LF inside a field are
written as ``\\\\``, ``\\t``, ``\\r`` and ``\\n``.  ``port`` is ``*`` when
any port is allowed, ``=`` for the same port only, otherwise the Port
attribute text as received.  ``extras`` is a JSON list of ``[name, value]``
pairs.  Lines starting with ``#`` are comments.  Session cookies are never
written.
"""

from __future__ import annotations

import json
import re
from typing import Optional

from .errors import CookieFileError
from .headers import CookieSpec, PortKind, PortSpec
from .matching import DomainPattern, HostName

__all__ = ["FIELDS", "HEADER", "dump_jar", "load_jar"]

FIELDS = (
    "version",
    "name",
    "value",
    "domain",
    "path",
    "effective_domain",
    "effective_path",
    "origin_host",
    "origin_port",
    "secure",
    "expires",
    "max_age",
    "comment",
    "comment_url",
    "port",
    "created_at",
    "extras",
)
HEADER = "# statejar cookie file\n# " + "\t".join(FIELDS) + "\n"

_NULL = "\\N"
_ESCAPES = {"\\": "\\\\", "\t": "\\t", "\n": "\\n", "\r": "\\r"}
_UNESCAPES = {"\\": "\\", "t": "\t", "n": "\n", "r": "\r"}


def _escape(value: Optional[object]) -> str:
    if value is None:
        return _NULL
    return "".join(_ESCAPES.get(c, c) for c in str(value))


def _unescape(text: str, lineno: int) -> Optional[str]:
    if text == _NULL:
        return None

    def sub(m: re.Match) -> str:
        if m.group(1) not in _UNESCAPES:
            raise CookieFileError(lineno, f"bad escape \\{m.group(1)}")
        return _UNESCAPES[m.group(1)]

    return re.sub(r"\\(.?)", sub, text)


def _port_field(spec: PortSpec) -> str:
    if spec.kind is PortKind.ANY:
        return "*"
    if spec.kind is PortKind.SAME:
        return "="
    return spec.echo_value() or ""


def dump_jar(jar) -> bytes:
    lines = [HEADER]
    for c in jar.cookies():
        if c.is_session:
            continue
        s = c.spec
        row = [
            s.version,
            s.name,
            s.value,
            s.domain,
            s.path,
            str(c.effective_domain),
            c.effective_path,
            c.origin_host.text,
            c.origin_port,
            "TRUE" if s.secure else "FALSE",
            s.expires,
            s.max_age,
            s.comment,
            s.comment_url,
            _port_field(s.port_spec),
            c.created_at,
            json.dumps([list(e) for e in s.extras]) if s.extras else None,
        ]
        lines.append("\t".join(_escape(v) for v in row) + "\n")
    return "".join(lines).encode("utf-8")


def _int(text: Optional[str], what: str, lineno: int, optional: bool = True) -> Optional[int]:
    if text is None:
        if optional:
            return None
        raise CookieFileError(lineno, f"{what} is required")
    try:
        return int(text)
    except ValueError:
        raise CookieFileError(lineno, f"{what} is not an integer: {text!r}") from None


def _parse_line(line: str, lineno: int):
    from .jar import StoredCookie

    parts = line.split("\t")
    if len(parts) != len(FIELDS):
        raise CookieFileError(lineno, f"expected {len(FIELDS)} fields, got {len(parts)}")
    f = dict(zip(FIELDS, (_unescape(p, lineno) for p in parts)))
    if f["version"] not in ("0", "1"):
        raise CookieFileError(lineno, f"version must be 0 or 1, got {f['version']!r}")
    if f["secure"] not in ("TRUE", "FALSE"):
        raise CookieFileError(lineno, f"secure must be TRUE or FALSE, got {f['secure']!r}")
    for required in ("name", "value", "effective_domain", "effective_path", "origin_host", "port"):
        if f[required] is None:
            raise CookieFileError(lineno, f"{required} is required")

    port = f["port"]
    try:
        if port == "*":
            port_spec = PortSpec()
        elif port == "=":
            port_spec = PortSpec(PortKind.SAME)
        else:
            port_spec = PortSpec.from_attribute(port)
        extras = tuple((n, v) for n, v in json.loads(f["extras"])) if f["extras"] else ()
        spec = CookieSpec(
            name=f["name"],
            value=f["value"],
            domain=f["domain"],
            path=f["path"],
            expires=_int(f["expires"], "expires", lineno),
            max_age=_int(f["max_age"], "max_age", lineno),
            secure=f["secure"] == "TRUE",
            comment=f["comment"],
            comment_url=f["comment_url"],
            port_spec=port_spec,
            version=int(f["version"]),
            extras=extras,
        )
        return StoredCookie(
            spec=spec,
            origin_host=HostName.parse(f["origin_host"]),
            origin_port=_int(f["origin_port"], "origin_port", lineno, optional=False),
            effective_domain=DomainPattern.parse(f["effective_domain"]),
            effective_path=f["effective_path"],
            created_at=_int(f["created_at"], "created_at", lineno, optional=False),
            is_session=False,
        )
    except CookieFileError:
        raise
    except ValueError as exc:
        raise CookieFileError(lineno, str(exc)) from None


def load_jar(data: bytes, jar):
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise CookieFileError(1, f"not UTF-8: {exc}") from None
    for lineno, line in enumerate(text.split("\n"), 1):
        line = line.rstrip("\r")
        if not line or line.startswith("#"):
            continue
        jar.add(_parse_line(line, lineno))
    return jar
