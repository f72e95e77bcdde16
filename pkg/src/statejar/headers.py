"""Parsing and serialization of Set-Cookie, Set-Cookie2, Cookie and Cookie2.

Two grammars are supported.  ``Mode.V0`` is the Netscape ``Set-Cookie``
syntax: values are bare runs of characters and only ``domain``, ``path``,
``expires`` and ``secure`` are understood.  ``Mode.V1`` is the
``Set-Cookie2`` syntax: values may be quoted strings and the attribute set
grows ``Comment``, ``CommentURL``, ``Discard``, ``Max-Age``, ``Port`` and
``Version``.

Anything not understood by the active grammar is kept, verbatim, in
``CookieSpec.extras`` so it survives a parse/serialize cycle.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field, replace
from typing import TYPE_CHECKING, Iterable, Optional, Sequence

from .dates import format_http_date, parse_http_date
from .errors import CookieSyntaxError

if TYPE_CHECKING:
    from .jar import StoredCookie

__all__ = [
    "Mode",
    "PortKind",
    "PortSpec",
    "ANY_PORT",
    "CookieSpec",
    "CookieEntry",
    "CookieRequestParse",
    "parse_set_cookie",
    "parse_cookie_request",
    "serialize_set_cookie",
    "serialize_cookie_header",
    "quote",
    "unquote",
]


class Mode(str, enum.Enum):
    V0 = "v0"
    V1 = "v1"


class PortKind(str, enum.Enum):
    ANY = "AnyPort"
    SAME = "SamePortOnly"
    LIST = "PortList"


@dataclass(frozen=True)
class PortSpec:
    """Which request ports a cookie may be returned to.

    ``raw`` is the attribute value exactly as received (quotes included) so
    ``$Port`` can echo it; it takes no part in equality.
    """

    kind: PortKind = PortKind.ANY
    ports: tuple[int, ...] = ()
    raw: Optional[str] = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if (self.kind is PortKind.LIST) != bool(self.ports):
            raise ValueError("ports must be non-empty exactly when kind is PortList")
        for p in self.ports:
            if not 1 <= p <= 65535:
                raise ValueError(f"port out of range: {p}")
        object.__setattr__(self, "ports", tuple(sorted(set(self.ports))))

    @classmethod
    def from_attribute(cls, raw: Optional[str]) -> "PortSpec":
        if raw is None:
            return cls(PortKind.SAME)
        text = unquote(raw)
        ports = []
        for item in text.split(","):
            item = item.strip()
            if not item.isdigit() or not 1 <= int(item) <= 65535:
                raise CookieSyntaxError("InvalidAttribute", f"bad Port list {raw!r}")
            ports.append(int(item))
        return cls(PortKind.LIST, tuple(ports), raw)

    def attribute_value(self) -> Optional[str]:
        """Canonical wire value; ``None`` means a bare ``Port``."""
        if self.kind is PortKind.LIST:
            return '"' + ",".join(str(p) for p in self.ports) + '"'
        return None

    def echo_value(self) -> Optional[str]:
        return self.raw if self.raw is not None else self.attribute_value()


ANY_PORT = PortSpec()

_V1_ONLY_FIELDS = ("max_age", "comment", "comment_url")


@dataclass(frozen=True)
class CookieSpec:
    name: str
    value: str
    domain: Optional[str] = None
    path: Optional[str] = None
    expires: Optional[int] = None
    max_age: Optional[int] = None
    discard: bool = False
    secure: bool = False
    comment: Optional[str] = None
    comment_url: Optional[str] = None
    port_spec: PortSpec = ANY_PORT
    version: int = 0
    extras: tuple[tuple[str, Optional[str]], ...] = ()

    def __post_init__(self) -> None:
        if self.version not in (0, 1):
            raise ValueError(f"unsupported cookie version {self.version}")
        if self.max_age is not None and self.max_age < 0:
            raise ValueError("max_age must be non-negative")
        if self.version == 0:
            if any(getattr(self, f) is not None for f in _V1_ONLY_FIELDS):
                raise ValueError("v0 cookies carry no Max-Age/Comment/CommentURL")
            if self.discard or self.port_spec.kind is not PortKind.ANY:
                raise ValueError("v0 cookies carry no Discard/Port")
        object.__setattr__(self, "extras", tuple(tuple(e) for e in self.extras))


@dataclass(frozen=True)
class CookieEntry:
    """One cookie in a Cookie request header, with its ``$`` attributes."""

    name: str
    value: str
    path: Optional[str] = None
    domain: Optional[str] = None
    # Verbatim $Port value; "" for a bare $Port.
    port: Optional[str] = None


@dataclass(frozen=True)
class CookieRequestParse:
    version: int
    entries: tuple[CookieEntry, ...]


# ---------------------------------------------------------------- quoting

_SEPARATORS = set('()<>@,;:\\"/[]?={} \t')


def _is_token(text: str) -> bool:
    return bool(text) and all(33 <= ord(c) < 127 and c not in _SEPARATORS for c in text)


def quote(text: str) -> str:
    """Quote ``text`` unless it is already a bare token."""
    if _is_token(text):
        return text
    return _quote_always(text)


def _quote_always(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def unquote(text: str) -> str:
    if len(text) >= 2 and text[0] == '"' and text[-1] == '"':
        return re.sub(r"\\(.)", r"\1", text[1:-1], flags=re.DOTALL)
    return text


# ---------------------------------------------------------------- scanning


class _Scanner:
    def __init__(self, text: str) -> None:
        self.text = text
        self.pos = 0

    def at_end(self) -> bool:
        return self.pos >= len(self.text)

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos] in " \t":
            self.pos += 1

    def read_until(self, stops: str) -> str:
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos] not in stops:
            self.pos += 1
        return self.text[start : self.pos]

    def read_quoted(self) -> str:
        """Consume a quoted string and return it with its quotes."""
        start = self.pos
        self.pos += 1
        while self.pos < len(self.text):
            c = self.text[self.pos]
            if c == "\\":
                if self.pos + 1 >= len(self.text):
                    break
                self.pos += 2
                continue
            self.pos += 1
            if c == '"':
                return self.text[start : self.pos]
        raise CookieSyntaxError("MalformedQuotedString", f"unterminated quoted string at {start}")


# A leading weekday followed by a comma, as in both RFC 1123 and RFC 850 dates.
_WEEKDAY_COMMA = re.compile(r"[A-Za-z]{3,9}[ \t]*,")


def _read_expires(sc: _Scanner) -> str:
    start = sc.pos
    m = _WEEKDAY_COMMA.match(sc.text, sc.pos)
    if m is not None:
        sc.pos = m.end()
    sc.read_until(";,")
    return sc.text[start : sc.pos].strip()


def _read_pairs(sc: _Scanner, mode: Mode) -> list[tuple[str, Optional[str]]]:
    """Read ``name[=value]`` items separated by ``;`` up to a ``,`` or the end."""
    pairs: list[tuple[str, Optional[str]]] = []
    while True:
        sc.skip_ws()
        name = sc.read_until("=;,").strip()
        value: Optional[str] = None
        if sc.peek() == "=":
            sc.pos += 1
            sc.skip_ws()
            if mode is Mode.V1 and sc.peek() == '"':
                value = sc.read_quoted()
                sc.skip_ws()
                if sc.peek() not in ("", ";", ","):
                    raise CookieSyntaxError(
                        "MalformedQuotedString", f"text after quoted string at {sc.pos}"
                    )
            elif pairs and name.lower() == "expires":
                value = _read_expires(sc)
            else:
                value = sc.read_until(";,").strip()
        pairs.append((name, value))
        if sc.peek() == ";":
            sc.pos += 1
            continue
        return pairs


# ---------------------------------------------------------------- Set-Cookie

_V0_ATTRS = frozenset({"domain", "path", "expires", "secure"})
_V1_ATTRS = frozenset(
    {"comment", "commenturl", "discard", "domain", "expires", "max-age", "path", "port", "secure", "version"}
)

_ATTR_FIELDS = {
    "comment": "comment",
    "commenturl": "comment_url",
    "discard": "discard",
    "domain": "domain",
    "expires": "expires",
    "max-age": "max_age",
    "path": "path",
    "port": "port_spec",
    "secure": "secure",
    "version": "version",
}


def _convert_attr(key: str, raw: Optional[str], mode: Mode) -> object:
    if key in ("secure", "discard"):
        return True
    if key == "port":
        return PortSpec.from_attribute(raw)
    if raw is None:
        raise CookieSyntaxError("InvalidAttribute", f"attribute {key!r} needs a value")
    text = unquote(raw) if mode is Mode.V1 else raw
    if key == "expires":
        return parse_http_date(text)
    if key == "max-age":
        if not text.isdigit():
            raise CookieSyntaxError("InvalidAttribute", f"bad Max-Age {raw!r}")
        return int(text)
    if key == "version":
        if text != "1":
            raise CookieSyntaxError("InvalidAttribute", f"unsupported Version {raw!r}")
        return 1
    if key in ("domain", "path") and not text:
        raise CookieSyntaxError("InvalidAttribute", f"empty {key}")
    return text


def _check_name(name: str) -> None:
    if not name:
        raise CookieSyntaxError("MissingNameValue", "empty cookie name")
    if name.startswith("$"):
        raise CookieSyntaxError("ReservedName", f"cookie name {name!r} begins with '$'")
    if any(c in name for c in "=;, \t\"") or not name.isprintable():
        raise CookieSyntaxError("InvalidName", f"bad cookie name {name!r}")


def _build_spec(pairs: list[tuple[str, Optional[str]]], mode: Mode) -> CookieSpec:
    name, value = pairs[0]
    if value is None or not name:
        raise CookieSyntaxError("MissingNameValue", "no NAME=VALUE pair")
    _check_name(name)
    if mode is Mode.V0 and any(c in value for c in " \t"):
        raise CookieSyntaxError("InvalidValue", f"whitespace in v0 value {value!r}")

    known = _V0_ATTRS if mode is Mode.V0 else _V1_ATTRS
    fields: dict[str, object] = {}
    extras: list[tuple[str, Optional[str]]] = []
    for attr, raw in pairs[1:]:
        if not attr and raw is None:
            continue
        key = attr.lower()
        if key not in known:
            extras.append((attr, raw))
            continue
        converted = _convert_attr(key, raw, mode)
        fname = _ATTR_FIELDS[key]
        # v0 leaves duplicates undefined; the last one wins.
        if mode is Mode.V1 and fname in fields and fields[fname] != converted:
            raise CookieSyntaxError("ConflictingAttribute", f"{attr} given twice with different values")
        fields[fname] = converted

    fields["version"] = 0 if mode is Mode.V0 else 1
    return CookieSpec(name=name, value=value, extras=tuple(extras), **fields)  # type: ignore[arg-type]


def parse_set_cookie(header_value: str, mode: Mode | str = Mode.V0) -> list[CookieSpec]:
    """Parse a Set-Cookie (``V0``) or Set-Cookie2 (``V1``) header value.

    Several cookies may be folded into one value, separated by commas.  The
    comma inside an ``Expires`` date never splits cookies.
    """
    mode = Mode(mode)
    sc = _Scanner(header_value)
    specs = []
    while True:
        specs.append(_build_spec(_read_pairs(sc, mode), mode))
        if sc.at_end():
            return specs
        sc.pos += 1  # the ',' between cookies
        sc.skip_ws()
        if sc.at_end():
            return specs


def _check_v1_value(value: str) -> None:
    if value.startswith('"'):
        sc = _Scanner(value)
        sc.read_quoted()
        if not sc.at_end():
            raise CookieSyntaxError("InvalidValue", f"text after quoted value {value!r}")
    elif any(c in value for c in ';,"') or value != value.strip():
        raise CookieSyntaxError("InvalidValue", f"v1 value needs quoting: {value!r}")


def _check_v0_text(what: str, text: str) -> None:
    if any(c in text for c in ";, \t"):
        raise CookieSyntaxError("InvalidValue", f"v0 {what} may not contain ';', ',' or whitespace: {text!r}")


def serialize_set_cookie(spec: CookieSpec) -> str:
    """Render ``spec`` as a header value in canonical attribute order."""
    _check_name(spec.name)
    v1 = spec.version == 1
    if v1:
        _check_v1_value(spec.value)
        fmt = quote
    else:
        _check_v0_text("value", spec.value)
        for what in ("domain", "path"):
            text = getattr(spec, what)
            if text is not None:
                _check_v0_text(what, text)
        fmt = str

    parts = [f"{spec.name}={spec.value}"]
    # Appended in alphabetical order of attribute name.
    if spec.comment is not None:
        parts.append(f"Comment={fmt(spec.comment)}")
    if spec.comment_url is not None:
        parts.append(f"CommentURL={fmt(spec.comment_url)}")
    if spec.discard:
        parts.append("Discard")
    if spec.domain is not None:
        parts.append(f"Domain={fmt(spec.domain)}")
    if spec.expires is not None:
        parts.append(f"Expires={format_http_date(spec.expires)}")
    if spec.max_age is not None:
        parts.append(f"Max-Age={spec.max_age}")
    if spec.path is not None:
        parts.append(f"Path={fmt(spec.path)}")
    if spec.port_spec.kind is not PortKind.ANY:
        port_value = spec.port_spec.attribute_value()
        parts.append("Port" if port_value is None else f"Port={port_value}")
    if spec.secure:
        parts.append("Secure")
    if v1:
        parts.append("Version=1")
    for attr, raw in spec.extras:
        parts.append(attr if raw is None else f"{attr}={raw}")
    return "; ".join(parts)


# ---------------------------------------------------------------- Cookie


def _read_request_items(text: str) -> list[tuple[str, Optional[str]]]:
    sc = _Scanner(text)
    items: list[tuple[str, Optional[str]]] = []
    while True:
        sc.skip_ws()
        if sc.at_end():
            return items
        name = sc.read_until("=;,").strip()
        value: Optional[str] = None
        if sc.peek() == "=":
            sc.pos += 1
            sc.skip_ws()
            if sc.peek() == '"':
                value = sc.read_quoted()
                sc.skip_ws()
                if sc.peek() not in ("", ";", ","):
                    raise CookieSyntaxError(
                        "MalformedQuotedString", f"text after quoted string at {sc.pos}"
                    )
            else:
                value = sc.read_until(";,").strip()
        if name or value is not None:
            items.append((name, value))
        if sc.peek() in (";", ","):
            sc.pos += 1


def parse_cookie_request(header_values: Sequence[str] | str) -> CookieRequestParse:
    """Parse every Cookie (or Cookie2) header value of one request.

    Multiple header instances behave as if folded with commas; ``;`` and ``,``
    both separate entries.  ``$Path``, ``$Domain`` and ``$Port`` bind to the
    cookie entry just before them.
    """
    if isinstance(header_values, str):
        header_values = [header_values]
    items = _read_request_items(", ".join(header_values))

    version = 0
    version_seen = False
    entries: list[CookieEntry] = []
    for name, raw in items:
        if name.startswith("$"):
            key = name[1:].lower()
            if key == "version":
                text = unquote(raw) if raw is not None else ""
                if not text.isdigit():
                    raise CookieSyntaxError("InvalidAttribute", f"bad $Version {raw!r}")
                if not entries and not version_seen:
                    version, version_seen = int(text), True
                elif int(text) != version:
                    raise CookieSyntaxError("MixedVersions", "conflicting $Version in one request")
                continue
            if key not in ("path", "domain", "port"):
                continue
            if not entries:
                raise CookieSyntaxError("OrphanAttribute", f"{name} before any cookie")
            if key == "port":
                entries[-1] = replace(entries[-1], port="" if raw is None else raw)
            elif raw is None:
                raise CookieSyntaxError("BareToken", f"{name} needs a value")
            else:
                entries[-1] = replace(entries[-1], **{key: unquote(raw)})
            continue
        if raw is None:
            raise CookieSyntaxError("BareToken", f"{name!r} has no '='")
        if not name:
            raise CookieSyntaxError("MissingNameValue", "empty cookie name")
        entries.append(CookieEntry(name, raw))
    return CookieRequestParse(version, tuple(entries))


def serialize_cookie_header(selected: Iterable["StoredCookie"], version: int) -> str:
    """Render already-ordered jar entries as a Cookie header value."""
    selected = list(selected)
    if not selected:
        return ""
    if version == 0:
        return "; ".join(f"{c.spec.name}={c.spec.value}" for c in selected)
    parts = [f"$Version={version}"]
    for c in selected:
        parts.append(f"{c.spec.name}={c.spec.value}")
        parts.append(f"$Path={_quote_always(c.effective_path)}")
        if c.spec.domain is not None:
            parts.append(f"$Domain={_quote_always(c.spec.domain)}")
        if c.spec.port_spec.kind is not PortKind.ANY:
            echo = c.spec.port_spec.echo_value()
            parts.append("$Port" if echo is None else f"$Port={echo}")
    return "; ".join(parts)

