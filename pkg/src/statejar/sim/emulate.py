"""How historical user agents read a Set-Cookie header carrying a v1 cookie.

Navigator 3 took the first ``name=value`` pair as the cookie.  MSIE 3 took
the last pair whose name it did not recognise as a Netscape attribute, so
``Max-Age=15552000`` became the cookie's name and value.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace
from typing import Union

from ..errors import CookieSyntaxError
from ..headers import CookieSpec, Mode, parse_set_cookie

__all__ = ["ClientFlavor", "Emulated", "Ignored", "emulate_client", "emulate_spec", "V0_ATTRIBUTES"]

V0_ATTRIBUTES = frozenset({"domain", "path", "expires", "secure"})


class ClientFlavor(str, enum.Enum):
    NAVIGATOR_V3 = "NavigatorV3"
    MSIE_V3 = "MsieV3"
    RFC2965 = "Rfc2965"

    @classmethod
    def parse(cls, text: str) -> "ClientFlavor":
        aliases = {"navigator3": cls.NAVIGATOR_V3, "msie3": cls.MSIE_V3, "rfc2965": cls.RFC2965}
        return aliases.get(text.lower()) or cls(text)


@dataclass(frozen=True)
class Emulated:
    name: str
    value: str


@dataclass(frozen=True)
class Ignored:
    diagnostic: str


def _pairs(text: str) -> list[tuple[str, str]]:
    out = []
    for segment in text.split(";"):
        name, sep, value = segment.partition("=")
        if sep:
            out.append((name.strip(), value.strip()))
    return out


def emulate_client(
    flavor: ClientFlavor, set_cookie_text: str, header: str = "Set-Cookie"
) -> Union[Emulated, Ignored]:
    """The (name, value) a client of ``flavor`` would store, or why it stores nothing."""
    flavor = ClientFlavor(flavor)
    v2 = header.lower() == "set-cookie2"
    if flavor is ClientFlavor.RFC2965:
        try:
            spec = parse_set_cookie(set_cookie_text, Mode.V1 if v2 else Mode.V0)[0]
        except CookieSyntaxError as exc:
            return Ignored(str(exc))
        return Emulated(spec.name, spec.value)
    if v2:
        return Ignored(f"{flavor.value} does not understand Set-Cookie2")

    if flavor is ClientFlavor.NAVIGATOR_V3:
        first = set_cookie_text.split(";", 1)[0]
        name, sep, value = first.partition("=")
        if not sep or not name.strip():
            return Ignored("first segment is not name=value")
        return Emulated(name.strip(), value.strip())

    candidates = [(n, v) for n, v in _pairs(set_cookie_text) if n and n.lower() not in V0_ATTRIBUTES]
    if not candidates:
        return Ignored("no unrecognised name=value pair")
    return Emulated(*candidates[-1])


def emulate_spec(flavor: ClientFlavor, spec: CookieSpec) -> CookieSpec:
    """Apply a historical client's name/value choice to a v0-parsed cookie.

    The MSIE pick mirrors :func:`emulate_client`: the last pair whose name is
    not a v0 attribute.  Other flavors keep ``spec`` unchanged.
    """
    if ClientFlavor(flavor) is not ClientFlavor.MSIE_V3 or spec.version != 0:
        return spec
    candidates = [(spec.name, spec.value)]
    candidates += [(n, v) for n, v in spec.extras if v is not None and n and n.lower() not in V0_ATTRIBUTES]
    name, value = candidates[-1]
    if (name, value) == (spec.name, spec.value):
        return spec
    return replace(spec, name=name, value=value)
