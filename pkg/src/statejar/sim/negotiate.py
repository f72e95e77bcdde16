"""Server-side choice between Set-Cookie, Set-Cookie2, or both."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Mapping, Union

from ..errors import CookieSyntaxError
from ..headers import parse_cookie_request

__all__ = ["HeaderPlan", "ServerState", "negotiate_server_headers", "explain_negotiation", "header_values"]

Headers = Union[Mapping[str, str], Iterable[tuple[str, str]]]


class HeaderPlan(str, enum.Enum):
    SEND_V0_ONLY = "SendV0Only"
    SEND_V1_ONLY = "SendV1Only"
    SEND_BOTH = "SendBoth"


@dataclass(frozen=True)
class ServerState:
    v1_capable: bool = True


def header_values(headers: Headers, name: str) -> list[str]:
    pairs = headers.items() if isinstance(headers, Mapping) else headers
    wanted = name.lower()
    return [v for n, v in pairs if n.lower() == wanted]


def _advertises_v1(values: list[str]) -> bool:
    if not values:
        return False
    try:
        return parse_cookie_request(values).version >= 1
    except CookieSyntaxError:
        return False


def explain_negotiation(server_state: ServerState, request_headers: Headers) -> tuple[HeaderPlan, str]:
    """The header plan plus a short tag naming the rule that chose it."""
    if not server_state.v1_capable:
        return HeaderPlan.SEND_V0_ONLY, "negotiate.v0-server"
    cookie = header_values(request_headers, "Cookie")
    cookie2 = header_values(request_headers, "Cookie2")
    if not cookie and not cookie2:
        return HeaderPlan.SEND_BOTH, "negotiate.first-contact"
    if _advertises_v1(cookie):
        return HeaderPlan.SEND_V1_ONLY, "negotiate.cookie-v1"
    if _advertises_v1(cookie2):
        return HeaderPlan.SEND_V1_ONLY, "negotiate.cookie2-advert"
    return HeaderPlan.SEND_V0_ONLY, "negotiate.cookie-v0"


def negotiate_server_headers(server_state: ServerState, request_headers: Headers) -> HeaderPlan:
    """Which cookie response headers a server should send.

    A client that sends no cookie header at all gets both; afterwards the
    request reveals whether it understands version 1.
    """
    return explain_negotiation(server_state, request_headers)[0]
