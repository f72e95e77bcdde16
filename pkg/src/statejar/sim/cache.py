"""Caching-proxy decisions about response bodies and Set-Cookie headers.

Cacheability is expressed with ``Cache-Control`` directive tokens only:
``no-store`` and ``private`` keep a response out of the cache entirely, and
the extension token ``shareable-cookie`` is an origin's explicit statement
that its Set-Cookie headers may be stored and replayed with the body.
Without it a cached copy never carries Set-Cookie or Set-Cookie2.
"""

from __future__ import annotations

from dataclasses import dataclass

from .negotiate import Headers, header_values

__all__ = ["CacheDecision", "cache_decision", "cache_directives", "body_cacheable", "SHAREABLE", "COOKIE_HEADERS"]

SHAREABLE = "shareable-cookie"
COOKIE_HEADERS = ("set-cookie", "set-cookie2")


@dataclass(frozen=True)
class CacheDecision:
    store_body: bool
    store_set_cookie: bool


def cache_directives(response_headers: Headers) -> set[str]:
    out = set()
    for value in header_values(response_headers, "Cache-Control"):
        for token in value.split(","):
            token = token.strip().lower()
            if token:
                out.add(token.split("=", 1)[0].strip())
    return out


def body_cacheable(response_headers: Headers) -> bool:
    """Whether the origin marked the response cacheable (``public`` or ``max-age``)."""
    directives = cache_directives(response_headers)
    return bool(directives & {"public", "max-age", "s-maxage"})


def cache_decision(response_headers: Headers, body_cacheable: bool) -> CacheDecision:
    directives = cache_directives(response_headers)
    if directives & {"no-store", "private"}:
        return CacheDecision(False, False)
    has_cookie = any(header_values(response_headers, h) for h in COOKIE_HEADERS)
    return CacheDecision(body_cacheable, body_cacheable and has_cookie and SHAREABLE in directives)
