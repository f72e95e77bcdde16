"""Host, domain, path and port matching.

Domain comparisons work on DNS labels, never raw characters, so
``notshop.com`` does not tail-match ``shop.com``.  Single-label host names
are treated as ``<name>.local`` everywhere ("effective host"), which is what
lets ``Domain=.local`` share cookies across an intranet.
"""

from __future__ import annotations

import ipaddress
import re
from dataclasses import dataclass

from .headers import PortKind, PortSpec
from .verdict import ACCEPT, Reason, Verdict, reject

__all__ = [
    "HostName",
    "DomainPattern",
    "effective_host",
    "domain_match",
    "validate_domain_v0",
    "validate_domain_v1",
    "path_match",
    "port_match",
    "reach",
    "SPECIAL_TLDS",
]

# The 2-period top-level domains of the Netscape rule; everything else needs 3.
SPECIAL_TLDS = frozenset({"com", "edu", "net", "org", "gov", "mil", "int"})

_LABEL = re.compile(r"[a-z0-9_](?:[a-z0-9_-]*[a-z0-9_])?")


def _split_labels(text: str) -> tuple[str, ...]:
    labels = tuple(text.split("."))
    for label in labels:
        if not _LABEL.fullmatch(label):
            raise ValueError(f"invalid DNS label {label!r} in {text!r}")
    return labels


def _as_ip(text: str) -> str | None:
    try:
        return str(ipaddress.ip_address(text.strip("[]")))
    except ValueError:
        return None


@dataclass(frozen=True)
class HostName:
    labels: tuple[str, ...]
    is_ip: bool = False

    def __post_init__(self) -> None:
        if not self.labels:
            raise ValueError("host name needs at least one label")
        object.__setattr__(self, "labels", tuple(label.lower() for label in self.labels))

    @classmethod
    def parse(cls, text: str) -> "HostName":
        text = text.strip().lower()
        ip = _as_ip(text)
        if ip is not None:
            return cls((ip,), is_ip=True)
        if text.endswith("."):
            text = text[:-1]
        return cls(_split_labels(text))

    @property
    def text(self) -> str:
        return ".".join(self.labels)

    def __str__(self) -> str:
        return self.text


@dataclass(frozen=True)
class DomainPattern:
    """A Domain attribute value; ``text`` never carries the leading dot."""

    text: str
    leading_dot: bool = False

    @classmethod
    def parse(cls, text: str) -> "DomainPattern":
        text = text.strip().lower()
        leading = text.startswith(".")
        body = text[1:] if leading else text
        ip = _as_ip(body)
        if ip is not None:
            return cls(ip, leading)
        _split_labels(body)
        return cls(body, leading)

    @classmethod
    def for_host(cls, host: HostName) -> "DomainPattern":
        return cls(effective_host(host).text)

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(self.text.split("."))

    def dotted(self) -> "DomainPattern":
        return DomainPattern(self.text, True)

    def __str__(self) -> str:
        return ("." if self.leading_dot else "") + self.text


def effective_host(host: HostName) -> HostName:
    if host.is_ip or len(host.labels) > 1:
        return host
    return HostName(host.labels + ("local",))


def _label_suffix(labels: tuple[str, ...], suffix: tuple[str, ...]) -> bool:
    return len(labels) >= len(suffix) and labels[len(labels) - len(suffix) :] == suffix


def domain_match(host: HostName, pattern: DomainPattern) -> bool:
    """True iff the effective host equals or ends with ``pattern`` at a label boundary."""
    if host.is_ip:
        return not pattern.leading_dot and pattern.text == host.text
    return _label_suffix(effective_host(host).labels, pattern.labels)


def validate_domain_v0(request_host: HostName, attr: DomainPattern) -> Verdict:
    """Netscape rule: tail match plus the 2-period/3-period breadth limit.

    ``shop.com`` and ``.shop.com`` are judged alike, in the dotted form, so
    ``shop.com`` counts two periods.
    """
    if request_host.is_ip:
        return reject(Reason.IP_HOST)
    if not domain_match(request_host, attr):
        return reject(Reason.NOT_TAIL_MATCH)
    labels = attr.labels
    needed = 2 if labels[-1] in SPECIAL_TLDS else 3
    if len(labels) < needed:
        return reject(Reason.TOO_BROAD)
    return ACCEPT


def validate_domain_v1(request_host: HostName, attr: DomainPattern) -> Verdict:
    """Set-Cookie2 rule: at most one label between the host and the domain."""
    attr = attr.dotted()
    if request_host.is_ip:
        return reject(Reason.IP_HOST)
    if not domain_match(request_host, attr):
        return reject(Reason.NOT_TAIL_MATCH)
    # A domain needs an embedded dot; .local is the one exception.
    if len(attr.labels) < 2 and attr.text != "local":
        return reject(Reason.TOO_BROAD)
    if len(effective_host(request_host).labels) - len(attr.labels) > 1:
        return reject(Reason.TOO_MANY_LEVELS)
    return ACCEPT


def path_match(request_path: str, cookie_path: str) -> bool:
    # Literal string prefix: "/bar" matches "/barn" as well.
    return request_path.startswith(cookie_path)


def port_match(request_port: int, origin_port: int, spec: PortSpec) -> bool:
    if spec.kind is PortKind.ANY:
        return True
    if spec.kind is PortKind.SAME:
        return request_port == origin_port
    return request_port in spec.ports


def reach(host: HostName) -> DomainPattern:
    """The neighbourhood of ``host`` whose members are not third parties to it.

    ``www.news.com`` reaches ``.news.com``; a two-label name such as
    ``shop.com`` reaches only itself, except that every ``*.local`` host
    reaches ``.local``.
    """
    eh = effective_host(host)
    if host.is_ip:
        return DomainPattern(eh.text)
    rest = eh.labels[1:]
    if len(rest) >= 2 or rest == ("local",):
        return DomainPattern(".".join(rest), leading_dot=True)
    return DomainPattern(eh.text)
