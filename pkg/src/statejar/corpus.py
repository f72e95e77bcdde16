"""Conformance corpus: declarative test cases and their runner.

A corpus is a directory of ``*.case`` files.  Each file holds one or more
records separated by blank lines; a record is ``key=value`` lines (``#``
starts a comment line)::

    id=v0-basic
    mode=v0
    input=id=waldo
    expect.0.name=id
    expect.0.value=waldo
    provenance=basic v0 example

Every ``expect.<key>`` must equal the ``<key>`` line of the case's dump
(the same text ``statejar parse`` and friends print).  ``expect.error``
names the error class a case must raise.  Other keys are mode arguments.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional

from .context import RequestContext, Trigger
from .dates import parse_http_date
from .dump import Dump, dump_cookie_request, dump_set_cookie
from .errors import CookieSyntaxError
from .headers import Mode, PortSpec, parse_cookie_request, parse_set_cookie, serialize_cookie_header
from .jar import FixedClock, Jar
from .matching import (
    DomainPattern,
    HostName,
    domain_match,
    effective_host,
    path_match,
    port_match,
    reach,
    validate_domain_v0,
    validate_domain_v1,
)
from .policy import PolicyConfig, classify_transaction, evaluate_accept, evaluate_send, is_third_party
from .sim.cache import body_cacheable, cache_decision
from .sim.emulate import ClientFlavor, Emulated, emulate_client
from .sim.negotiate import ServerState, negotiate_server_headers

__all__ = ["CorpusCase", "CaseResult", "CorpusError", "parse_cases", "load_corpus", "run_case", "evaluate_case", "MODES"]


class CorpusError(Exception):
    """The corpus cannot be read or is malformed."""


@dataclass
class CorpusCase:
    id: str
    mode: str
    params: dict[str, str] = field(default_factory=dict)
    expect: dict[str, str] = field(default_factory=dict)
    provenance: str = ""
    source: str = ""

    def arg(self, key: str, default: Optional[str] = None) -> str:
        if key in self.params:
            return self.params[key]
        if default is None:
            raise CorpusError(f"case {self.id}: missing {key!r}")
        return default

    def indexed(self, prefix: str) -> list[str]:
        """Values of ``prefix.0``, ``prefix.1`` ... in index order."""
        found = {}
        for key, value in self.params.items():
            head, _, tail = key.rpartition(".")
            if head == prefix and tail.isdigit():
                found[int(tail)] = value
        return [found[i] for i in sorted(found)]

    def prefixed(self, prefix: str) -> list[tuple[str, str]]:
        return [(k[len(prefix) + 1 :], v) for k, v in self.params.items() if k.startswith(prefix + ".")]


@dataclass(frozen=True)
class CaseResult:
    case: CorpusCase
    passed: bool
    message: str = ""


def parse_cases(text: str, source: str = "") -> list[CorpusCase]:
    cases = []
    record: dict[str, str] = {}
    start = 0

    def flush() -> None:
        if not record:
            return
        if "id" not in record or "mode" not in record:
            raise CorpusError(f"{source}:{start}: record needs id and mode")
        case = CorpusCase(record.pop("id"), record.pop("mode"), source=f"{source}:{start}")
        case.provenance = record.pop("provenance", "")
        for key, value in record.items():
            if key.startswith("expect."):
                case.expect[key[len("expect.") :]] = value
            else:
                case.params[key] = value
        if not case.expect:
            raise CorpusError(f"{case.source}: case {case.id} has no expectations")
        cases.append(case)
        record.clear()

    for lineno, line in enumerate(text.splitlines(), 1):
        if line.startswith("#"):
            continue
        if not line.strip():
            flush()
            continue
        if not record:
            start = lineno
        key, sep, value = line.partition("=")
        if not sep:
            raise CorpusError(f"{source}:{lineno}: expected key=value")
        if key in record:
            raise CorpusError(f"{source}:{lineno}: duplicate key {key!r}")
        record[key] = value
    flush()
    return cases


def load_corpus(directory: str | Path) -> list[CorpusCase]:
    root = Path(directory)
    if not root.is_dir():
        raise CorpusError(f"not a directory: {root}")
    cases: list[CorpusCase] = []
    seen: dict[str, str] = {}
    for path in sorted(root.glob("*.case")):
        try:
            text = path.read_text(encoding="utf-8")
        except (OSError, UnicodeDecodeError) as exc:
            raise CorpusError(f"cannot read {path}: {exc}") from None
        for case in parse_cases(text, path.name):
            if case.id in seen:
                raise CorpusError(f"duplicate case id {case.id} in {case.source} and {seen[case.id]}")
            seen[case.id] = case.source
            cases.append(case)
    return cases


# ---------------------------------------------------------------- modes


def _two(case: CorpusCase) -> tuple[str, str]:
    parts = case.arg("input").split()
    if len(parts) != 2:
        raise CorpusError(f"case {case.id}: input needs two words")
    return parts[0], parts[1]


def _set_cookie(mode: Mode) -> Callable[[CorpusCase], Dump]:
    return lambda case: dump_set_cookie(parse_set_cookie(case.arg("input"), mode))


def _cookie(case: CorpusCase) -> Dump:
    values = case.indexed("input") or [case.arg("input")]
    return dump_cookie_request(parse_cookie_request(values))


def _match(validate):
    def run(case: CorpusCase) -> Dump:
        host, domain = _two(case)
        return [("verdict", str(validate(HostName.parse(host), DomainPattern.parse(domain))))]

    return run


def _domain_match(case: CorpusCase) -> Dump:
    host, pattern = _two(case)
    return [("match", str(domain_match(HostName.parse(host), DomainPattern.parse(pattern))).lower())]


def _path_match(case: CorpusCase) -> Dump:
    request_path, cookie_path = _two(case)
    return [("match", str(path_match(request_path, cookie_path)).lower())]


def _port_match(case: CorpusCase) -> Dump:
    parts = case.arg("input").split()
    if len(parts) != 3:
        raise CorpusError(f"case {case.id}: input needs request port, origin port and a port spec")
    request_port, origin_port, text = int(parts[0]), int(parts[1]), parts[2]
    if text == "AnyPort":
        spec = PortSpec()
    elif text == "SamePortOnly":
        spec = PortSpec.from_attribute(None)
    else:
        spec = PortSpec.from_attribute(text)
    return [("match", str(port_match(request_port, origin_port, spec)).lower())]


def _emulate(flavor: ClientFlavor) -> Callable[[CorpusCase], Dump]:
    def run(case: CorpusCase) -> Dump:
        result = emulate_client(flavor, case.arg("input"), case.arg("header", "Set-Cookie"))
        if isinstance(result, Emulated):
            return [("name", result.name), ("value", result.value)]
        return [("ignored", "true"), ("diagnostic", result.diagnostic)]

    return run


def _headers(case: CorpusCase, prefix: str) -> list[tuple[str, str]]:
    return [(name.rsplit(".", 1)[0] if name.rsplit(".", 1)[-1].isdigit() else name, value)
            for name, value in case.prefixed(prefix)]


def _negotiate(case: CorpusCase) -> Dump:
    server = ServerState(case.arg("server", "v1") == "v1")
    return [("plan", negotiate_server_headers(server, _headers(case, "request")).value)]


def _cache(case: CorpusCase) -> Dump:
    headers = _headers(case, "response")
    cacheable = case.params.get("body_cacheable")
    decision = cache_decision(headers, body_cacheable(headers) if cacheable is None else cacheable == "true")
    return [("store_body", str(decision.store_body).lower()), ("store_set_cookie", str(decision.store_set_cookie).lower())]


def _jar(case: CorpusCase) -> Dump:
    """``store.N=<url> <Header-Name>: <value>``; then select for ``input``."""
    clock = FixedClock(int(case.arg("now", "0")))
    jar = Jar(clock)
    out: Dump = []
    for i, item in enumerate(case.indexed("store")):
        url, _, header = item.partition(" ")
        name, _, value = header.partition(":")
        mode = Mode.V1 if name.strip().lower() == "set-cookie2" else Mode.V0
        for spec in parse_set_cookie(value.strip(), mode):
            out.append((f"store.{i}", str(jar.store(spec, RequestContext.from_url(url)))))
    clock.advance(int(case.arg("advance", "0")))
    if case.arg("end_session", "false") == "true":
        jar.end_session()
    selected = jar.select(RequestContext.from_url(case.arg("input")))
    version = max((c.spec.version for c in selected), default=0)
    out += [("count", str(len(selected))), ("header", serialize_cookie_header(selected, version))]
    return out


def _derived_context(case: CorpusCase) -> RequestContext:
    origin = RequestContext.from_url(case.arg("origin"))
    domains = [DomainPattern.parse(d) for d in case.indexed("origin_cookie")]
    origin = origin.with_origin_cookie_domains(domains)
    trigger = case.params.get("trigger")
    if trigger is None:
        return origin
    return RequestContext.from_url(case.arg("input"), trigger=Trigger(trigger), origin=origin)


def _policy(case: CorpusCase) -> Dump:
    lines = "\n".join(f"{k}={v}" for k, v in case.prefixed("policy"))
    policy = PolicyConfig.from_text(lines)
    ctx = _derived_context(case)
    return [
        ("transaction", classify_transaction(ctx, policy.unverifiable_triggers).value),
        ("verdict", str(evaluate_accept(policy, ctx))),
        ("send", evaluate_send(policy, ctx).value),
    ]


def _third_party(case: CorpusCase) -> Dump:
    return [("third_party", str(is_third_party(_derived_context(case))).lower())]


MODES: dict[str, Callable[[CorpusCase], Dump]] = {
    "v0": _set_cookie(Mode.V0),
    "v1": _set_cookie(Mode.V1),
    "cookie": _cookie,
    "cookie2": _cookie,
    "date": lambda case: [("epoch", str(parse_http_date(case.arg("input"))))],
    "effective-host": lambda case: [("effective", effective_host(HostName.parse(case.arg("input"))).text)],
    "reach": lambda case: [("reach", str(reach(HostName.parse(case.arg("input")))))],
    "match-v0": _match(validate_domain_v0),
    "match-v1": _match(validate_domain_v1),
    "domain-match": _domain_match,
    "path-match": _path_match,
    "port-match": _port_match,
    "emulate-navigator3": _emulate(ClientFlavor.NAVIGATOR_V3),
    "emulate-msie3": _emulate(ClientFlavor.MSIE_V3),
    "emulate-rfc2965": _emulate(ClientFlavor.RFC2965),
    "negotiate": _negotiate,
    "cache": _cache,
    "jar": _jar,
    "policy": _policy,
    "third-party": _third_party,
}


def evaluate_case(case: CorpusCase) -> Dump:
    """Run a case and return its dump; syntax errors become ``error=<class>``."""
    handler = MODES.get(case.mode)
    if handler is None:
        raise CorpusError(f"case {case.id}: unknown mode {case.mode!r}")
    try:
        return handler(case)
    except CookieSyntaxError as exc:
        return [("error", exc.code)]
    except ValueError as exc:
        return [("error", type(exc).__name__), ("message", str(exc))]


def run_case(case: CorpusCase) -> CaseResult:
    try:
        dump = dict(evaluate_case(case))
    except CorpusError as exc:
        return CaseResult(case, False, str(exc))
    problems = []
    for key, want in case.expect.items():
        got = dump.get(key)
        if got != want:
            problems.append(f"{key}: expected {want!r}, got {got!r}")
    if "error" in dump and "error" not in case.expect:
        problems.append(f"unexpected error {dump['error']}")
    return CaseResult(case, not problems, "; ".join(problems))
