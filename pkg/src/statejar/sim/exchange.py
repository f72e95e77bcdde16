"""Run an exchange script against per-client jars, policies and proxy caches."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Optional

from ..context import RequestContext
from ..errors import CookieSyntaxError, ScriptError
from ..headers import Mode, parse_set_cookie, serialize_cookie_header
from ..jar import FixedClock, Jar, StoredCookie, StoreResult
from ..matching import DomainPattern
from ..policy import PolicyConfig, SendDecision, explain_accept, explain_send
from ..verdict import Reason
from .cache import COOKIE_HEADERS, body_cacheable, cache_decision
from .emulate import ClientFlavor, emulate_spec
from .negotiate import HeaderPlan, ServerState, explain_negotiation
from .script import ExchangeScript, Step
from .trace import EventKind, TraceEvent

__all__ = ["run_exchange", "render_cookie_headers", "client_request_headers"]

Header = tuple[str, str]


@dataclass
class _CacheEntry:
    headers: list[Header]
    stored_by: str
    step: int


@dataclass
class _Pending:
    """A request waiting for its response."""

    step: Step
    ctx: RequestContext
    headers: list[Header]
    origin_index: int


@dataclass
class _State:
    script: ExchangeScript
    clock: FixedClock
    jars: dict[str, Jar]
    policies: dict[str, PolicyConfig]
    caches: dict[str, dict[str, _CacheEntry]] = field(default_factory=dict)
    contexts: dict[int, RequestContext] = field(default_factory=dict)
    # Domains of cookies sent or accepted in each origin transaction.
    origin_domains: dict[int, list[DomainPattern]] = field(default_factory=dict)
    events: list[TraceEvent] = field(default_factory=list)

    def emit(self, *args, **kwargs) -> None:
        self.events.append(TraceEvent(*args, **kwargs))


def _key(cookie: StoredCookie) -> tuple[str, str, str]:
    return (cookie.spec.name, str(cookie.effective_domain), cookie.effective_path)


def render_cookie_headers(plan: HeaderPlan, cookie_lines: list[str]) -> list[Header]:
    """Turn a server's cookie declarations into response headers.

    Set-Cookie carries the text as written; Set-Cookie2 adds ``Version=1``
    when the text does not already say which version it is.
    """
    out: list[Header] = []
    if plan in (HeaderPlan.SEND_V0_ONLY, HeaderPlan.SEND_BOTH):
        out.extend(("Set-Cookie", text) for text in cookie_lines)
    if plan in (HeaderPlan.SEND_V1_ONLY, HeaderPlan.SEND_BOTH):
        for text in cookie_lines:
            has_version = any(p.split("=", 1)[0].strip().lower() == "version" for p in text.split(";")[1:])
            out.append(("Set-Cookie2", text if has_version else text + "; Version=1"))
    return out


def client_request_headers(flavor: ClientFlavor, selected: list[StoredCookie]) -> list[Header]:
    """Cookie and Cookie2 headers a client of ``flavor`` sends for ``selected``."""
    if not selected:
        return []
    if flavor is not ClientFlavor.RFC2965:
        return [("Cookie", serialize_cookie_header(selected, 0))]
    if any(c.spec.version == 1 for c in selected):
        return [("Cookie", serialize_cookie_header(selected, 1))]
    # v0 cookies only: advertise that version 1 is understood.
    return [("Cookie", serialize_cookie_header(selected, 0)), ("Cookie2", "$Version=1")]


def _request_context(state: _State, step: Step) -> tuple[RequestContext, int]:
    assert step.url is not None
    try:
        if step.from_step is None:
            return RequestContext.from_url(step.url), step.index
        origin_index = state.script.origin_step(step.index)
        origin = state.contexts[origin_index].with_origin_cookie_domains(state.origin_domains[origin_index])
        return RequestContext.from_url(step.url, trigger=step.trigger, origin=origin), origin_index
    except ValueError as exc:
        raise ScriptError(step.index, str(exc), step.lineno) from None


def _do_request(state: _State, step: Step) -> _Pending:
    client = step.client
    assert client is not None
    ctx, origin_index = _request_context(state, step)
    if step.from_step is None:
        state.contexts[step.index] = ctx
        state.origin_domains[step.index] = []
    jar, policy = state.jars[client], state.policies[client]
    host = ctx.host.text

    if step.headers:
        # Hand-written cookie headers replace what the jar would send.
        return _Pending(step, ctx, list(step.headers), origin_index)

    selected = jar.select(ctx)
    decision, tag = explain_send(policy, ctx)
    if decision is SendDecision.SUPPRESS:
        for c in selected:
            state.emit(step.index, EventKind.COOKIE_SUPPRESSED, tag, client, host, _key(c))
        return _Pending(step, ctx, [], origin_index)
    for c in selected:
        state.emit(step.index, EventKind.COOKIE_SENT, f"jar.select;{tag}", client, host, _key(c), detail=f"value={c.spec.value}")
        if ctx.is_origin:
            state.origin_domains[step.index].append(c.effective_domain)
    return _Pending(step, ctx, client_request_headers(state.script.clients[client], selected), origin_index)


def _serve_from_cache(state: _State, pending: _Pending, step: Step) -> Optional[list[Header]]:
    proxy = pending.step.proxy
    url = pending.step.url
    if proxy is None or url is None:
        return None
    entry = state.caches.setdefault(proxy, {}).get(url)
    if entry is None:
        return None
    replayed = sum(1 for n, _ in entry.headers if n.lower() in COOKIE_HEADERS)
    state.emit(
        step.index, EventKind.CACHE_SERVED, "cache.serve", pending.step.client, pending.ctx.host.text,
        detail=f"proxy={proxy} stored_by={entry.stored_by} stored_at={entry.step} set_cookie={replayed}",
    )
    return list(entry.headers)


def _offer_to_cache(state: _State, pending: _Pending, step: Step, headers: list[Header]) -> None:
    proxy = pending.step.proxy
    if proxy is None or pending.step.url is None:
        return
    decision = cache_decision(headers, body_cacheable(headers))
    cookie_count = sum(1 for n, _ in headers if n.lower() in COOKIE_HEADERS)
    host = pending.ctx.host.text
    client = pending.step.client
    assert client is not None
    if not decision.store_body:
        return
    kept = headers if decision.store_set_cookie else [h for h in headers if h[0].lower() not in COOKIE_HEADERS]
    kept_cookies = cookie_count if decision.store_set_cookie else 0
    state.caches.setdefault(proxy, {})[pending.step.url] = _CacheEntry(kept, client, step.index)
    if cookie_count and not decision.store_set_cookie:
        state.emit(step.index, EventKind.SET_COOKIE_STRIPPED, "cache.strip-set-cookie", client, host,
                   detail=f"proxy={proxy} count={cookie_count}")
    state.emit(step.index, EventKind.CACHE_STORED, "cache.store", client, host,
               detail=f"proxy={proxy} url={pending.step.url} set_cookie={kept_cookies}")


def _received_specs(flavor: ClientFlavor, headers: list[Header]) -> list[tuple[str, object]]:
    """(rule tag, CookieSpec or CookieSyntaxError) for every cookie the client reads."""
    out: list[tuple[str, object]] = []
    v1_names: set[str] = set()
    if flavor is ClientFlavor.RFC2965:
        for name, value in headers:
            if name.lower() == "set-cookie2":
                try:
                    specs = parse_set_cookie(value, Mode.V1)
                except CookieSyntaxError as exc:
                    out.append(("syntax.v1", exc))
                    continue
                for spec in specs:
                    v1_names.add(spec.name)
                    out.append(("syntax.v1", spec))
    for name, value in headers:
        if name.lower() != "set-cookie":
            continue
        try:
            specs = parse_set_cookie(value, Mode.V0)
        except CookieSyntaxError as exc:
            out.append(("syntax.v0", exc))
            continue
        for spec in specs:
            # A v1 client prefers the Set-Cookie2 copy of the same cookie.
            if spec.name in v1_names:
                continue
            emulated = emulate_spec(flavor, spec)
            out.append(("emulate.msie-last-pair" if emulated is not spec else "syntax.v0", emulated))
    return out


def _accept_cookies(state: _State, pending: _Pending, step: Step, headers: list[Header]) -> None:
    client = pending.step.client
    assert client is not None
    ctx = pending.ctx
    host = ctx.host.text
    jar, policy = state.jars[client], state.policies[client]
    for tag, item in _received_specs(state.script.clients[client], headers):
        if isinstance(item, CookieSyntaxError):
            state.emit(step.index, EventKind.COOKIE_REJECTED, tag, client, host, reason=item.code)
            continue
        spec = item
        raw_key = (spec.name, spec.domain or host, spec.path or "")  # type: ignore[attr-defined]
        verdict, policy_tag = explain_accept(policy, ctx)
        if not verdict.accepted:
            reason = verdict.reason.value if verdict.reason is not None else verdict.outcome.value
            state.emit(step.index, EventKind.COOKIE_REJECTED, policy_tag, client, host, raw_key, reason)
            continue
        outcome = jar.store(spec, ctx)  # type: ignore[arg-type]
        if outcome.result is StoreResult.REJECTED:
            detail = str(outcome.detail) if outcome.detail is not None else None
            rule = "jar.port" if outcome.reason is Reason.INVALID_PORT else f"domain.v{spec.version}"  # type: ignore[attr-defined]
            state.emit(step.index, EventKind.COOKIE_REJECTED, rule, client, host, raw_key,
                       outcome.reason.value if outcome.reason else None, detail)
            continue
        detail = f"store={outcome.result.value} version={spec.version} value={spec.value}"  # type: ignore[attr-defined]
        if outcome.previous is not None:
            detail += f" previous={outcome.previous.spec.value} previous_origin={outcome.previous.origin_host.text}"
        if tag == "emulate.msie-last-pair":
            detail += " emulated=MsieV3"
        cookie = outcome.cookie if outcome.cookie is not None else outcome.previous
        key = _key(cookie) if cookie is not None else raw_key
        rule = "jar.delete" if outcome.result is StoreResult.DELETED else f"jar.store;{policy_tag}"
        state.emit(step.index, EventKind.COOKIE_ACCEPTED, rule, client, host, key, detail=detail)
        if ctx.is_origin and outcome.cookie is not None:
            state.origin_domains[pending.origin_index].append(outcome.cookie.effective_domain)


def _do_response(state: _State, pending: _Pending, step: Step) -> None:
    headers = _serve_from_cache(state, pending, step)
    if headers is None:
        server = ServerState(state.script.servers.get(pending.ctx.host.text, False))
        plan, tag = explain_negotiation(server, pending.headers)
        state.emit(step.index, EventKind.NEGOTIATED, tag, pending.step.client, pending.ctx.host.text,
                   detail=f"plan={plan.value}")
        headers = list(step.headers) + render_cookie_headers(plan, step.cookies)
        _offer_to_cache(state, pending, step, headers)
    _accept_cookies(state, pending, step, headers)


def run_exchange(
    script: ExchangeScript,
    jars: Optional[Mapping[str, Jar]] = None,
    policies: Optional[Mapping[str, PolicyConfig]] = None,
    clock: Optional[FixedClock] = None,
) -> list[TraceEvent]:
    """Execute ``script`` step by step and return the trace.

    Clients without a jar get a fresh one on ``clock``; clients without a
    policy get the default :class:`PolicyConfig`.  Supplied jars are mutated
    and re-bound to the run's clock.
    """
    script.validate()
    if clock is None:
        clock = FixedClock(script.start or 0)
    elif script.start is not None:
        clock.now = script.start
    jar_map = dict(jars or {})
    policy_map = dict(policies or {})
    for jar in jar_map.values():
        jar.clock = clock
    for cid in script.clients:
        jar_map.setdefault(cid, Jar(clock))
        policy_map.setdefault(cid, PolicyConfig())
    state = _State(script, clock, jar_map, policy_map)

    pending: Optional[_Pending] = None
    for step in script.steps:
        if step.action == "request":
            pending = _do_request(state, step)
        elif step.action == "response":
            assert pending is not None
            _do_response(state, pending, step)
            pending = None
        elif step.action == "advance":
            clock.advance(step.seconds)
            pending = None
        else:
            assert step.client is not None
            removed = state.jars[step.client].end_session()
            state.emit(step.index, EventKind.SESSION_ENDED, "jar.end-session", step.client, detail=f"removed={removed}")
            pending = None
    return state.events
