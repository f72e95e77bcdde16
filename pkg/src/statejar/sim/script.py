"""Exchange scripts: the line-oriented input of the simulator.

A script declares its actors, then lists steps.  Step lines start in column
0; indented lines attach headers, server cookies and page links to the step
above them.  Steps are numbered from 0 in file order::

    # leakage across a shared domain
    client c1 navigator3
    server www.shop.com v1
    proxy p1
    now 1000

    request c1 http://shop.biz.com/          # step 0
    response                                  # step 1
      header Set-Cookie: Customer=custid; domain=biz.com
      link inline http://www.ads.com/ad.gif
    request c1 http://www.ads.com/ad.gif from=0 trigger=inline
    response
      cookie ad=1
    advance 3600
    end-session c1

``request`` options: ``via=<proxy>``, ``from=<step>`` plus
``trigger=inline|redirect|form`` for a derived request that follows a link
declared in the response to that step.  Inside a request, ``header`` lines
replace the Cookie/Cookie2 headers the client would otherwise generate.
Inside a response, ``cookie`` lines are rendered as Set-Cookie and/or
Set-Cookie2 according to the server's negotiation.
"""

from __future__ import annotations

import shlex
from dataclasses import dataclass, field
from typing import Optional

from ..context import Trigger
from ..errors import ScriptError
from .emulate import ClientFlavor

__all__ = ["Link", "Step", "ExchangeScript", "parse_script", "format_script", "TRIGGER_NAMES"]

TRIGGER_NAMES = {"inline": Trigger.INLINE, "redirect": Trigger.REDIRECT, "form": Trigger.FORM_AUTO_SUBMIT}
_TRIGGER_WORDS = {v: k for k, v in TRIGGER_NAMES.items()}
_FLAVOR_WORDS = {
    ClientFlavor.NAVIGATOR_V3: "navigator3",
    ClientFlavor.MSIE_V3: "msie3",
    ClientFlavor.RFC2965: "rfc2965",
}


@dataclass(frozen=True)
class Link:
    trigger: Trigger
    url: str


@dataclass
class Step:
    index: int
    action: str  # request | response | advance | end-session
    client: Optional[str] = None
    url: Optional[str] = None
    proxy: Optional[str] = None
    from_step: Optional[int] = None
    trigger: Optional[Trigger] = None
    headers: list[tuple[str, str]] = field(default_factory=list)
    cookies: list[str] = field(default_factory=list)
    links: list[Link] = field(default_factory=list)
    seconds: int = 0
    lineno: Optional[int] = None


@dataclass
class ExchangeScript:
    clients: dict[str, ClientFlavor] = field(default_factory=dict)
    servers: dict[str, bool] = field(default_factory=dict)  # host -> v1 capable
    proxies: list[str] = field(default_factory=list)
    start: Optional[int] = None
    steps: list[Step] = field(default_factory=list)

    def validate(self) -> None:
        """Check step pairing and derived-request references."""
        responded: dict[int, Step] = {}
        last: Optional[Step] = None
        for step in self.steps:
            if step.action == "response":
                if last is None or last.action != "request":
                    raise ScriptError(step.index, "response does not follow a request", step.lineno)
                responded[last.index] = step
            elif step.action == "request":
                if step.client not in self.clients:
                    raise ScriptError(step.index, f"undeclared client {step.client!r}", step.lineno)
                if step.proxy is not None and step.proxy not in self.proxies:
                    raise ScriptError(step.index, f"undeclared proxy {step.proxy!r}", step.lineno)
                if (step.from_step is None) != (step.trigger is None):
                    raise ScriptError(step.index, "from= and trigger= go together", step.lineno)
                if step.from_step is not None:
                    self._check_derived(step, responded)
            elif step.action == "end-session":
                if step.client not in self.clients:
                    raise ScriptError(step.index, f"undeclared client {step.client!r}", step.lineno)
            last = step

    def _check_derived(self, step: Step, responded: dict[int, Step]) -> None:
        k = step.from_step
        assert k is not None
        if not 0 <= k < step.index or self.steps[k].action != "request":
            raise ScriptError(step.index, f"from={k} is not an earlier request step", step.lineno)
        if self.steps[k].client != step.client:
            raise ScriptError(step.index, f"from={k} belongs to another client", step.lineno)
        response = responded.get(k)
        link = Link(step.trigger, step.url)  # type: ignore[arg-type]
        if response is None or link not in response.links:
            raise ScriptError(step.index, f"no {_TRIGGER_WORDS[step.trigger]} link to {step.url} in the response to step {k}", step.lineno)

    def origin_step(self, index: int) -> int:
        """The user-initiated request a (possibly derived) request descends from."""
        step = self.steps[index]
        while step.from_step is not None:
            step = self.steps[step.from_step]
        return step.index


def _options(words: list[str], allowed: set[str], index: int, lineno: int) -> dict[str, str]:
    out = {}
    for word in words:
        key, sep, value = word.partition("=")
        if not sep or key not in allowed:
            raise ScriptError(index, f"unknown option {word!r}", lineno)
        out[key] = value
    return out


def _int(text: str, what: str, index: Optional[int], lineno: int) -> int:
    try:
        return int(text)
    except ValueError:
        raise ScriptError(index, f"{what} must be an integer, got {text!r}", lineno) from None


def parse_script(text: str) -> ExchangeScript:
    script = ExchangeScript()
    current: Optional[Step] = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.rstrip()
        stripped = line.lstrip()
        if not stripped or stripped.startswith("#"):
            continue
        index = len(script.steps)
        if line[0] in " \t":
            if current is None:
                raise ScriptError(None, "indented line outside a step", lineno)
            _attach(current, stripped, lineno)
            continue
        # Trailing comments are only recognised on unindented lines, where
        # header text cannot appear.
        try:
            words = shlex.split(line, comments=True)
        except ValueError as exc:
            raise ScriptError(index, str(exc), lineno) from None
        kind, args = words[0], words[1:]
        if kind == "client":
            if len(args) != 2:
                raise ScriptError(None, "usage: client <id> <flavor>", lineno)
            try:
                script.clients[args[0]] = ClientFlavor.parse(args[1])
            except ValueError:
                raise ScriptError(None, f"unknown client flavor {args[1]!r}", lineno) from None
            current = None
        elif kind == "server":
            if len(args) not in (1, 2) or (len(args) == 2 and args[1] not in ("v0", "v1")):
                raise ScriptError(None, "usage: server <host> [v0|v1]", lineno)
            script.servers[args[0].lower()] = len(args) == 2 and args[1] == "v1"
            current = None
        elif kind == "proxy":
            if len(args) != 1:
                raise ScriptError(None, "usage: proxy <id>", lineno)
            script.proxies.append(args[0])
            current = None
        elif kind == "now":
            if len(args) != 1:
                raise ScriptError(None, "usage: now <timestamp>", lineno)
            script.start = _int(args[0], "now", None, lineno)
            current = None
        elif kind == "request":
            if len(args) < 2:
                raise ScriptError(index, "usage: request <client> <url> [options]", lineno)
            opts = _options(args[2:], {"via", "from", "trigger"}, index, lineno)
            trigger = None
            if "trigger" in opts:
                if opts["trigger"] not in TRIGGER_NAMES:
                    raise ScriptError(index, f"unknown trigger {opts['trigger']!r}", lineno)
                trigger = TRIGGER_NAMES[opts["trigger"]]
            current = Step(
                index,
                "request",
                client=args[0],
                url=args[1],
                proxy=opts.get("via"),
                from_step=_int(opts["from"], "from", index, lineno) if "from" in opts else None,
                trigger=trigger,
                lineno=lineno,
            )
            script.steps.append(current)
        elif kind == "response":
            if args:
                raise ScriptError(index, "response takes no arguments", lineno)
            current = Step(index, "response", lineno=lineno)
            script.steps.append(current)
        elif kind == "advance":
            if len(args) != 1:
                raise ScriptError(index, "usage: advance <seconds>", lineno)
            current = Step(index, "advance", seconds=_int(args[0], "advance", index, lineno), lineno=lineno)
            script.steps.append(current)
        elif kind == "end-session":
            if len(args) != 1:
                raise ScriptError(index, "usage: end-session <client>", lineno)
            current = Step(index, "end-session", client=args[0], lineno=lineno)
            script.steps.append(current)
        else:
            raise ScriptError(index, f"unknown directive {kind!r}", lineno)
    script.validate()
    return script


def _attach(step: Step, line: str, lineno: int) -> None:
    kind, _, rest = line.partition(" ")
    rest = rest.strip()
    if kind == "header" and step.action in ("request", "response"):
        name, sep, value = rest.partition(":")
        if not sep or not name.strip():
            raise ScriptError(step.index, f"bad header line {line!r}", lineno)
        step.headers.append((name.strip(), value.strip()))
    elif kind == "cookie" and step.action == "response":
        if not rest:
            raise ScriptError(step.index, "empty cookie line", lineno)
        step.cookies.append(rest)
    elif kind == "link" and step.action == "response":
        trigger_word, _, url = rest.partition(" ")
        if trigger_word not in TRIGGER_NAMES or not url.strip():
            raise ScriptError(step.index, f"bad link line {line!r}", lineno)
        step.links.append(Link(TRIGGER_NAMES[trigger_word], url.strip()))
    else:
        raise ScriptError(step.index, f"{kind!r} is not allowed inside {step.action}", lineno)


def format_script(script: ExchangeScript) -> str:
    lines = []
    for cid, flavor in script.clients.items():
        lines.append(f"client {cid} {_FLAVOR_WORDS[flavor]}")
    for host, v1 in script.servers.items():
        lines.append(f"server {host} {'v1' if v1 else 'v0'}")
    for proxy in script.proxies:
        lines.append(f"proxy {proxy}")
    if script.start is not None:
        lines.append(f"now {script.start}")
    for step in script.steps:
        if step.action == "request":
            words = ["request", step.client or "", step.url or ""]
            if step.proxy is not None:
                words.append(f"via={step.proxy}")
            if step.from_step is not None:
                words.append(f"from={step.from_step}")
                words.append(f"trigger={_TRIGGER_WORDS[step.trigger]}")  # type: ignore[index]
            lines.append(" ".join(words))
        elif step.action == "response":
            lines.append("response")
        elif step.action == "advance":
            lines.append(f"advance {step.seconds}")
        else:
            lines.append(f"end-session {step.client}")
        lines.extend(f"  header {n}: {v}" for n, v in step.headers)
        lines.extend(f"  cookie {c}" for c in step.cookies)
        lines.extend(f"  link {_TRIGGER_WORDS[link.trigger]} {link.url}" for link in step.links)
    return "\n".join(lines) + "\n"
