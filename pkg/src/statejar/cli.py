"""``statejar`` command-line front end.

Exit codes:

==  ==================================================
0   success / Accept
1   Reject, Prompt, golden mismatch or failing corpus
2   header parse error
64  bad flags or malformed host
65  malformed script, jar file or policy file
66  unreadable input (corpus directory, script, files)
==  ==================================================

Stdout carries ``key=value`` records; diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import difflib
import os
import sys
from pathlib import Path
from typing import Optional, Sequence

from .context import RequestContext, Trigger
from .corpus import CorpusError, load_corpus, run_case
from .dump import dump_cookie_request, dump_set_cookie, format_dump
from .errors import CookieFileError, CookieSyntaxError, ScriptError
from .headers import Mode, parse_cookie_request, parse_set_cookie, serialize_cookie_header
from .jar import FixedClock, Jar, StoreResult
from .matching import DomainPattern, HostName, validate_domain_v0, validate_domain_v1
from .policy import PolicyConfig, classify_transaction, evaluate_accept, evaluate_send
from .sim.exchange import run_exchange
from .sim.script import parse_script
from .sim.trace import format_trace

EXIT_OK = 0
EXIT_REJECT = 1
EXIT_PARSE = 2
EXIT_USAGE = 64
EXIT_DATA = 65
EXIT_NOINPUT = 66

JAR_FILE_NAME = "cookies.txt"


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


class _Exit(Exception):
    def __init__(self, code: int, message: str = "") -> None:
        self.code = code
        self.message = message


def _err(message: str) -> None:
    print(message, file=sys.stderr)


def _read_text(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise _Exit(EXIT_NOINPUT, f"cannot read {path}: {exc}") from None


def _host(text: str) -> HostName:
    try:
        return HostName.parse(text)
    except ValueError as exc:
        raise _Exit(EXIT_USAGE, f"malformed host: {exc}") from None


def _context(url: str, **kwargs) -> RequestContext:
    try:
        return RequestContext.from_url(url, **kwargs)
    except ValueError as exc:
        raise _Exit(EXIT_USAGE, f"malformed URL {url!r}: {exc}") from None


def _load_policy(path: Optional[str]) -> PolicyConfig:
    if path is None:
        return PolicyConfig()
    try:
        return PolicyConfig.from_text(_read_text(path))
    except ValueError as exc:
        raise _Exit(EXIT_DATA, f"{path}: {exc}") from None


def default_jar_path() -> Path:
    home = os.environ.get("STATEJAR_HOME")
    base = Path(home) if home else Path.home() / ".statejar"
    return base / JAR_FILE_NAME


def _jar_path(args: argparse.Namespace) -> Path:
    return Path(args.jar) if args.jar else default_jar_path()


def _load_jar(path: Path, clock: FixedClock, missing_ok: bool = True) -> Jar:
    if not path.exists():
        if missing_ok:
            return Jar(clock)
        raise _Exit(EXIT_NOINPUT, f"no jar file at {path}")
    try:
        data = path.read_bytes()
    except OSError as exc:
        raise _Exit(EXIT_NOINPUT, f"cannot read {path}: {exc}") from None
    try:
        return Jar.load(data, clock)
    except CookieFileError as exc:
        raise _Exit(EXIT_DATA, f"{path}: {exc}") from None


def _save_jar(jar: Jar, path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(jar.save())


# ---------------------------------------------------------------- commands


def cmd_parse(args: argparse.Namespace) -> int:
    try:
        if args.mode in ("v0", "v1"):
            dump = dump_set_cookie(parse_set_cookie(args.header, Mode(args.mode)))
        else:
            dump = dump_cookie_request(parse_cookie_request([args.header]))
    except CookieSyntaxError as exc:
        print(f"error={exc.code}")
        _err(str(exc))
        return EXIT_PARSE
    sys.stdout.write(format_dump(dump))
    return EXIT_OK


def cmd_match(args: argparse.Namespace) -> int:
    host = _host(args.host)
    try:
        domain = DomainPattern.parse(args.domain)
    except ValueError as exc:
        raise _Exit(EXIT_USAGE, f"malformed domain: {exc}") from None
    validate = validate_domain_v0 if args.version == "v0" else validate_domain_v1
    verdict = validate(host, domain)
    print(verdict)
    return EXIT_OK if verdict.accepted else EXIT_REJECT


def cmd_jar_store(args: argparse.Namespace) -> int:
    clock = FixedClock(args.now)
    path = _jar_path(args)
    jar = _load_jar(path, clock)
    ctx = _context(args.url)
    try:
        specs = parse_set_cookie(args.header, Mode.V1 if args.v1 else Mode.V0)
    except CookieSyntaxError as exc:
        print(f"error={exc.code}")
        _err(str(exc))
        return EXIT_PARSE
    rejected = False
    for i, spec in enumerate(specs):
        outcome = jar.store(spec, ctx)
        rejected |= outcome.result is StoreResult.REJECTED
        print(f"store.{i}={outcome}")
    _save_jar(jar, path)
    return EXIT_REJECT if rejected else EXIT_OK


def cmd_jar_select(args: argparse.Namespace) -> int:
    jar = _load_jar(_jar_path(args), FixedClock(args.now))
    selected = jar.select(_context(args.url))
    version = max((c.spec.version for c in selected), default=0)
    print(f"count={len(selected)}")
    for i, c in enumerate(selected):
        print(f"{i}.key={c.spec.name};{c.effective_domain};{c.effective_path}")
    print(f"header={serialize_cookie_header(selected, version)}")
    return EXIT_OK


def _print_cookies(jar: Jar) -> None:
    cookies = jar.cookies()
    print(f"count={len(cookies)}")
    for i, c in enumerate(cookies):
        expiry = "" if c.expiry is None else c.expiry
        print(f"{i}.key={c.spec.name};{c.effective_domain};{c.effective_path}")
        print(f"{i}.value={c.spec.value}")
        print(f"{i}.version={c.spec.version}")
        print(f"{i}.expiry={expiry}")


def cmd_jar_load(args: argparse.Namespace) -> int:
    jar = _load_jar(_jar_path(args), FixedClock(args.now), missing_ok=False)
    _print_cookies(jar)
    return EXIT_OK


def cmd_jar_save(args: argparse.Namespace) -> int:
    """Rewrite the jar in canonical form, dropping expired entries."""
    path = _jar_path(args)
    jar = _load_jar(path, FixedClock(args.now))
    purged = jar.purge_expired()
    _save_jar(jar, Path(args.out) if args.out else path)
    print(f"count={len(jar)}")
    print(f"purged={purged}")
    return EXIT_OK


def cmd_jar_end_session(args: argparse.Namespace) -> int:
    path = _jar_path(args)
    jar = _load_jar(path, FixedClock(args.now))
    removed = jar.end_session() + jar.purge_expired()
    _save_jar(jar, path)
    print(f"removed={removed}")
    return EXIT_OK


def cmd_policy_eval(args: argparse.Namespace) -> int:
    policy = _load_policy(args.policy)
    origin = _context(args.origin)
    try:
        domains = [DomainPattern.parse(d) for d in args.origin_cookie]
    except ValueError as exc:
        raise _Exit(EXIT_USAGE, f"malformed domain: {exc}") from None
    origin = origin.with_origin_cookie_domains(domains)
    if args.url is None:
        ctx = origin
    else:
        ctx = _context(args.url, trigger=Trigger(args.trigger), origin=origin)
    verdict = evaluate_accept(policy, ctx)
    print(f"transaction={classify_transaction(ctx, policy.unverifiable_triggers).value}")
    print(f"verdict={verdict}")
    print(f"send={evaluate_send(policy, ctx).value}")
    return EXIT_OK if verdict.accepted else EXIT_REJECT


def cmd_simulate(args: argparse.Namespace) -> int:
    text = _read_text(args.script)
    try:
        script = parse_script(text)
    except ScriptError as exc:
        step = "-" if exc.step is None else exc.step
        print(f"error=ScriptError\tstep={step}")
        _err(f"{args.script}: {exc}")
        return EXIT_DATA
    policy = _load_policy(args.policy)
    clock = FixedClock(args.now if args.now is not None else (script.start or 0))
    jars = {}
    if args.jar:
        for cid in script.clients:
            jars[cid] = _load_jar(Path(args.jar), clock, missing_ok=False)
    if args.now is not None:
        script.start = args.now
    try:
        events = run_exchange(script, jars, {cid: policy for cid in script.clients}, clock)
    except ScriptError as exc:
        print(f"error=ScriptError\tstep={exc.step}")
        _err(f"{args.script}: {exc}")
        return EXIT_DATA
    trace = format_trace(events)
    if args.trace:
        Path(args.trace).write_text(trace, encoding="utf-8")
    elif not args.expect:
        sys.stdout.write(trace)
    if args.expect:
        golden = _read_text(args.expect)
        if golden != trace:
            diff = difflib.unified_diff(
                golden.splitlines(keepends=True), trace.splitlines(keepends=True), args.expect, "actual"
            )
            sys.stdout.writelines(diff)
            _err("trace does not match golden file")
            return EXIT_REJECT
        print("match=true")
    return EXIT_OK


def cmd_corpus(args: argparse.Namespace) -> int:
    try:
        cases = load_corpus(args.directory)
    except CorpusError as exc:
        _err(str(exc))
        return EXIT_NOINPUT
    if not cases:
        _err(f"warning: no cases in {args.directory}")
    failed = 0
    for case in cases:
        result = run_case(case)
        if not result.passed:
            failed += 1
            print(f"FAIL\t{case.id}\t{result.message}")
        elif args.verbose:
            print(f"PASS\t{case.id}")
    print(f"cases={len(cases)}\tpass={len(cases) - failed}\tfail={failed}")
    return EXIT_OK if failed == 0 else EXIT_REJECT


# ---------------------------------------------------------------- wiring


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="statejar", description="HTTP cookie state management toolkit.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", help="parse a Set-Cookie, Set-Cookie2, Cookie or Cookie2 value")
    p.add_argument("header")
    p.add_argument("--mode", choices=["v0", "v1", "cookie", "cookie2"], default="v0")
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("match", help="validate a Domain attribute for a request host")
    p.add_argument("host")
    p.add_argument("domain")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--v0", dest="version", action="store_const", const="v0")
    group.add_argument("--v1", dest="version", action="store_const", const="v1")
    p.set_defaults(func=cmd_match, version="v1")

    clock = _Parser(add_help=False)
    clock.add_argument("--now", type=int, default=0, help="clock value in epoch seconds")
    jar_file = _Parser(add_help=False)
    jar_file.add_argument("--jar", help="jar file (default: $STATEJAR_HOME/cookies.txt)")

    p = sub.add_parser("jar", help="store, select and maintain a cookie file")
    jar_sub = p.add_subparsers(dest="jar_command", required=True)
    q = jar_sub.add_parser("store", parents=[clock, jar_file], help="store cookies received from URL")
    q.add_argument("url")
    q.add_argument("header", help="Set-Cookie value (Set-Cookie2 with --v1)")
    q.add_argument("--v1", action="store_true")
    q.set_defaults(func=cmd_jar_store)
    q = jar_sub.add_parser("select", parents=[clock, jar_file], help="cookies to send to URL")
    q.add_argument("url")
    q.set_defaults(func=cmd_jar_select)
    q = jar_sub.add_parser("load", parents=[clock, jar_file], help="check and list a jar file")
    q.set_defaults(func=cmd_jar_load)
    q = jar_sub.add_parser("save", parents=[clock, jar_file], help="rewrite a jar file canonically")
    q.add_argument("--out")
    q.set_defaults(func=cmd_jar_save)
    q = jar_sub.add_parser("end-session", parents=[clock, jar_file], help="drop session and expired cookies")
    q.set_defaults(func=cmd_jar_end_session)

    p = sub.add_parser("policy", help="privacy policy decisions")
    policy_sub = p.add_subparsers(dest="policy_command", required=True)
    q = policy_sub.add_parser("eval", help="evaluate a transaction")
    q.add_argument("--policy", help="key=value policy file")
    q.add_argument("--origin", required=True, help="URL of the user-initiated request")
    q.add_argument("--url", help="URL of a derived request")
    q.add_argument("--trigger", choices=[t.value for t in Trigger], default=Trigger.INLINE.value)
    q.add_argument("--origin-cookie", action="append", default=[], help="domain of a cookie in the origin transaction")
    q.set_defaults(func=cmd_policy_eval)

    p = sub.add_parser("simulate", help="run an exchange script")
    p.add_argument("script")
    p.add_argument("--jar", help="initial jar file for every client")
    p.add_argument("--policy", help="key=value policy file for every client")
    p.add_argument("--trace", help="write the trace here instead of stdout")
    p.add_argument("--expect", help="golden trace to compare against")
    p.add_argument("--now", type=int, help="start clock (overrides the script's now)")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("corpus", help="run a conformance corpus directory")
    p.add_argument("directory")
    p.add_argument("-v", "--verbose", action="store_true")
    p.set_defaults(func=cmd_corpus)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _Exit as exc:
        if exc.message:
            _err(exc.message)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
