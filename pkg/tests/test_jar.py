import pytest
from hypothesis import given, settings, strategies as st

from statejar.context import RequestContext
from statejar.headers import CookieSpec, Mode, PortKind, PortSpec, parse_set_cookie, serialize_cookie_header
from statejar.jar import FixedClock, Jar, StoreResult, default_path
from statejar.verdict import Reason

import jargen
import oracles

ACME = RequestContext.from_url("http://www.acme.com/")


def v0(text):
    return parse_set_cookie(text, Mode.V0)[0]


def v1(text):
    return parse_set_cookie(text, Mode.V1)[0]


def test_store_fresh():
    jar = Jar()
    assert jar.store(v0("id=waldo"), ACME).result is StoreResult.STORED
    assert len(jar) == 1


def test_replace_same_key():
    jar = Jar()
    jar.store(v0("id=a; path=/"), ACME)
    outcome = jar.store(v0("id=b; path=/"), ACME)
    assert outcome.result is StoreResult.REPLACED
    assert outcome.previous.spec.value == "a"
    assert len(jar) == 1


def test_max_age_zero_deletes():
    jar = Jar()
    jar.store(v1("id=a; Path=/; Max-Age=100"), ACME)
    outcome = jar.store(v1("id=a; Path=/; Max-Age=0"), ACME)
    assert outcome.result is StoreResult.DELETED
    assert len(jar) == 0


def test_past_expires_deletes():
    clock = FixedClock(10_000)
    jar = Jar(clock)
    jar.store(v0("id=a; path=/"), ACME)
    outcome = jar.store(CookieSpec("id", "a", path="/", expires=9_999), ACME)
    assert outcome.result is StoreResult.DELETED
    assert len(jar) == 0


def test_select_order_more_specific_first():
    jar = Jar()
    jar.store(v0("name1=foo; path=/"), ACME)
    jar.store(v0("name1=foo2; path=/bar"), RequestContext.from_url("http://www.acme.com/bar/"))
    selected = jar.select(RequestContext.from_url("http://www.acme.com/bar/x"))
    assert [c.spec.value for c in selected] == ["foo2", "foo"]
    assert serialize_cookie_header(selected, 0) == "name1=foo2; name1=foo"


def test_equal_paths_keep_creation_order():
    clock = FixedClock(0)
    jar = Jar(clock)
    jar.store(v0("b=1; path=/"), ACME)
    clock.advance(1)
    jar.store(v0("a=1; path=/"), ACME)
    assert [c.spec.name for c in jar.select(ACME)] == ["b", "a"]


def test_secure_needs_secure_channel():
    jar = Jar()
    jar.store(v0("id=a; path=/; secure"), RequestContext.from_url("https://www.acme.com/"))
    assert jar.select(ACME) == []
    assert len(jar.select(RequestContext.from_url("https://www.acme.com/"))) == 1


def test_host_only_cookie_not_sent_to_subdomain():
    jar = Jar()
    jar.store(v0("id=a; path=/"), RequestContext.from_url("http://acme.com/"))
    assert jar.select(RequestContext.from_url("http://www.acme.com/")) == []
    assert len(jar.select(RequestContext.from_url("http://acme.com/"))) == 1


def test_domain_validation_rejects():
    jar = Jar()
    outcome = jar.store(v0("id=a; domain=.com"), RequestContext.from_url("http://www.shop.com/"))
    assert outcome.result is StoreResult.REJECTED
    assert outcome.reason is Reason.INVALID_DOMAIN
    assert str(outcome.detail) == "Reject(TooBroad)"


def test_port_list_must_include_request_port():
    jar = Jar()
    outcome = jar.store(v1('id=a; Port="80,443"'), RequestContext.from_url("http://www.acme.com:8000/"))
    assert str(outcome) == "Rejected(InvalidPort)"
    ok = jar.store(v1('id=a; Port="80,443"'), ACME)
    assert ok.result is StoreResult.STORED
    assert len(jar.select(RequestContext.from_url("https://www.acme.com/"))) == 1
    assert jar.select(RequestContext.from_url("http://www.acme.com:8080/")) == []


def test_max_age_expiry():
    clock = FixedClock(1000)
    jar = Jar(clock)
    jar.store(v1("xx=1; Path=/; Max-Age=15552000"), ACME)
    clock.advance(15552000 - 1)
    assert len(jar.select(ACME)) == 1
    clock.advance(2)
    assert jar.select(ACME) == []
    assert jar.purge_expired() == 1


def test_end_session():
    clock = FixedClock(0)
    jar = Jar(clock)
    jar.store(v0("s=1; path=/"), ACME)
    jar.store(v0("p=1; path=/; expires=Sun, 27 Apr 2031 01:16:23 GMT"), ACME)
    jar.store(v1("d=1; Path=/; Max-Age=9999999; Discard"), ACME)
    jar.store(v1("m=1; Path=/; Max-Age=9999999"), ACME)
    assert jar.end_session() == 2
    assert sorted(c.spec.name for c in jar) == ["m", "p"]


def test_per_domain_cap_evicts_oldest():
    clock = FixedClock(0)
    jar = Jar(clock, max_per_domain=3)
    for i in range(5):
        clock.advance(1)
        jar.store(v0(f"c{i}=1; path=/"), ACME)
    assert [c.spec.name for c in jar] == ["c2", "c3", "c4"]


def test_total_cap():
    jar = Jar(max_total=2)
    for host in ("a.acme.com", "b.acme.com", "c.acme.com"):
        jar.store(v0("x=1; path=/"), RequestContext.from_url(f"http://{host}/"))
    assert len(jar) == 2


@pytest.mark.parametrize("path, expected", [("/", "/"), ("/a/b", "/a/"), ("/a/b/", "/a/b/"), ("/x", "/")])
def test_default_path(path, expected):
    assert default_path(path) == expected


@given(jargen.ops)
def test_store_is_idempotent_under_fixed_clock(program):
    doubled = []
    for op in program:
        doubled += [op, op] if op[0] == "store" else [op]
    _, once, _, _ = jargen.run_program(program, oracles.ModelJar)
    _, twice, _, _ = jargen.run_program(doubled, oracles.ModelJar)
    assert once == twice


@settings(max_examples=200)
@given(jargen.ops, jargen.requests)
def test_select_matches_model(program, req):
    clock, jar, model, results = jargen.run_program(program, oracles.ModelJar)
    for got, want in results:
        assert got == want
    assert jargen.jar_selection(jar, req) == model.select(clock(), req)


@given(jargen.ops, jargen.requests)
def test_select_is_ordered(program, req):
    _, jar, _, _ = jargen.run_program(program, oracles.ModelJar)
    selected = jar.select(jargen.to_ctx(req))
    keys = [(-len(c.effective_path), c.created_at, c.seq) for c in selected]
    assert keys == sorted(keys)
    assert len({c.key for c in selected}) == len(selected)
