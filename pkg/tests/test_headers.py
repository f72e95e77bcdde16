import pytest
from hypothesis import given, settings, strategies as st

from statejar.errors import CookieSyntaxError
from statejar.headers import (
    CookieSpec,
    Mode,
    PortKind,
    PortSpec,
    parse_cookie_request,
    parse_set_cookie,
    quote,
    serialize_cookie_header,
    serialize_set_cookie,
    unquote,
)
from statejar.jar import Jar, StoredCookie
from statejar.matching import DomainPattern, HostName
from statejar.context import RequestContext

from strategies import cookie_specs, v0_specs, v1_specs

XX = 'xx="1=2&3-4"; Comment="blah"; Version=1; Max-Age=15552000; Path=/; Expires=Sun, 27 Apr 1997 01:16:23 GMT'


def test_v0_basic():
    (spec,) = parse_set_cookie("id=waldo", Mode.V0)
    assert spec == CookieSpec("id", "waldo")
    assert serialize_set_cookie(spec) == "id=waldo"


def test_v1_xx_header():
    (spec,) = parse_set_cookie(XX, Mode.V1)
    assert spec.name == "xx"
    assert spec.value == '"1=2&3-4"'
    assert spec.comment == "blah"
    assert spec.version == 1
    assert spec.max_age == 15552000
    assert spec.path == "/"
    assert spec.expires == 862103783
    assert parse_set_cookie(serialize_set_cookie(spec), Mode.V1) == [spec]


def test_v0_parse_of_v1_header_keeps_unknown_attributes():
    (spec,) = parse_set_cookie(XX, Mode.V0)
    assert (spec.name, spec.value, spec.path) == ("xx", '"1=2&3-4"', "/")
    assert spec.extras == (("Comment", '"blah"'), ("Version", "1"), ("Max-Age", "15552000"))
    assert serialize_set_cookie(spec) == (
        'xx="1=2&3-4"; Expires=Sun, 27 Apr 1997 01:16:23 GMT; Path=/; Comment="blah"; Version=1; Max-Age=15552000'
    )


def test_attribute_names_case_insensitive():
    (spec,) = parse_set_cookie("a=b; PATH=/x; DoMaIn=.acme.com; SECURE", Mode.V0)
    assert (spec.path, spec.domain, spec.secure) == ("/x", ".acme.com", True)


def test_folded_set_cookie_with_expires_comma():
    specs = parse_set_cookie("a=1; expires=Wednesday, 09-Nov-99 23:12:40 GMT, b=2; path=/", Mode.V0)
    assert [s.name for s in specs] == ["a", "b"]
    assert specs[0].expires == 942189160
    assert specs[1].path == "/"


def test_v0_duplicate_attribute_last_wins():
    (spec,) = parse_set_cookie("a=1; path=/x; path=/y", Mode.V0)
    assert spec.path == "/y"


def test_v1_duplicate_same_value_is_fine():
    (spec,) = parse_set_cookie("a=1; Path=/x; Path=/x; Version=1", Mode.V1)
    assert spec.path == "/x"


@pytest.mark.parametrize(
    "text, mode, code",
    [
        ("", Mode.V1, "MissingNameValue"),
        ("", Mode.V0, "MissingNameValue"),
        ("justatoken", Mode.V0, "MissingNameValue"),
        ("=x", Mode.V0, "MissingNameValue"),
        ("$Version=1", Mode.V1, "ReservedName"),
        ('a="unterminated; Version=1', Mode.V1, "MalformedQuotedString"),
        ("a=1; Path=/a; Path=/b; Version=1", Mode.V1, "ConflictingAttribute"),
        ("a=1; Max-Age=soon; Version=1", Mode.V1, "InvalidAttribute"),
        ("a=1; Version=2", Mode.V1, "InvalidAttribute"),
        ("a=1; Port=\"80,x\"; Version=1", Mode.V1, "InvalidAttribute"),
        ("a=1; expires=someday", Mode.V0, "InvalidDate"),
        ("a=b c", Mode.V0, "InvalidValue"),
    ],
)
def test_parse_errors(text, mode, code):
    with pytest.raises(CookieSyntaxError) as info:
        parse_set_cookie(text, mode)
    assert info.value.code == code


def test_v1_missing_version_defaults_to_one():
    (spec,) = parse_set_cookie("a=1", Mode.V1)
    assert spec.version == 1


def test_port_forms():
    (bare,) = parse_set_cookie("a=1; Port; Version=1", Mode.V1)
    assert bare.port_spec.kind is PortKind.SAME
    (listed,) = parse_set_cookie('a=1; Port="443,80"; Version=1', Mode.V1)
    assert listed.port_spec == PortSpec(PortKind.LIST, (80, 443))
    assert listed.port_spec.echo_value() == '"443,80"'


def test_serialize_v0_rejects_whitespace_value():
    with pytest.raises(CookieSyntaxError):
        serialize_set_cookie(CookieSpec("a", "a b"))


def test_v0_spec_rejects_v1_fields():
    with pytest.raises(ValueError):
        CookieSpec("a", "b", max_age=1)


def test_quote_unquote():
    assert quote("abc") == "abc"
    assert quote('a "b"') == '"a \\"b\\""'
    assert unquote(quote('a "b" \\c')) == 'a "b" \\c'


def test_cookie_request_folding_equivalence():
    split = parse_cookie_request(["cookie1=value1", "cookie2=value2"])
    folded = parse_cookie_request(["cookie1=value1, cookie2=value2"])
    assert split == folded
    assert [e.name for e in folded.entries] == ["cookie1", "cookie2"]
    assert folded.version == 0


def test_cookie_request_v1():
    parsed = parse_cookie_request(['$Version=1; xx="1=2&3-4"; $Path="/"'])
    assert parsed.version == 1
    (entry,) = parsed.entries
    assert (entry.name, entry.value, entry.path) == ("xx", '"1=2&3-4"', "/")


def test_cookie_request_attributes_bind_to_previous_entry():
    parsed = parse_cookie_request('$Version=1; a=1; $Path="/a"; b=2; $Domain=".acme.com"; $Port="80"')
    a, b = parsed.entries
    assert a.path == "/a" and a.domain is None
    assert b.domain == ".acme.com" and b.port == '"80"'


@pytest.mark.parametrize(
    "text, code",
    [
        ("$Path=/; a=1", "OrphanAttribute"),
        ("a", "BareToken"),
        ("$Version=1; a=1; $Version=0", "MixedVersions"),
    ],
)
def test_cookie_request_errors(text, code):
    with pytest.raises(CookieSyntaxError) as info:
        parse_cookie_request(text)
    assert info.value.code == code


def test_serialize_cookie_header_forms():
    jar = Jar()
    ctx = RequestContext.from_url("http://www.acme.com/")
    jar.store(parse_set_cookie('xx="1=2&3-4"; Path=/; Version=1', Mode.V1)[0], ctx)
    selected = jar.select(ctx)
    assert serialize_cookie_header(selected, 1) == '$Version=1; xx="1=2&3-4"; $Path="/"'
    assert serialize_cookie_header([], 0) == ""
    assert serialize_cookie_header([], 1) == ""


@settings(max_examples=300)
@given(cookie_specs)
def test_round_trip(spec):
    mode = Mode.V1 if spec.version else Mode.V0
    assert parse_set_cookie(serialize_set_cookie(spec), mode) == [spec]


@settings(max_examples=200)
@given(st.lists(v0_specs, min_size=1, max_size=4))
def test_folded_round_trip_v0(specs):
    text = ", ".join(serialize_set_cookie(s) for s in specs)
    assert parse_set_cookie(text, Mode.V0) == specs


@settings(max_examples=200)
@given(st.lists(v1_specs, min_size=1, max_size=4))
def test_folded_round_trip_v1(specs):
    text = ", ".join(serialize_set_cookie(s) for s in specs)
    assert parse_set_cookie(text, Mode.V1) == specs


@settings(max_examples=200)
@given(st.lists(st.tuples(v1_specs, st.text(min_size=0, max_size=6)), min_size=1, max_size=4))
def test_cookie_header_round_trip(items):
    # serialize_cookie_header then parse_cookie_request recovers each entry.
    host = HostName.parse("www.acme.com")
    cookies = [
        StoredCookie(spec, host, 80, DomainPattern("www.acme.com"), "/" + path, 0, False)
        for spec, path in items
    ]
    parsed = parse_cookie_request(serialize_cookie_header(cookies, 1))
    assert parsed.version == 1
    assert [(e.name, e.value, e.path, e.domain) for e in parsed.entries] == [
        (c.spec.name, c.spec.value, c.effective_path, c.spec.domain) for c in cookies
    ]
