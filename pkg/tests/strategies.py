"""Hypothesis strategies shared by the property suites."""

from hypothesis import strategies as st

from statejar.headers import CookieSpec, PortKind, PortSpec, _quote_always

TOKEN_CHARS = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789!#%&'*+-.^_`|~"
V1_ATTRS = {"comment", "commenturl", "discard", "domain", "expires", "max-age", "path", "port", "secure", "version"}
V0_ATTRS = {"domain", "path", "expires", "secure"}

tokens = st.text(TOKEN_CHARS, min_size=1, max_size=8)
names = tokens.filter(lambda s: not s.startswith("$"))
printable = st.text(st.characters(min_codepoint=32, max_codepoint=126), max_size=10)
# v0 text: no separators the v0 grammar cannot carry.
v0_text = st.text(st.characters(min_codepoint=33, max_codepoint=126, blacklist_characters=";,"), max_size=10)
v0_nonempty = v0_text.filter(bool)
v1_values = st.one_of(tokens, printable.map(_quote_always))
timestamps = st.integers(0, 253402300799)  # through 9999-12-31
port_specs = st.one_of(
    st.just(PortSpec()),
    st.just(PortSpec(PortKind.SAME)),
    st.lists(st.integers(1, 65535), min_size=1, max_size=3).map(lambda ps: PortSpec(PortKind.LIST, tuple(ps))),
)


def _extras(known, value_strategy):
    name = tokens.filter(lambda s: s.lower() not in known and not s.startswith("$"))
    return st.lists(st.tuples(name, st.one_of(st.none(), value_strategy)), max_size=3).map(tuple)


v0_specs = st.builds(
    CookieSpec,
    name=names,
    value=v0_text,
    domain=st.none() | v0_nonempty,
    path=st.none() | v0_nonempty,
    expires=st.none() | timestamps,
    secure=st.booleans(),
    version=st.just(0),
    extras=_extras(V0_ATTRS, v0_nonempty),
)

v1_specs = st.builds(
    CookieSpec,
    name=names,
    value=v1_values,
    domain=st.none() | printable.filter(bool),
    path=st.none() | printable.filter(bool),
    expires=st.none() | timestamps,
    max_age=st.none() | st.integers(0, 2**40),
    discard=st.booleans(),
    secure=st.booleans(),
    comment=st.none() | printable,
    comment_url=st.none() | printable,
    port_spec=port_specs,
    version=st.just(1),
    extras=_extras(V1_ATTRS, v1_values),
)

cookie_specs = st.one_of(v0_specs, v1_specs)
