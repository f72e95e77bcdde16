import pytest
from hypothesis import given, settings, strategies as st

from statejar.context import Trigger
from statejar.errors import ScriptError
from statejar.sim.script import format_script, parse_script

from conftest import SCENARIOS
import scriptgen


def test_parse_leakage():
    script = parse_script((SCENARIOS / "leakage.script").read_text())
    assert list(script.clients) == ["c1"]
    assert script.start == 860000000
    assert [s.action for s in script.steps] == ["request", "response", "request", "response"]
    assert script.steps[1].cookies == ["Customer=custid; Domain=.biz.com; Path=/"]


def test_derived_step():
    script = parse_script((SCENARIOS / "third-party.script").read_text())
    derived = script.steps[2]
    assert (derived.from_step, derived.trigger) == (0, Trigger.INLINE)
    assert script.origin_step(2) == 0


def test_empty_script():
    script = parse_script("")
    assert script.steps == []


@pytest.mark.parametrize(
    "text, step",
    [
        ("client c navigator3\nresponse\n", 0),
        ("request c http://a.com/\n", 0),
        ("client c navigator3\nrequest c http://a.com/ via=p9\n", 0),
        ("client c navigator3\nrequest c http://a.com/\nresponse\nrequest c http://b.com/ from=0 trigger=inline\n", 2),
        ("client c navigator3\nrequest c http://a.com/\nresponse\n  link inline http://b.com/\n"
         "request c http://b.com/ from=1 trigger=inline\n", 2),
        ("client c navigator3\nrequest c http://a.com/ from=0\n", 0),
        ("client c navigator3\nrequest c http://a.com/\nresponse\nbogus\n", 2),
        ("client c navigator3\nadvance soon\n", 0),
        ("client c navigator3\nrequest c http://a.com/\n  link inline http://b.com/\n", 0),
    ],
)
def test_integrity_errors(text, step):
    with pytest.raises(ScriptError) as info:
        parse_script(text)
    assert info.value.step == step
    assert info.value.lineno is not None


def test_error_outside_steps_has_no_step():
    with pytest.raises(ScriptError) as info:
        parse_script("client c mosaic\n")
    assert info.value.step is None
    assert info.value.lineno == 1


@settings(max_examples=50)
@given(st.integers(0, 10_000))
def test_format_parse_round_trip(seed):
    text = format_script(scriptgen.random_script(seed))
    assert format_script(parse_script(text)) == text
