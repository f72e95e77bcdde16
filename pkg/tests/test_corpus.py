import pytest

from statejar.corpus import CorpusError, MODES, load_corpus, parse_cases, run_case

from conftest import CORPUS


def test_shipped_corpus_passes():
    cases = load_corpus(CORPUS)
    assert len(cases) >= 60
    failures = [(c.id, r.message) for c in cases if not (r := run_case(c)).passed]
    assert failures == []


def test_shipped_corpus_covers_every_mode():
    used = {c.mode for c in load_corpus(CORPUS)}
    assert used == set(MODES)


def test_wrong_expectation_fails():
    (case,) = parse_cases("id=bad\nmode=v0\ninput=id=waldo\nexpect.0.value=carmen\n")
    result = run_case(case)
    assert not result.passed
    assert "expected 'carmen', got 'waldo'" in result.message


def test_unexpected_error_fails():
    (case,) = parse_cases("id=e\nmode=v1\ninput=\nexpect.cookies=1\n")
    assert not run_case(case).passed


def test_reruns_are_deterministic():
    cases = load_corpus(CORPUS)
    assert [run_case(c).passed for c in cases] == [run_case(c).passed for c in cases]


@pytest.mark.parametrize(
    "text",
    [
        "mode=v0\nexpect.x=1\n",
        "id=a\nmode=v0\n",
        "id=a\nmode=v0\nexpect.x=1\nexpect.x=2\n",
        "id=a\nmode=v0\nnot a pair\n",
    ],
)
def test_malformed_records(text):
    with pytest.raises(CorpusError):
        parse_cases(text)


def test_duplicate_ids(tmp_path):
    (tmp_path / "a.case").write_text("id=x\nmode=date\ninput=Thu, 01 Jan 1970 00:00:00 GMT\nexpect.epoch=0\n")
    (tmp_path / "b.case").write_text("id=x\nmode=date\ninput=Thu, 01 Jan 1970 00:00:00 GMT\nexpect.epoch=0\n")
    with pytest.raises(CorpusError):
        load_corpus(tmp_path)


def test_unknown_mode():
    (case,) = parse_cases("id=a\nmode=telepathy\nexpect.x=1\n")
    assert not run_case(case).passed


def test_missing_directory(tmp_path):
    with pytest.raises(CorpusError):
        load_corpus(tmp_path / "nope")
