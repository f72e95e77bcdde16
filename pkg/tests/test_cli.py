import pytest

from statejar.cli import main

from conftest import CORPUS, SCENARIOS


@pytest.fixture(autouse=True)
def jar_home(tmp_path, monkeypatch):
    monkeypatch.setenv("STATEJAR_HOME", str(tmp_path / "home"))
    return tmp_path / "home"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_parse_v0(capsys):
    code, out, _ = run(capsys, "parse", "--mode", "v0", "id=waldo")
    assert code == 0
    assert "0.name=id\n" in out and "0.value=waldo\n" in out


def test_parse_error(capsys):
    code, out, _ = run(capsys, "parse", "--mode", "v1", "")
    assert (code, out) == (2, "error=MissingNameValue\n")


def test_parse_cookie_folding(capsys):
    code, out, _ = run(capsys, "parse", "--mode", "cookie", "cookie1=value1, cookie2=value2")
    assert code == 0 and "entries=2\n" in out


@pytest.mark.parametrize(
    "argv, code, line",
    [
        (["--v0", "www.shop.com", ".com"], 1, "Reject(TooBroad)"),
        (["--v1", "b.example.com", ".example.com"], 0, "Accept"),
        (["--v1", "a.b.example.com", ".example.com"], 1, "Reject(TooManyLevels)"),
        (["--v0", "some.ucl.ac.uk", ".ucl.ac.uk"], 0, "Accept"),
    ],
)
def test_match(capsys, argv, code, line):
    assert run(capsys, "match", *argv)[:2] == (code, line + "\n")


def test_match_malformed_host(capsys):
    assert run(capsys, "match", "bad host", ".x.com")[0] == 64


@pytest.mark.parametrize("argv", [[], ["parse"], ["parse", "--mode", "v9", "x=1"], ["match", "--v0", "--v1", "a", "b"]])
def test_bad_flags(capsys, argv):
    with pytest.raises(SystemExit) as info:
        main(argv)
    assert info.value.code == 64


def test_jar_flow(capsys, jar_home):
    exp = "expires=Sun, 27 Apr 2031 01:16:23 GMT"
    assert run(capsys, "jar", "store", "--now", "100", "http://www.acme.com/", f"name1=foo; path=/; {exp}")[:2] == (0, "store.0=Stored\n")
    run(capsys, "jar", "store", "--now", "100", "http://www.acme.com/bar/", f"name1=foo2; path=/bar; {exp}")
    code, out, _ = run(capsys, "jar", "select", "--now", "200", "http://www.acme.com/bar/x")
    assert code == 0
    assert out.splitlines()[-1] == "header=name1=foo2; name1=foo"
    assert (jar_home / "cookies.txt").exists()
    code, out, _ = run(capsys, "jar", "load")
    assert code == 0 and out.startswith("count=2\n")
    code, out, _ = run(capsys, "jar", "save", "--now", "2000000000")
    assert "purged=2" in out
    assert run(capsys, "jar", "end-session")[:2] == (0, "removed=0\n")


def test_jar_store_rejected(capsys, tmp_path):
    jar = tmp_path / "j.txt"
    code, out, _ = run(capsys, "jar", "store", "--jar", str(jar), "http://www.shop.com/", "a=1; domain=.com")
    assert (code, out) == (1, "store.0=Rejected(InvalidDomain)\n")


def test_jar_load_missing_and_corrupt(capsys, tmp_path):
    assert run(capsys, "jar", "load", "--jar", str(tmp_path / "none.txt"))[0] == 66
    bad = tmp_path / "bad.txt"
    bad.write_text("0\tonly\n")
    assert run(capsys, "jar", "load", "--jar", str(bad))[0] == 65


def test_policy_eval(capsys, tmp_path):
    code, out, _ = run(capsys, "policy", "eval", "--origin", "http://www.news.com/", "--url", "http://www.ads.com/b.gif")
    assert code == 1 and "verdict=Reject(ThirdParty)" in out
    code, out, _ = run(capsys, "policy", "eval", "--origin", "http://www.news.com/", "--url",
                       "http://www.ads.com/b.gif", "--policy", str(SCENARIOS / "override.policy"))
    assert code == 0 and "verdict=Accept" in out
    code, out, _ = run(capsys, "policy", "eval", "--origin", "http://www.news.com/", "--url",
                       "http://images.news.com/a.gif", "--policy", str(SCENARIOS / "strict.policy"),
                       "--origin-cookie", ".news.com")
    assert code == 0
    bad = tmp_path / "bad.policy"
    bad.write_text("mode=whatever\n")
    assert run(capsys, "policy", "eval", "--origin", "http://a.com/", "--policy", str(bad))[0] == 65


def test_simulate_third_party(capsys):
    code, out, _ = run(capsys, "simulate", str(SCENARIOS / "third-party.script"))
    assert code == 0 and "reason=ThirdParty" in out
    code, out, _ = run(capsys, "simulate", str(SCENARIOS / "third-party.script"),
                       "--policy", str(SCENARIOS / "override.policy"))
    assert "kind=CookieAccepted\trule=jar.store;policy.override" in out


def test_simulate_expect(capsys, tmp_path):
    script = SCENARIOS / "leakage.script"
    assert run(capsys, "simulate", str(script), "--expect", str(SCENARIOS / "leakage.trace"))[:2] == (0, "match=true\n")
    code, out, _ = run(capsys, "simulate", str(script), "--expect", str(SCENARIOS / "spoofing.trace"))
    assert code == 1
    assert out.startswith("---") and "\n-step=" in out and "\n+step=" in out


def test_simulate_trace_file_and_jar(capsys, tmp_path):
    trace = tmp_path / "out.trace"
    jar = tmp_path / "j.txt"
    run(capsys, "jar", "store", "--jar", str(jar), "--now", "860000000", "http://info.biz.com/",
        "Customer=old; domain=.biz.com; path=/; expires=Sun, 27 Apr 2031 01:16:23 GMT")
    code, out, _ = run(capsys, "simulate", str(SCENARIOS / "leakage.script"), "--jar", str(jar), "--trace", str(trace))
    assert (code, out) == (0, "")
    assert "previous=old" in trace.read_text()


def test_simulate_empty_script(capsys, tmp_path):
    empty = tmp_path / "empty.script"
    empty.write_text("")
    trace = tmp_path / "t"
    assert run(capsys, "simulate", str(empty), "--trace", str(trace))[0] == 0
    assert trace.read_text() == ""


def test_simulate_script_error(capsys, tmp_path):
    bad = tmp_path / "bad.script"
    bad.write_text("client c navigator3\nrequest c http://a.com/\nresponse\nresponse\n")
    code, out, err = run(capsys, "simulate", str(bad))
    assert code == 65
    assert out == "error=ScriptError\tstep=2\n"
    assert "step 2" in err


def test_simulate_missing_script(capsys, tmp_path):
    assert run(capsys, "simulate", str(tmp_path / "nope.script"))[0] == 66


def test_corpus_shipped(capsys):
    code, out, _ = run(capsys, "corpus", str(CORPUS))
    assert code == 0
    assert out.splitlines()[-1].endswith("fail=0")


def test_corpus_failing_case(capsys, tmp_path):
    (tmp_path / "x.case").write_text("id=wrong-one\nmode=v0\ninput=id=waldo\nexpect.0.value=nope\n")
    code, out, _ = run(capsys, "corpus", str(tmp_path))
    assert code == 1
    assert out.startswith("FAIL\twrong-one\t")


def test_corpus_empty_and_missing(capsys, tmp_path):
    code, out, err = run(capsys, "corpus", str(tmp_path))
    assert (code, out) == (0, "cases=0\tpass=0\tfail=0\n")
    assert "warning" in err
    assert run(capsys, "corpus", str(tmp_path / "missing"))[0] == 66
