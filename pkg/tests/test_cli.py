import io
import json

import pytest

from dkcalc import cli


def run(capsys, *argv, stdin=None, monkeypatch=None):
    if stdin is not None:
        monkeypatch.setattr("sys.stdin", io.StringIO(stdin))
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def doc(text):
    return json.loads(text)


def test_normalize_quasidegeneracy_word(capsys):
    code, out, _ = run(capsys, "normalize", "d0 u1", "--n", "1")
    assert code == 0
    data = doc(out)
    assert data["schema"] == "dkcalc.normalize/1"
    assert data["result"]["is_identity"] is True
    assert data["result"]["map"]["table"] == [0, 1]
    for key in ("version", "command", "seed", "config_hash"):
        assert key in data


def test_normalize_empty_word(capsys):
    code, out, _ = run(capsys, "normalize", "", "--n", "2")
    assert code == 0
    assert doc(out)["result"]["is_identity"] is True


def test_normalize_json_word_and_canonical_form(capsys):
    code, out, _ = run(capsys, "normalize", '[["s", 0], ["d", 1]]', "--n", "1")
    assert code == 0
    res = doc(out)["result"]
    assert res["from_level"] == 1 and res["to_level"] == 1
    assert res["canonical_text"] == "s0 d1"


@pytest.mark.parametrize("argv", [
    ["normalize", "d0 q1", "--n", "1"],
    ["normalize", "d5", "--n", "1"],
    ["normalize", "[1, 2", "--n", "1"],
    ["normalize", "d0"],
    ["normalize", "t0", "--n", "2", "--scheme", "delta"],
    ["frobnicate"],
])
def test_malformed_input_exits_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert err


def test_compose_last_word_acts_first(capsys):
    # d1 acts on level 1, then s0 acts on level 0
    code, out, _ = run(capsys, "compose", "s0", "d1", "--n", "1")
    assert code == 0
    res = doc(out)["result"]
    assert res["map"]["table"] == [0, 0]
    assert res["from_level"] == 1 and res["to_level"] == 1


def test_decompose_identity(capsys):
    code, out, _ = run(capsys, "decompose", "--instance", "exponential:3:S3", "--element", "identity", "--n", "2")
    assert code == 0
    res = doc(out)["result"]
    assert res["complete"] is True
    assert all(set(c["element"]["payload"].values()) == {0} for c in res["components"])


@pytest.mark.parametrize("spec,variant", [("exponential:3:S3", "simplicial"), ("exponential:3:S3", "symmetric"),
                                          ("gamma", "simplicial")])
def test_decompose_then_reconstruct(capsys, monkeypatch, spec, variant):
    code, out, _ = run(capsys, "decompose", "--instance", spec, "--n", "3", "--variant", variant, "--seed", "9")
    assert code == 0
    original = doc(out)["result"]["input"]
    code, out2, _ = run(capsys, "reconstruct", stdin=out, monkeypatch=monkeypatch)
    assert code == 0
    assert doc(out2)["result"]["element"] == original


def test_decompose_element_from_file(capsys, tmp_path):
    code, out, _ = run(capsys, "act", "--instance", "gamma", "--word", "s0", "--element", "random", "--n", "1")
    assert code == 0
    path = tmp_path / "element.json"
    path.write_text(out)
    code, out, _ = run(capsys, "decompose", "--instance", "gamma", "--element", f"@{path}")
    assert code == 0
    assert doc(out)["result"]["n"] == 2


def test_non_extending_order_needs_force(capsys):
    base = ["decompose", "--instance", "exponential:3:S3", "--n", "2", "--order", "bits:3,2,1,0"]
    code, _, err = run(capsys, *base)
    assert code == 2 and "--force" in err
    code, out, _ = run(capsys, *base, "--force")
    assert code in (0, 1)
    assert doc(out)["result"]["method"] == "peeling"


def test_act_needs_single_instance(capsys):
    code, _, err = run(capsys, "act", "--word", "d0", "--n", "1")
    assert code == 2 and "instance" in err


def test_verify_presentations(capsys):
    code, out, _ = run(capsys, "verify", "presentations", "--n-max", "4")
    assert code == 0
    res = doc(out)["result"]
    assert res["failed"] == 0 and res["checked"] > 0


def test_verify_sdp_binary_order(capsys):
    code, out, _ = run(capsys, "verify", "sdp", "--n", "3", "--trials", "3")
    assert code == 0
    res = doc(out)["result"]
    assert {e["instance"] for e in res["entries"]} == set(cli.DEFAULT_INSTANCES)


def test_verify_sdp_with_violating_order(capsys):
    code, out, _ = run(capsys, "verify", "sdp", "--n", "2", "--order", "bits:3,2,1,0",
                       "--instance", "exponential:3:S3", "--trials", "5")
    assert code in (0, 1)
    res = doc(out)["result"]
    assert res["entries"][0]["extends"] is False
    if code == 1:
        assert res["entries"][0]["report"]["first_failure"] is not None


@pytest.mark.parametrize("scope", ["pushthrough", "dichotomy", "symmetric", "replacement", "closed-forms"])
def test_verify_scopes(capsys, scope):
    code, out, _ = run(capsys, "verify", scope, "--n", "2", "--n-max", "3", "--trials", "5")
    assert code == 0, out
    assert doc(out)["result"]["failed"] == 0


def test_verify_symmetric_rejects_gamma(capsys):
    code, _, _ = run(capsys, "verify", "symmetric", "--instance", "gamma")
    assert code == 2


def search_argv(*extra):
    return ["search", "--n", "3", "--mode", "sample", "--limit", "3", "--trials", "2",
            "--instance", "exponential:3:S3", "--seed", "21", *extra]


def test_search_is_byte_identical(capsys):
    _, first, _ = run(capsys, *search_argv())
    _, second, _ = run(capsys, *search_argv())
    assert first == second
    lines = [json.loads(x) for x in first.splitlines()]
    assert lines[0]["type"] == "header" and lines[-1]["type"] == "summary"
    assert [x["type"] for x in lines[1:-1]] == ["verdict"] * 3
    assert len({x["config_hash"] for x in lines}) == 1


def test_search_independent_of_jobs(capsys):
    _, one, _ = run(capsys, *search_argv("--jobs", "1"))
    _, many, _ = run(capsys, *search_argv("--jobs", "2"))
    assert one == many


def test_seed_changes_output(capsys):
    _, a, _ = run(capsys, "decompose", "--instance", "gamma", "--n", "2", "--seed", "1")
    _, b, _ = run(capsys, "decompose", "--instance", "gamma", "--n", "2", "--seed", "2")
    assert doc(a)["result"]["input"] != doc(b)["result"]["input"]


def test_seed_from_environment(capsys, monkeypatch):
    monkeypatch.setenv(cli.SEED_ENV, "17")
    _, a, _ = run(capsys, "decompose", "--instance", "gamma", "--n", "2")
    _, b, _ = run(capsys, "decompose", "--instance", "gamma", "--n", "2", "--seed", "17")
    assert doc(a)["seed"] == 17
    assert doc(a)["result"] == doc(b)["result"]
    monkeypatch.setenv(cli.SEED_ENV, "many")
    code, _, _ = run(capsys, "decompose", "--instance", "gamma", "--n", "2")
    assert code == 2


def test_out_file_and_hash_ignores_it(capsys, tmp_path):
    path = tmp_path / "result.json"
    code, out, _ = run(capsys, "verify", "dichotomy", "--n-max", "3", "--out", str(path))
    assert code == 0 and out == ""
    _, direct, _ = run(capsys, "verify", "dichotomy", "--n-max", "3")
    assert path.read_text() == direct


def test_replay_search_output(capsys, monkeypatch):
    _, lines, _ = run(capsys, "search", "--n", "2", "--mode", "exhaustive", "--trials", "2",
                      "--instance", "exponential:3:S3", "--seed", "3")
    verdicts = [json.loads(x) for x in lines.splitlines()][1:-1]
    failed = [v for v in verdicts if v["status"] == "Failed"]
    assert failed
    code, out, _ = run(capsys, "replay", stdin=lines, monkeypatch=monkeypatch)
    res = doc(out)["result"]
    assert res["witnesses"] == len(failed)
    assert res["report"]["checks"]["reproduced"]["failed"] == 0
    assert code == 1


def test_replay_empty_and_malformed(capsys, monkeypatch):
    code, out, _ = run(capsys, "replay", stdin="[]", monkeypatch=monkeypatch)
    assert code == 0 and doc(out)["result"]["witnesses"] == 0
    code, _, _ = run(capsys, "replay", stdin='[{"check": "normality"}]', monkeypatch=monkeypatch)
    assert code == 2
