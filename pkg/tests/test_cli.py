import pytest

from attachtbl.cli import main
from attachtbl.tbl import RuleSequence

from conftest import BUNDLED_CORPUS
from test_tbl import SIX

CORPUS = str(BUNDLED_CORPUS)


@pytest.fixture
def six(tmp_path):
    path = tmp_path / "six.grp"
    path.write_text("\n".join(SIX) + "\n", encoding="utf-8")
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_extract(capsys, six):
    code, out, _ = run(capsys, "extract", "--corpus", six, "--lexicon", "builtin", "--mode", "v-a")
    assert code == 0
    rows = [l.split("\t") for l in out.splitlines()]
    assert rows[0] == ["0", "3", "vnpn", "v-a", "1,2", "1"]
    assert len(rows) == 6


def test_categorize(capsys, six):
    code, out, _ = run(capsys, "categorize", "--corpus", six, "--lexicon", "builtin")
    assert code == 0
    assert out.splitlines()[0] == "0\t3\tvnpn\tto"


def test_train_apply_eval(capsys, six, tmp_path):
    rules = tmp_path / "rules.txt"
    code, _, _ = run(capsys, "train", "--corpus", six, "--lexicon", "builtin", "--mode", "all", "--threshold", "2", "--out", str(rules))
    assert code == 0
    seq = RuleSequence.load(rules)
    assert len(seq) == 1 and seq.threshold == 2
    assert rules.read_text().startswith("# attachtbl rules\n")

    code, out, _ = run(capsys, "apply", "--corpus", six, "--lexicon", "builtin", "--rules", str(rules))
    assert code == 0
    assert [l.split("\t")[3] for l in out.splitlines()] == ["1", "1", "1", "1", "2", "2"]

    code, out, _ = run(capsys, "eval", "--corpus", six, "--lexicon", "builtin", "--rules", str(rules), "--kv")
    assert code == 0
    kv = dict(l.split("=", 1) for l in out.splitlines() if "=" in l)
    assert kv["accuracy"] == "83.3%" and kv["baseline_accuracy"] == "16.7%"


def test_eval_without_rules_is_baseline(capsys, six):
    code, out, _ = run(capsys, "eval", "--corpus", six, "--lexicon", "builtin", "--mode", "v-a", "--kv")
    assert code == 0
    assert "accuracy=16.7%" in out


def test_composite(capsys, six, tmp_path):
    rules = tmp_path / "rules.txt"
    run(capsys, "train", "--corpus", six, "--lexicon", "builtin", "--out", str(rules))
    code, out, _ = run(capsys, "composite", "--corpus", six, "--lexicon", "builtin", "--rules", f"vnpn={rules}", "--kv")
    assert code == 0
    assert "accuracy=83.3%" in out
    code, _, err = run(capsys, "composite", "--corpus", six, "--lexicon", "builtin", "--rules", f"bogus={rules}")
    assert code == 1 and "unknown category" in err


def test_stats(capsys):
    code, out, _ = run(capsys, "stats", "--corpus", CORPUS, "--lexicon", "builtin")
    assert code == 0
    lines = out.splitlines()
    assert lines[0].split() == ["Category", "A", "V-A", "Err", "Prev", "n"]
    assert lines[-1].split() == ["Overall", "67.4%", "90.2%", "2.6%", "100.0%", "500"]


def test_missing_lexicon(capsys, six):
    code, _, err = run(capsys, "stats", "--corpus", six)
    assert code == 1
    assert "--lexicon" in err


def test_mode_conflict(capsys, six, tmp_path):
    rules = tmp_path / "rules.txt"
    run(capsys, "train", "--corpus", six, "--lexicon", "builtin", "--mode", "v-a", "--out", str(rules))
    code, _, err = run(capsys, "eval", "--corpus", six, "--lexicon", "builtin", "--rules", str(rules), "--mode", "all")
    assert code == 1 and "conflicts" in err


def test_malformed_corpus(capsys, tmp_path):
    bad = tmp_path / "bad.grp"
    bad.write_text("[ng a] [ig of {gold=0}] [ng b]\n[ng a\n", encoding="utf-8")
    code, _, err = run(capsys, "extract", "--corpus", str(bad), "--lexicon", "builtin")
    assert code == 1
    assert "line 2, column 1" in err


def test_missing_file(capsys):
    code, _, err = run(capsys, "stats", "--corpus", "/nonexistent.grp", "--lexicon", "builtin")
    assert code == 1 and err.startswith("attachtbl stats: error:")


def test_bad_threshold(capsys, six):
    code, _, _ = run(capsys, "train", "--corpus", six, "--lexicon", "builtin", "--threshold", "0")
    assert code == 1


def test_quadruple_default_threshold(capsys, tmp_path):
    quad = tmp_path / "train.quad"
    quad.write_text("\n".join(["sent cup to her V", "gave letter to him V", "saw dog with glee N"] * 2) + "\n", encoding="utf-8")
    out = tmp_path / "rules.txt"
    assert run(capsys, "train", "--corpus", str(quad), "--lexicon", "builtin", "--out", str(out))[0] == 0
    assert RuleSequence.load(out).threshold == 3
    grp = tmp_path / "train.grp"
    grp.write_text("\n".join(SIX) + "\n", encoding="utf-8")
    assert run(capsys, "train", "--corpus", str(grp), "--lexicon", "builtin", "--out", str(out))[0] == 0
    assert RuleSequence.load(out).threshold == 2


def test_usage_error_exits(capsys):
    with pytest.raises(SystemExit) as info:
        main(["nope"])
    assert info.value.code == 2
