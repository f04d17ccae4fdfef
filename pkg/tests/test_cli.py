import pytest

from fanplanar.cli import main
from fanplanar.fpd import load, parse, serialize
from fanplanar.generators import FIXTURE_DIR, canonical


def fx(name):
    return str(FIXTURE_DIR / f"{name}.fpd")


def test_check_fig1b_reports_sf1(capsys):
    assert main(["check", "--fan", fx("fig1b")]) == 1
    assert "SF1" in capsys.readouterr().out


def test_check_planar_simple():
    assert main(["check", "--simple", fx("planar_k4")]) == 0


def test_check_flags(capsys):
    assert main(["check", "--quasi3", fx("fig3a_k3")]) == 1
    assert main(["check", "--density", "--configs", fx("fig1c")]) == 1
    out = capsys.readouterr().out
    assert "3-quasiplanar: no" in out and "S2=1" in out


def test_malformed_file(tmp_path):
    bad = tmp_path / "bad.fpd"
    bad.write_text("fpd 1\nv a\ne e1 a\n")
    assert main(["check", str(bad)]) == 2
    assert main(["check", str(tmp_path / "missing.fpd")]) == 2


def test_simplify(tmp_path, capsys):
    out = tmp_path / "k3.fpd"
    assert main(["simplify", fx("fig3a_k3"), "-o", str(out)]) == 0
    assert len(load(out).crossings) == 0
    assert main(["simplify", "--trace", fx("fig4_multi")]) == 0
    cap = capsys.readouterr()
    res = parse(cap.out)
    assert len(res.crossings) < len(canonical("fig4_multi").crossings)
    assert cap.err.startswith("Lemma")


def test_simplify_rejects_non_fan_planar():
    assert main(["simplify", fx("fig1d")]) == 1


def test_fuzz_is_deterministic(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(["fuzz", "--seed", "1", "--count", "3", "-o", str(a)]) == 0
    assert main(["fuzz", "--seed", "1", "--count", "3", "-o", str(b)]) == 0
    names = sorted(p.name for p in a.iterdir())
    assert names == ["fuzz_000001.fpd", "fuzz_000002.fpd", "fuzz_000003.fpd"]
    for n in names:
        assert (a / n).read_bytes() == (b / n).read_bytes()
        assert main(["simplify", str(a / n), "-o", str(tmp_path / f"s_{n}")]) == 0


def test_fuzz_bad_params():
    assert main(["fuzz", "--count", "0"]) == 2
    assert main(["fuzz", "--count", "2"]) == 2
    assert main(["fuzz", "--n", "2"]) == 2


def test_render(tmp_path):
    out = tmp_path / "k4.svg"
    assert main(["render", fx("planar_k4"), "-o", str(out)]) == 0
    text = out.read_text()
    assert text.count("<path ") == 6 and text.count("<circle ") == 4


def test_stdin(monkeypatch, capsys):
    import io

    monkeypatch.setattr("sys.stdin", io.StringIO(serialize(canonical("fig1a_fan"))))
    assert main(["check", "-"]) == 0


def test_missing_subcommand():
    with pytest.raises(SystemExit):
        main([])


def test_internal_contradiction_exit(monkeypatch):
    from fanplanar import cli
    from fanplanar.engine import InternalContradiction

    def boom(d):
        raise InternalContradiction("forced")

    monkeypatch.setattr(cli, "simplify", boom)
    assert main(["simplify", fx("fig1c")]) == 3
