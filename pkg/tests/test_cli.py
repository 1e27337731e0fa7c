import json
import subprocess
import sys

import pytest

from anatomy import __version__
from anatomy.cli import main
from conftest import trial_factor


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rows_of(out):
    lines = [l for l in out.splitlines() if not l.startswith("#")]
    return [l.split(",") for l in lines]


def test_classify_example(capsys):
    code, out, _ = run(capsys, "classify", "--n", "1680", "--h", "3")
    assert code == 0
    header, row = rows_of(out)
    rec = dict(zip(header, row))
    assert rec["bad"] == "true" and rec["very_bad"] == "false" and rec["p0"] == "41"
    assert rec["f3_witnesses"] == ""
    assert "a_cap" in out.splitlines()[0]


def test_classify_lists_witnesses(capsys):
    code, out, _ = run(capsys, "classify", "--n", "47", "--h", "3", "--format", "json")
    doc = json.loads(out)
    assert doc["rows"][0]["f3_witnesses"].split() == ["3", "4"]


def test_constants_example(capsys):
    code, out, _ = run(capsys, "constants", "--which", "erdos-szekeres", "--precision", "1e-6")
    assert code == 0 and "2.1732543 ± 1e-6" in out


def test_header_embeds_version_and_config(capsys):
    _, out, _ = run(capsys, "enumerate", "B", "--x", "100")
    first = out.splitlines()[0]
    assert first.startswith(f"# anatomy {__version__} command=enumerate")
    assert '"hmax": 64' in first


def test_json_schema(capsys):
    _, out, _ = run(capsys, "enumerate", "VB1", "--x", "100", "--format", "json")
    doc = json.loads(out)
    assert set(doc) >= {"command", "config", "rows"}
    assert [r["n"] for r in doc["rows"]] == [1, 4, 8, 9, 16, 25, 27, 32, 36, 49, 64, 72, 81, 100]


def test_csv_lf_endings(capsys):
    _, out, _ = run(capsys, "counts", "--x", "100", "--step", "50", "--sets", "B1,VB1")
    assert "\r" not in out
    assert rows_of(out) == [["t", "B1", "VB1"], ["50", "12", "10"], ["100", "19", "14"]]


def test_bfile_roundtrip_and_verify(capsys, tmp_path):
    # an independent listing of numbers divisible by the square of their largest prime
    ref = [n for n in range(2, 20001) if (lambda f: f[max(f)] >= 2)(trial_factor(n))]
    bfile = tmp_path / "b070003.txt"
    bfile.write_text("# reference listing\n" + "".join(f"{i} {v}\n" for i, v in enumerate(ref, 1)))
    code, out, _ = run(capsys, "verify-oeis", "B1", "--bfile", str(bfile), "--x", "20000", "--exclude-one")
    assert code == 0 and f"OK through index {len(ref)}" in out
    bad = tmp_path / "bad.txt"
    bad.write_text("1 4\n2 8\n3 10\n")
    _, out, _ = run(capsys, "verify-oeis", "B1", "--bfile", str(bad), "--x", "100", "--exclude-one")
    assert "first mismatch at index 3" in out
    code, out, _ = run(capsys, "enumerate", "B1", "--x", "100", "--format", "bfile", "--exclude-one")
    assert [l for l in out.splitlines() if not l.startswith("#")][:3] == ["1 4", "2 8", "3 9"]


def test_determinism(capsys):
    argv = ["factorial-square", "--x", "500", "--format", "json"]
    assert run(capsys, *argv)[1] == run(capsys, *argv)[1]


def test_precondition_exit_code_and_no_partial_output(capsys, tmp_path):
    target = tmp_path / "out.csv"
    code, out, err = run(capsys, "char-sum", "--q", "16", "--z", "100", "--output", str(target))
    assert code == 2 and out == "" and "cubefree" in err
    assert not target.exists()
    assert run(capsys, "pell", "--d", "9")[0] == 2
    assert run(capsys, "classify", "--n", "10", "--h", "0")[0] == 2
    assert run(capsys, "enumerate", "XYZ", "--x", "10")[0] == 2
    assert run(capsys, "hyperbola", "--a", "1", "--b", "1", "--h", "3", "--x", "10", "--format", "bfile")[0] == 2


def test_invariant_exit_code(capsys, monkeypatch):
    import anatomy.cli as cli

    monkeypatch.setattr(cli, "b1_count_exact", lambda x: -1)
    code, out, err = run(capsys, "b1-identity", "--x", "1000")
    assert code == 3 and out == "" and "internal" in err


def test_threads_env(capsys, monkeypatch):
    monkeypatch.setenv("ANATOMY_THREADS", "4")
    code, out4, _ = run(capsys, "psi", "--x", "10**6", "--y", "100")
    monkeypatch.setenv("ANATOMY_THREADS", "1")
    _, out1, _ = run(capsys, "psi", "--x", "1e6", "--y", "100")
    assert code == 0 and out4 == out1 and "72271" in out1
    monkeypatch.setenv("ANATOMY_THREADS", "zero")
    assert run(capsys, "psi", "--x", "10", "--y", "2")[0] == 2


@pytest.mark.parametrize(
    "argv, expect",
    [
        (["pell", "--d", "61"], "1766319049,226153980"),
        (["pell", "--u", "2", "--v", "1", "--ybound", "10"], "2,1,5,7"),
        (["hyperbola", "--a", "2", "--b", "1", "--h", "-1", "--x", "30"], "\n3\n"),
        (["powerful-linear", "--a", "1", "--b", "1", "--h", "1", "--x", "1e6"], "\n8\n"),
        (["b1-identity", "--x", "1e5"], "100000,1893,1893,true"),
        (["sieve-report", "--length", "100", "--moduli", "2:0;3:0;5:0", "--k", "1"], "26,0.75"),
        (["char-sum", "--q", "3", "--z", "10", "--index", "1"], "3,1,3,true"),
        (["exceptional", "--z", "1000", "--qmax", "20"], "characters_scanned"),
        (["fracparts", "--n", "12167", "--p", "64"], '"forbidden_region": 0'),
        (["enumerate", "F3", "--x", "50"], "\n18,50\n"),
        (["factorial-square", "--x", "10000", "--step", "5000"], "t,solutions,h1_family,ratio_sqrt"),
    ],
)
def test_subcommands(capsys, argv, expect):
    code, out, err = run(capsys, *argv)
    assert code == 0, err
    assert expect in out


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "anatomy", "psi", "--x", "100", "--y", "3"], capture_output=True, text=True)
    assert res.returncode == 0 and "100,3,20" in res.stdout
