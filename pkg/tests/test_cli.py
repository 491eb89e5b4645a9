import pytest

from fastmm.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_validate(capsys):
    code, out, _ = run(capsys, "validate", "--scheme", "strassen")
    assert code == 0 and out.strip() == "valid"


def test_validate_core_fails(capsys):
    code, out, _ = run(capsys, "validate", "--scheme", "altbasis-core")
    assert code == 1 and out.startswith("invalid")


def test_gamma_strassen(capsys):
    code, out, _ = run(capsys, "gamma", "--scheme", "strassen", "--p", "inf", "--q", "inf")
    assert code == 0
    assert out.splitlines()[1].split()[3] == "12"


def test_bounds_csv(capsys):
    code, out, _ = run(capsys, "bounds", "--scheme", "winograd", "--levels", "2", "--format", "csv")
    rows = out.splitlines()
    assert code == 0 and rows[0].startswith("scheme,p,q,gamma,amp,q0,exponent,leading_coeff")
    assert len(rows) == 5


@pytest.mark.parametrize("argv", [
    ["nosuch"],
    ["validate", "--scheme", "nosuch"],
    ["validate"],
    ["mm", "--scheme", "strassen", "--size", "32"],  # no seed
    ["bench"],  # no seed
    ["orbit", "--scheme", "strassen"],  # no seed
    ["gamma", "--scheme", "strassen", "--p", "7"],
    ["validate", "--scheme", "strassen", "--bogus"],
])
def test_usage_errors(capsys, argv):
    assert main(argv) == 2


def test_optimize_and_transpose(capsys, tmp_path):
    sms = tmp_path / "m.sms"
    sms.write_text("3 3 M\n1 1 1\n1 2 1\n2 1 1\n2 2 1\n2 3 1\n3 3 1\n0 0 0\n")
    code, out, _ = run(capsys, "optimize", "--input", str(sms), "--mode", "best")
    assert code == 0 and out.startswith("# inputs 3 outputs 3")
    slp = tmp_path / "m.slp"
    slp.write_text(out)
    code, out, _ = run(capsys, "transpose", "--input", str(slp))
    assert code == 0 and "o2 :=" in out
    code, out, _ = run(capsys, "optimize", "--input", str(sms), "--emit", "csv-counts")
    assert out.splitlines()[1].endswith(",best,2,0,0")


def test_optimize_scheme_counts(capsys):
    code, out, _ = run(capsys, "optimize", "--scheme", "winograd", "--emit", "csv-counts")
    assert code == 0 and "winograd,total,best,15,0,0" in out


def test_sparsify(capsys):
    code, out, _ = run(capsys, "sparsify", "--scheme", "winograd")
    assert code == 0
    assert out.count("0 0 0") == 6
    assert "verified True" in out and "core_adds 12" in out


def test_mm(capsys):
    code, out, _ = run(capsys, "mm", "--scheme", "strassen", "--size", "32", "--seed", "4")
    assert code == 0 and "ratio" in out
    code, out, _ = run(capsys, "mm", "--scheme", "accurate", "--size", "32", "--seed", "4", "--altbasis")
    assert code == 0 and "altbasis" in out
    assert main(["mm", "--schedule", "strassen,winograd", "--size", "8", "--seed", "1"]) == 0
    assert main(["mm", "--scheme", "strassen", "--size", "6", "--levels", "3", "--seed", "1"]) == 2


def test_bench(capsys, tmp_path):
    out = tmp_path / "b.csv"
    argv = ["bench", "--cases", "strassen,conventional", "--sizes", "32", "--trials", "2", "--seed", "9", "--out", str(out)]
    assert main(argv) == 0
    first = out.read_text()
    assert first.startswith("scheme,plan,m,k,n,levels,dist,trial,err_max,rel_err,bound,ratio,seed")
    assert main(argv) == 0
    assert out.read_text() == first


def test_orbit(capsys):
    code, out, _ = run(capsys, "orbit", "--scheme", "strassen", "--restarts", "2", "--seed", "0", "--emit")
    assert code == 0 and "best_gamma2" in out and out.count("0 0 0") == 3


def test_catalog(capsys):
    code, out, _ = run(capsys, "catalog", "--format", "csv")
    assert code == 0 and "strassen,2x2x2,7,yes" in out
