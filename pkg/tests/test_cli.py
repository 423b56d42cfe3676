import subprocess
import sys

from covarray import read_ca
from covarray.cli import main
from conftest import FIGURE_POLY


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_construct_ca4_half_q5(tmp_path, capsys):
    out = tmp_path / "half5.txt"
    code, stdout, _ = run(capsys, "construct", "--variant", "ca4-half",
                          "-q", "5", "-o", str(out))
    assert code == 0
    assert "CA(1873; 4, 13, 5)" in stdout
    assert out.read_text().splitlines()[0] == "CA 1873 4 13 5"


def test_construct_ca3_q3(tmp_path, capsys):
    out = tmp_path / "ca3.txt"
    code, stdout, _ = run(capsys, "construct", "--variant", "ca3",
                          "-q", "3", "-o", str(out))
    assert code == 0 and "CA(53; 3, 13, 3)" in stdout
    assert out.read_text().splitlines()[0] == "CA 53 3 13 3"


def test_construct_ca4_full_with_ingredient(tmp_path, capsys, ingredient51_file):
    out = tmp_path / "full3.txt"
    code, stdout, _ = run(capsys, "construct", "--variant", "ca4-full",
                          "-q", "3", "--ingredient", str(ingredient51_file),
                          "-o", str(out))
    assert code == 0 and "CA(294; 4, 10, 3)" in stdout
    ca = read_ca(out)
    assert (ca.N, ca.k) == (294, 10)
    assert ca.provenance.ingredient.endswith("ca_51_3_5_3.txt")


def test_construct_rejects_bad_q(tmp_path, capsys):
    for q, msg in ((6, "prime power"), (15, "prime power"),
                   (4, "odd"), (17, "--force")):
        code, _, err = run(capsys, "construct", "--variant", "ca4-half",
                           "-q", str(q), "-o", str(tmp_path / "x.txt"))
        assert code == 2, q
        assert msg in err


def test_construct_poly_override(tmp_path, capsys):
    out = tmp_path / "fig.txt"
    code, _, _ = run(capsys, "construct", "--variant", "ca4-half", "-q", "7",
                     "--poly", ",".join(map(str, FIGURE_POLY)), "-o", str(out))
    assert code == 0
    assert read_ca(out).provenance.poly == "3,4,5,0,1"
    code, _, err = run(capsys, "construct", "--variant", "ca4-half", "-q", "7",
                       "--poly", "1,0,0,0,1", "-o", str(out))
    assert code == 2 and "not primitive" in err


def test_verify_roundtrip_and_exit_codes(tmp_path, capsys):
    out = tmp_path / "half3.txt"
    assert run(capsys, "construct", "--variant", "ca4-half", "-q", "3",
               "-o", str(out))[0] == 0
    code, stdout, _ = run(capsys, "verify", str(out), "-t", "4")
    assert code == 0
    assert "VERDICT pass t=4" in stdout
    # k = 5 columns cannot be strength 5 at 241 rows
    code, stdout, _ = run(capsys, "verify", str(out), "-t", "5")
    assert code == 1
    assert "VERDICT fail t=5" in stdout and "missing:" in stdout


def test_verify_malformed_file(tmp_path, capsys):
    out = tmp_path / "half3.txt"
    run(capsys, "construct", "--variant", "ca4-half", "-q", "3", "-o", str(out))
    lines = out.read_text().splitlines()
    trunc = tmp_path / "trunc.txt"
    trunc.write_text("\n".join(lines[2:]) + "\n")  # headerless
    code, _, err = run(capsys, "verify", str(trunc), "-t", "4")
    assert code == 2 and "error" in err
    code, _, _ = run(capsys, "verify", str(trunc), "-t", "4",
                     "--rows-only", "--symbols", "3")
    assert code == 0
    code, _, err = run(capsys, "verify", str(trunc), "-t", "4", "--rows-only")
    assert code == 2 and "--symbols" in err


def test_verify_rank_engine_explicit(tmp_path, capsys):
    out = tmp_path / "half5.txt"
    run(capsys, "construct", "--variant", "ca4-half", "-q", "5", "-o", str(out))
    code, stdout, _ = run(capsys, "verify", str(out), "-t", "4",
                          "--engine", "rank")
    assert code == 0 and "VERDICT pass" in stdout


def test_verify_structure_engine_with_ingredient(tmp_path, capsys,
                                                 ingredient51_file):
    out = tmp_path / "full294.txt"
    run(capsys, "construct", "--variant", "ca4-full", "-q", "3",
        "--ingredient", str(ingredient51_file), "-o", str(out))
    code, stdout, _ = run(capsys, "verify", str(out), "-t", "4",
                          "--engine", "rank",
                          "--ingredient", str(ingredient51_file))
    assert code == 0
    assert "engine=structure" in stdout and "VERDICT pass" in stdout
    # without the ingredient the construction cannot be re-certified
    code, _, err = run(capsys, "verify", str(out), "-t", "4", "--engine", "rank")
    assert code == 2 and "ingredient" in err


def test_geometry_q3(capsys, tmp_path):
    code, stdout, _ = run(capsys, "geometry", "-q", "3",
                          "--dump", str(tmp_path / "planes"))
    assert code == 0
    assert stdout.count("PASS") == 7  # six lemmas + anti-cocircularity
    assert "FAIL" not in stdout
    for variant in ("full", "M1", "M2", "Mhalf"):
        dump = (tmp_path / "planes" / f"{variant}.mobius").read_text()
        assert dump.startswith(f"MOBIUS q=3 variant={variant} poly=")


def test_geometry_rejections(capsys):
    code, _, err = run(capsys, "geometry", "-q", "4")
    assert code == 2 and "odd prime power" in err
    code, _, err = run(capsys, "geometry", "-q", "17")
    assert code == 2 and "--force" in err


def test_tables(capsys):
    code, stdout, _ = run(capsys, "tables")
    assert code == 0
    lines = stdout.splitlines()
    row13 = next(ln for ln in lines if ln.strip().startswith("13 "))
    assert "85681" in row13 and "109837" in row13 and "full-verify" in row13
    row25 = next(ln for ln in lines if ln.strip().startswith("25 "))
    assert "1171873" in row25 and "1890050" in row25
    assert "1562497" in row25 and "1951825" in row25
    assert "construct+rank" in row25
    row3 = next(ln for ln in lines if ln.strip().startswith("3 "))
    assert "241" in row3 and "294" in row3 and "81" in row3 and "159" in row3


def test_field_info(capsys):
    code, stdout, _ = run(capsys, "field-info", "-q", "9")
    assert code == 0
    toks = stdout.splitlines()[0].split()
    assert len(toks) == 3 + 3 + 5 and toks[:3] == ["3", "2", "4"]
    code, stdout, _ = run(capsys, "field-info", "-q", "7", "--poly", "3,4,5,0,1")
    assert code == 0 and stdout.splitlines()[0] == "7 1 4 4 1 3 4 5 0 1"
    assert run(capsys, "field-info", "-q", "12")[0] == 2


def test_cli_determinism(tmp_path, capsys):
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    run(capsys, "construct", "--variant", "ca4-full", "-q", "3", "-o", str(a))
    run(capsys, "construct", "--variant", "ca4-full", "-q", "3", "-o", str(b))
    assert a.read_bytes() == b.read_bytes()


def test_threads_env(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("COVARRAY_THREADS", "1")
    out = tmp_path / "x.txt"
    code, _, _ = run(capsys, "construct", "--variant", "ca4-half", "-q", "3",
                     "-o", str(out), "--threads", "2")
    assert code == 0


def test_entry_point_subprocess(tmp_path):
    res = subprocess.run([sys.executable, "-m", "covarray.cli", "tables"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and "85681" in res.stdout
    assert "NumbaWarning" not in res.stderr
