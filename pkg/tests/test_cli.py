import subprocess
import sys

import pytest

from heckesum.analysis import read_series_csv
from heckesum.cli import main


@pytest.fixture
def out(tmp_path, monkeypatch):
    monkeypatch.setenv("HECKESUM_OUT_DIR", str(tmp_path))
    return tmp_path


def test_tau_writes_cache(out, capsys):
    assert main(["tau", "--n-max", "500", "--cache", "t.bin"]) == 0
    text = capsys.readouterr().out
    assert "2,-24" in text and "7,-16744" in text
    assert (out / "t.bin").read_bytes()[:4] == b"TAU1"


def test_tau_over_cap_needs_flag(out, capsys):
    assert main(["tau", "--n-max", str(10**6 + 1)]) == 2
    assert "error" in capsys.readouterr().err


def test_sum_fit_roundtrip(out, capsys):
    assert main(["sum", "--n-min", "100", "--n-max", "20000", "--out", "s.csv"]) == 0
    s = read_series_csv(out / "s.csv")
    assert s.grid[0] == 100 and s.grid[-1] == 20000
    assert (out / "s.svg").read_text().lstrip().startswith("<?xml")
    capsys.readouterr()
    assert main(["fit", "--in", "s.csv", "--mode", "point"]) == 0
    text = capsys.readouterr().out
    assert "exponent=" in text and "Z_hat=" in text and "mode=pointwise" in text


def test_vaughan_and_diag(out, capsys):
    assert main(["vaughan", "--block-n", "100", "--out", "v.csv"]) == 0
    text = capsys.readouterr().out
    assert text.count("\n100,") == 5 and (out / "v.svg").exists()
    assert main(["diag", "--n", "2"]) == 0
    assert "mean_square=0.640625" in capsys.readouterr().out


def test_verify_small_and_tiny(out, capsys):
    assert main(["verify", "--n-max", "3000"]) == 0
    report = (out / "verify_report.txt").read_text()
    assert "FAIL" not in report and "PASS" in report
    assert main(["verify", "--n-max", "10"]) == 0
    text = capsys.readouterr().out
    assert "exponent fit, insufficient data" in text and "FAIL" not in text


def test_verify_corrupt_cache(out, capsys):
    assert main(["tau", "--n-max", "300", "--cache", "c.bin"]) == 0
    raw = bytearray((out / "c.bin").read_bytes())
    raw[16 + 8 * 3] ^= 0xFF
    (out / "c.bin").write_bytes(bytes(raw))
    capsys.readouterr()
    assert main(["verify", "--n-max", "300", "--cache", "c.bin"]) == 1
    assert "TAU1 validation failed" in capsys.readouterr().out


def test_bad_input_exit_code(out, capsys):
    assert main(["fit", "--in", "missing.csv"]) == 2
    assert "missing.csv" in capsys.readouterr().err
    assert main(["verify", "--ratio", "3"]) == 2


def test_console_script_entry():
    r = subprocess.run([sys.executable, "-m", "heckesum.cli", "--help"], capture_output=True, text=True)
    assert r.returncode == 0 and "verify" in r.stdout
