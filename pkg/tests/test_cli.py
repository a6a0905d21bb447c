import csv
import io
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from dqw import cli, oracle, params
from dqw.params import GAAS

ROOT = Path(__file__).resolve().parents[1]
GAAS_CONF = str(ROOT / "configs" / "gaas_algaas.conf")
EQUAL_CONF = str(ROOT / "configs" / "equal_mass.conf")


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_levels(capsys):
    code, out, _ = run(capsys, "levels", "--config", GAAS_CONF)
    assert code == 0
    table = rows(out)
    assert list(table[0]) == ["n", "parity", "E_eV", "k_per_nm"]
    assert len(table) == len(oracle.fd_energies(GAAS))
    assert [r["parity"] for r in table] == ["s", "a", "s"]


def test_full_precision_output(capsys):
    from dqw.spectrum import find_levels
    _, out, _ = run(capsys, "levels", "--config", GAAS_CONF)
    for r, lv in zip(rows(out), find_levels(GAAS)):
        assert float(r["E_eV"]) == lv.E
        assert float(r["k_per_nm"]) == lv.k


def test_override_beats_config(capsys):
    _, out, _ = run(capsys, "levels", "--config", GAAS_CONF, "--b-nm", "15")
    _, ref, _ = run(capsys, "levels", "--config", GAAS_CONF)
    assert float(rows(out)[1]["E_eV"]) - float(rows(out)[0]["E_eV"]) < 1e-4
    assert out != ref


def test_flags_without_config(capsys):
    flags = []
    for key, value in GAAS.as_config().items():
        flags += ["--" + key.replace("_", "-"), repr(value)]
    _, out, _ = run(capsys, "levels", *flags)
    _, ref, _ = run(capsys, "levels", "--config", GAAS_CONF)
    assert out == ref


def test_empty_config_names_missing_keys(tmp_path, capsys):
    empty = tmp_path / "empty.conf"
    empty.write_text("# nothing here\n")
    with pytest.raises(SystemExit) as exc:
        cli.main(["levels", "--config", str(empty)])
    assert exc.value.code == 2
    err = capsys.readouterr().err
    for key in params.CONFIG_KEYS:
        assert key in err


def test_config_error_has_line_number(tmp_path, capsys):
    bad = tmp_path / "bad.conf"
    bad.write_text("a_nm = 6\nb_nm = five\n")
    with pytest.raises(SystemExit):
        cli.main(["levels", "--config", str(bad)])
    assert "bad.conf:2" in capsys.readouterr().err


def test_invalid_parameters_rejected(capsys):
    with pytest.raises(SystemExit):
        cli.main(["levels", "--config", GAAS_CONF, "--vb-ev", "0.3"])
    assert "vb" in capsys.readouterr().err


def test_sweep_splitting_decreases(capsys):
    _, out, _ = run(capsys, "sweep", "--config", GAAS_CONF, "--param", "b",
                    "--from", "1", "--to", "15", "--steps", "141", "--jobs", "2")
    table = rows(out)
    assert len(table) == 141
    gap = np.array([float(r["E_2a"]) - float(r["E_1s"]) for r in table])
    assert np.all(np.diff(gap) < 0)


def test_sweep_two_steps(capsys):
    _, out, _ = run(capsys, "sweep", "--config", GAAS_CONF, "--from", "1", "--to", "2",
                    "--steps", "2", "--jobs", "1")
    assert len(rows(out)) == 2


def test_sweep_spec_validation(capsys):
    for bad in (["--from", "2", "--to", "1", "--steps", "3"],
                ["--from", "1", "--to", "2", "--steps", "1"]):
        code, _, err = run(capsys, "sweep", "--config", GAAS_CONF, *bad)
        assert code == 1 and "error" in err


def test_sweep_dipole_columns(capsys):
    _, out, _ = run(capsys, "sweep", "--config", EQUAL_CONF, "--from", "1", "--to", "15",
                    "--steps", "3", "--levels", "3", "--transition", "1s2a",
                    "--transition", "2,3", "--jobs", "1")
    table = rows(out)
    for r in table:
        for t in ("1s2a", "2a3s"):
            d = [float(r[f"{c}_{t}"]) for c in ("d1", "d2", "d3")]
            assert float(r[f"total_{t}"]) == pytest.approx(2 * d[0] + 2 * d[1] + d[2], rel=1e-14)
        assert float(r["approx_1s2a"]) == pytest.approx(0.5 * (6 + float(r["b_nm"])))


def test_sweep_unbound_level_warns_once(capsys):
    code, out, err = run(capsys, "sweep", "--config", GAAS_CONF, "--param", "a",
                         "--from", "2", "--to", "6", "--steps", "3", "--levels", "3",
                         "--transition", "2a3s", "--jobs", "1")
    assert code == 0
    table = rows(out)
    assert table[0]["E_3s"] == "" and table[0]["total_2a3s"] == ""
    assert table[-1]["E_3s"] != ""
    assert err.count("warning") == 1


def test_sweep_parallel_is_deterministic(capsys):
    args = ["sweep", "--config", GAAS_CONF, "--from", "1", "--to", "9", "--steps", "9",
            "--transition", "1s2a"]
    _, serial, _ = run(capsys, *args, "--jobs", "1")
    _, parallel, _ = run(capsys, *args, "--jobs", "3")
    _, again, _ = run(capsys, *args, "--jobs", "3")
    assert serial == parallel == again


def test_transition_parsing():
    assert cli.parse_transition("1s2a") == (1, 2)
    assert cli.parse_transition("2a3s") == (2, 3)
    assert cli.parse_transition("2, 5") == (2, 5)
    with pytest.raises(Exception):
        cli.parse_transition("1a2s")


def test_wavefunction_parity(capsys):
    _, out, _ = run(capsys, "wavefunction", "--config", GAAS_CONF, "--level", "2a",
                    "--samples", "1001")
    psi = np.array([float(r["psi"]) for r in rows(out)])
    assert abs(psi[500]) < 1e-10
    _, out, _ = run(capsys, "wavefunction", "--config", GAAS_CONF, "--level", "1")
    psi = np.array([float(r["psi"]) for r in rows(out)])
    assert np.allclose(psi, psi[::-1], atol=1e-12, rtol=0)


def test_wavefunction_matches_oracle(capsys):
    _, out, _ = run(capsys, "wavefunction", "--config", GAAS_CONF, "--level", "1s",
                    "--samples", "2001", "--pad-nm", "5")
    table = rows(out)
    x = np.array([float(r["x_nm"]) for r in table])
    psi = np.array([float(r["psi"]) for r in table])
    assert x[0] == -5.0 and x[-1] == GAAS.width + 5.0
    fd, _ = oracle.fd_spectrum(GAAS, count=1)
    _, fx, fpsi = fd[0]
    ref = oracle.fd_state_on(x, fx, fpsi)
    ref *= np.sign(ref[np.argmax(np.abs(ref))]) * np.sign(psi[np.argmax(np.abs(psi))])
    assert np.max(np.abs(psi - ref)) < 1e-4


def test_wavefunction_missing_level(capsys):
    code, _, err = run(capsys, "wavefunction", "--config", GAAS_CONF, "--level", "7")
    assert code == 1 and "not bound" in err


def test_dipole_command(capsys):
    _, out, _ = run(capsys, "dipole", "--config", GAAS_CONF)
    (r,) = rows(out)
    assert list(r) == ["b_nm", "d1", "d2", "d3", "total", "approx"]
    assert float(r["total"]) == pytest.approx(-5.508835457172837, abs=1e-9)
    _, out, _ = run(capsys, "dipole", "--config", EQUAL_CONF, "--transition", "2a3s",
                    "--from", "1", "--to", "15", "--steps", "15")
    assert len(rows(out)) == 15


def test_validate_passes(capsys):
    code, out, _ = run(capsys, "validate", "--config", GAAS_CONF)
    assert code == 0 and out.strip().endswith("ALL PASS")
    assert "closed-form dipole" not in out


def test_validate_equal_mass_runs_dipole_check(capsys):
    code, out, _ = run(capsys, "validate", "--config", EQUAL_CONF)
    assert code == 0
    assert any(line.startswith("PASS  closed-form dipole") for line in out.splitlines())


def test_validate_detects_corrupted_constant(capsys, monkeypatch):
    monkeypatch.setattr(params, "HBAR2_2ME", params.HBAR2_2ME * 1.001)
    code, out, _ = run(capsys, "validate", "--config", GAAS_CONF)
    assert code == 1
    assert any(line.startswith("FAIL  spectrum") for line in out.splitlines())


def test_out_file(tmp_path, capsys):
    target = tmp_path / "levels.csv"
    code, out, _ = run(capsys, "levels", "--config", GAAS_CONF, "--out", str(target))
    assert code == 0 and out == ""
    assert target.read_text().startswith("n,parity,E_eV,k_per_nm\n")


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "dqw", "levels", "--config", GAAS_CONF,
                          "--levels", "1"], capture_output=True, text=True, check=True)
    assert res.stdout.splitlines()[1].startswith("1,s,0.0507457852")
