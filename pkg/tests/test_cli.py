import json
import shutil
import subprocess
import sys

import numpy as np
import pytest

from wigmarg import io
from wigmarg.cli import main
from wigmarg.hilbert import purity


def _run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_gen_packet_is_pure(tmp_path, capsys):
    code, _, _ = _run(capsys, "gen", "packet", "--out", tmp_path / "p.wqs")
    assert code == 0
    rho = io.read_any(tmp_path / "p.wqs")
    assert abs(purity(rho) - 1) <= 1e-8


def test_gen_mixed_deterministic(tmp_path, capsys):
    for name in ("a.wqs", "b.wqs"):
        assert _run(capsys, "gen", "mixed", "--rank", 3, "--seed", 7, "--out", tmp_path / name)[0] == 0
    assert (tmp_path / "a.wqs").read_bytes() == (tmp_path / "b.wqs").read_bytes()
    _run(capsys, "gen", "mixed", "--rank", 3, "--seed", 8, "--out", tmp_path / "c.wqs")
    assert (tmp_path / "a.wqs").read_bytes() != (tmp_path / "c.wqs").read_bytes()


def test_gen_two_mode_squeezed(tmp_path, capsys):
    _run(capsys, "gen", "two-mode-squeezed", "--r", 0.5, "--out", tmp_path / "t.json")
    cov = io.read_covariance(tmp_path / "t.json")
    np.testing.assert_allclose(cov.block_aa, np.cosh(1.0) / 2 * np.eye(2), rtol=1e-15)


def test_gen_gaussian_and_schmidt(tmp_path, capsys):
    assert _run(capsys, "gen", "gaussian", "--seed", 3, "--out", tmp_path / "g.json")[0] == 0
    assert _run(capsys, "gen", "schmidt", "--rank", 2, "--out", tmp_path / "s.wqs")[0] == 0
    rho = io.read_any(tmp_path / "s.wqs")
    assert rho.partition is not None and rho.partition.n_b == 1


def test_gen_rejects_bad_grid(tmp_path, capsys):
    code, _, err = _run(capsys, "gen", "packet", "--N", 7, "--out", tmp_path / "p.wqs")
    assert code == 2 and "even" in err
    code, _, err = _run(capsys, "gen", "packet", "--xmin", -2, "--xmax", 2, "--out", tmp_path / "p.wqs")
    assert code == 2 and "leaks" in err


def test_reduce_product_state(tmp_path, capsys):
    from wigmarg.states import natural_grid, product_state

    g = natural_grid(1, 32)
    rho, _, _ = product_state(g, g, np.random.default_rng(0))
    io.write_density(tmp_path / "prod.wqs", rho)
    code, out, _ = _run(capsys, "reduce", "--in", tmp_path / "prod.wqs", "--out", tmp_path / "ra.wqs",
                        "--report", tmp_path / "r.json")
    assert code == 0
    rep = json.loads(out)
    assert rep["residual"] <= 1e-8
    assert json.loads((tmp_path / "r.json").read_text()) == rep
    assert isinstance(io.read_any(tmp_path / "ra.wig"), object)
    assert io.read_wigner(tmp_path / "ra.wig").grid.n == 1


def test_reduce_covariance(tmp_path, capsys):
    _run(capsys, "gen", "two-mode-squeezed", "--r", 0.5, "--out", tmp_path / "t.json")
    code, out, _ = _run(capsys, "reduce", "--in", tmp_path / "t.json", "--out", tmp_path / "a.json")
    assert code == 0
    sigma = np.array(json.loads(out)["sigma_aa"])
    np.testing.assert_allclose(sigma, np.cosh(1.0) / 2 * np.eye(2), rtol=1e-15)
    assert io.read_covariance(tmp_path / "a.json").partition.n_b == 0


def test_reduce_requires_partition(tmp_path, capsys):
    _run(capsys, "gen", "packet", "--out", tmp_path / "p.wqs")
    code, _, err = _run(capsys, "reduce", "--in", tmp_path / "p.wqs", "--out", tmp_path / "x.wqs")
    assert code == 2 and "partition" in err


def test_purity_thermal_two_paths(tmp_path, capsys):
    (tmp_path / "th.json").write_text(
        '{"version": 1, "hbar": 1.0, "n_a": 1, "n_b": 0, "sigma": [[1.0, 0.0], [0.0, 1.0]]}')
    code, out, _ = _run(capsys, "purity", "--in", tmp_path / "th.json")
    rep = json.loads(out)
    assert code == 0
    assert rep["formula"] == 0.5
    assert abs(rep["lattice"] - 0.5) <= 1e-4


def test_purity_of_state(tmp_path, capsys):
    # N = 64 resolves the random packets, so the phase-space path is exact
    _run(capsys, "gen", "mixed", "--rank", 2, "--N", 64, "--out", tmp_path / "m.wqs")
    rep = json.loads(_run(capsys, "purity", "--in", tmp_path / "m.wqs")[1])
    assert abs(rep["operator"] - rep["wigner"]) <= 1e-8


def test_wigner_export(tmp_path, capsys):
    _run(capsys, "gen", "packet", "--out", tmp_path / "p.wqs")
    code, _, _ = _run(capsys, "wigner", "--in", tmp_path / "p.wqs", "--out", tmp_path / "w.wig",
                      "--csv", tmp_path / "w.csv")
    assert code == 0
    W = io.read_wigner(tmp_path / "w.wig")
    assert abs(W.integral() - 1) <= 1e-6
    assert (tmp_path / "w.csv").read_text().startswith("# x,p,value\n")


def test_purify_command(tmp_path, capsys):
    _run(capsys, "gen", "mixed", "--rank", 3, "--seed", 2, "--out", tmp_path / "a.wqs")
    code, out, _ = _run(capsys, "purify", "--in", tmp_path / "a.wqs", "--nb", 1, "--N", 32,
                        "--out", tmp_path / "psi.wqs", "--report", tmp_path / "w.json")
    assert code == 0
    rep = json.loads((tmp_path / "w.json").read_text())
    assert rep["wigsum"]["passed"] and len(rep["schmidt_weights"]) == 3
    assert abs(sum(rep["schmidt_weights"]) - 1) <= 1e-8
    code, _, err = _run(capsys, "purify", "--in", tmp_path / "a.wqs", "--N", 64, "--out", tmp_path / "x.wqs")
    assert code == 2


def test_input_errors_exit_two(tmp_path, capsys):
    code, _, _ = _run(capsys, "wigner", "--in", tmp_path / "missing.wqs", "--out", tmp_path / "w.wig")
    assert code == 2
    (tmp_path / "junk.wqs").write_bytes(b'{"kind": "density", "version": 1}\n\x00')
    assert _run(capsys, "wigner", "--in", tmp_path / "junk.wqs", "--out", tmp_path / "w.wig")[0] == 2
    (tmp_path / "bad.json").write_text(
        '{"version": 1, "hbar": 1.0, "n_a": 1, "n_b": 0, "sigma": [[0.1, 0.0], [0.0, 0.1]]}')
    assert _run(capsys, "purity", "--in", tmp_path / "bad.json")[0] == 2


def test_check_passes_and_writes_report(tmp_path, capsys):
    code, out, _ = _run(capsys, "check", "--seed", 0, "--report", tmp_path / "c.json")
    assert code == 0
    rep = json.loads(out)
    assert rep["passed"] and all(c["passed"] for c in rep["checks"])
    assert (tmp_path / "c.json").read_text() == out
    assert {"name", "residual", "tolerance", "passed"} == set(rep["checks"][0])


def test_check_sabotage_fails(tmp_path, capsys):
    code, out, _ = _run(capsys, "check", "--sabotage", "--report", tmp_path / "c.json")
    assert code == 1
    assert not json.loads((tmp_path / "c.json").read_text())["passed"]


@pytest.mark.slow
def test_check_hbar_two(capsys):
    assert _run(capsys, "check", "--hbar", 2)[0] == 0


def test_console_script_installed(tmp_path):
    exe = shutil.which("wigmarg")
    cmd = [exe] if exe else [sys.executable, "-m", "wigmarg.cli"]
    res = subprocess.run(cmd + ["gen", "packet", "--out", str(tmp_path / "p.wqs")], capture_output=True)
    assert res.returncode == 0, res.stderr
    res = subprocess.run(cmd + ["bogus"], capture_output=True)
    assert res.returncode == 2
