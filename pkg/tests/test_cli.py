import json
import subprocess
import sys

import numpy as np
import pytest

from maxsym import problems, verify
from maxsym.cli import main
from maxsym.errors import InvalidMetricError
from maxsym.symbol_calculus import jordan_data


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr().out
    return code, out


@pytest.fixture
def generic_file(tmp_path):
    path = tmp_path / "generic.json"
    assert main(["gen", "--kind", "generic", "--seed", "7", "--out", str(path)]) == 0
    return path


def test_gen_is_deterministic(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    main(["gen", "--seed", "3", "--out", str(a)])
    main(["gen", "--seed", "3", "--out", str(b)])
    assert a.read_bytes() == b.read_bytes()


def test_gen_isotropic(capsys):
    code, out = run(["gen", "--kind", "isotropic", "--seed", "1"], capsys)
    assert code == 0
    inst = problems.instance_from_dict(json.loads(out))
    np.testing.assert_array_equal(inst.pair.eps_hat, np.eye(3))
    np.testing.assert_array_equal(inst.pair.mu_hat, np.eye(3))


def test_seed_from_environment(monkeypatch, capsys):
    monkeypatch.setenv(problems.SEED_ENV, "42")
    _, out = run(["gen"], capsys)
    assert json.loads(out)["seed"] == 42
    assert json.loads(out) == problems.instance_to_dict(problems.generate("generic", 42))


def test_instance_round_trip_and_validation():
    inst = problems.generate("multiples", 5)
    back = problems.instance_from_dict(json.loads(problems.dump_json(problems.instance_to_dict(inst))))
    np.testing.assert_allclose(back.pair.mu_hat, inst.pair.mu_hat, rtol=1e-15)
    data = problems.instance_to_dict(inst)
    data["eps_hat"] = [1.0, 0.0, 0.0, -1.0, 0.0, 1.0]
    with pytest.raises(InvalidMetricError):
        problems.instance_from_dict(data)


def test_complex_encoding():
    encoded = problems.encode(np.array([1.0 + 2.0j, -3.0j]))
    assert encoded == [[1.0, 2.0], [0.0, -3.0]]
    np.testing.assert_array_equal(problems.decode_complex_array(encoded), [1.0 + 2.0j, -3.0j])


def test_symbols_generic(generic_file, capsys):
    code, out = run(["symbols", "--in", str(generic_file)], capsys)
    data = json.loads(out)
    assert code == 0
    assert data["pass"]
    assert data["residuals"]["route_gap_B"] <= 1e-8
    assert set(data["H"]) >= {"T", "A", "Q", "G", "F", "R", "B", "routing"}
    assert len(data["boundary"]["impedance"]) == 8


def test_symbols_isotropic_uses_contour(tmp_path, capsys):
    path = tmp_path / "iso.json"
    main(["gen", "--kind", "isotropic", "--seed", "1", "--out", str(path)])
    code, out = run(["symbols", "--in", str(path)], capsys)
    data = json.loads(out)
    assert code == 0
    assert data["H"]["routing"]["route"] == "contour"
    assert data["H"]["routing"]["jordan"].startswith("degenerate")


def test_malformed_input_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["symbols", "--in", str(bad)]) == 2
    assert main(["symbols", "--in", str(tmp_path / "missing.json")]) == 2
    assert "error" in capsys.readouterr().err


def test_boundary_symbol(generic_file, capsys):
    code, out = run(["boundary-symbol", "--in", str(generic_file), "--data", "0.5", "1.0", "--xi", "1", "0"], capsys)
    data = json.loads(out)
    assert code == 0
    z = problems.decode_complex_array(data["symbol"])
    assert abs(z[1]) <= 1e-14
    code, _ = run(["boundary-symbol", "--in", str(generic_file), "--data", "1", "0", "--xi", "0", "0"], capsys)
    assert code == 2


def test_recover_modes(generic_file, capsys):
    code, out = run(["recover", "--in", str(generic_file)], capsys)
    assert code == 0
    assert json.loads(out)["relative_error"] <= 1e-10
    code, out = run(["recover", "--in", str(generic_file), "--mode", "jets", "--kappa", "2"], capsys)
    assert code == 0
    assert json.loads(out)["kernel_dimension"] == {"H": 0, "E": 0}
    code, out = run(["recover", "--in", str(generic_file), "--mode", "normal"], capsys)
    assert json.loads(out)["normal_verdict"]["kind"] == "equal"
    inst = problems.load_instance(generic_file)
    prime = [str(v) for v in 1.1 * inst.pair.mu_hat[2]]
    code, out = run(["recover", "--in", str(generic_file), "--mode", "normal", "--normal-prime", *prime], capsys)
    assert code == 1
    assert json.loads(out)["normal_verdict"]["kind"] == "inconsistent"


def test_recover_identity(tmp_path, capsys):
    path = tmp_path / "iso.json"
    main(["gen", "--kind", "isotropic", "--out", str(path)])
    code, out = run(["recover", "--in", str(path)], capsys)
    assert code == 0
    np.testing.assert_allclose(json.loads(out)["eps_tangential"], np.eye(2), atol=1e-14)


def test_gauge_demo(capsys):
    code, out = run(["gauge-demo", "--kind", "constant", "--seed", "0"], capsys)
    rows = json.loads(out)["rows"]
    assert code == 0
    for key in ("boundary_moved", "det_minus_h", "symbol_gap", "volume_ratio_vs_jacobian", "deviation_vs_amplitude"):
        assert rows[key]["value"] == pytest.approx(0.0, abs=1e-15)
    code, out = run(["gauge-demo", "--amplitude", "0.5", "--seed", "0"], capsys)
    data = json.loads(out)
    assert code == 0 and data["pass"]
    _, again = run(["gauge-demo", "--amplitude", "0.5", "--seed", "0"], capsys)
    assert again == out


def test_verify_small_suite(capsys, tmp_path):
    report = tmp_path / "report.json"
    code, out = run(["verify", "--suite", "core", "--samples", "3", "--seed", "0", "--json", str(report)], capsys)
    assert code == 0
    assert out.strip().endswith("PASS")
    data = json.loads(report.read_text())
    assert data["pass"] and all("threshold" in row for row in data["rows"])


def test_verify_is_independent_of_jobs():
    one = verify.run_check(verify.CHECKS["spectrum"], samples=4, seed=9, jobs=1)
    two = verify.run_check(verify.CHECKS["spectrum"], samples=4, seed=9, jobs=2)
    assert [(r.metric, r.value, r.worst_seed) for r in one] == [(r.metric, r.value, r.worst_seed) for r in two]


def test_injected_sign_flip_fails_quadratic_check(monkeypatch, capsys):
    def flipped(eps, mu, xi_t, route="auto"):
        data = jordan_data(eps, mu, xi_t)
        J = data.J.copy()
        J[1, 2] = -J[1, 2]
        return data.X @ J @ np.linalg.inv(data.X)

    monkeypatch.setattr(verify, "principal_B", flipped)
    rows = verify.run_check(verify.CHECKS["quadratic"], samples=2, seed=0)
    failing = [r for r in rows if not r.passed]
    assert failing and failing[0].metric == "quadratic_B"
    assert "(seed " in verify.format_row(failing[0])


def test_console_entry_point(tmp_path):
    out = subprocess.run(
        [sys.executable, "-m", "maxsym.cli", "gen", "--seed", "2"], capture_output=True, text=True, check=True
    )
    assert json.loads(out.stdout)["seed"] == 2
