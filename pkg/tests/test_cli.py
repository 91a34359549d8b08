import json

import numpy as np
import pytest

from competing_chain.cli import main


def run(args):
    return main(args)


def test_verify_passes(tmp_path):
    out = tmp_path / "verify.json"
    code = run(["verify", "--two-n", "4", "--a-bar", "0.6", "--p", "1.0",
                "--q", "0.5", "--xi", "1.2", "--out", str(out)])
    assert code == 0
    doc = json.loads(out.read_text())
    assert doc["all_pass"] is True
    names = {c["name"] for c in doc["checks"]}
    assert {"yang_baxter", "reflection", "dual_reflection",
            "hamiltonian_equivalence", "transfer_crossing"} <= names
    for c in doc["checks"]:
        assert c["residual"] <= c["threshold"]


def test_verify_broken_c2_fails(tmp_path):
    out = tmp_path / "verify.json"
    code = run(["verify", "--two-n", "4", "--a-bar", "0.6", "--p", "1.0",
                "--q", "0.5", "--xi", "1.2", "--break-c2-sign", "--out", str(out)])
    assert code == 1
    doc = json.loads(out.read_text())
    failing = {c["name"] for c in doc["checks"] if not c["pass"]}
    assert failing == {"hamiltonian_equivalence"}


def test_usage_error_exit_code(capsys):
    with pytest.raises(SystemExit) as exc:
        run(["scan", "--quantity", "nonsense", "--var", "p", "--grid", "0:1:3"])
    assert exc.value.code == 2


def test_parameter_error_exit_code(tmp_path):
    # two_n above the ed cap surfaces as a parameter error, exit 2
    code = run(["ed", "--two-n", "14", "--out", str(tmp_path / "x")])
    assert code == 2


def test_ed_outputs(tmp_path):
    base = tmp_path / "run"
    code = run(["ed", "--two-n", "4", "--a-bar", "0.6", "--p", "1.0",
                "--q", "0.5", "--xi", "1.2",
                "--theta=0.1,-0.1,0.2,-0.2", "--out", str(base)])
    assert code == 0
    spectrum = (tmp_path / "run_spectrum.csv").read_text().strip().splitlines()
    assert spectrum[0] == "index,energy"
    assert len(spectrum) == 17
    hom = json.loads((tmp_path / "run_roots_hom.json").read_text())
    assert hom["two_n"] == 4 and len(hom["roots"]) == 5
    inh = json.loads((tmp_path / "run_roots_inh.json").read_text())
    assert inh["params"]["theta_bar"] == [0.1, -0.1, 0.2, -0.2]


def test_ed_empty_theta_defaults_to_zero(tmp_path):
    base = tmp_path / "run"
    code = run(["ed", "--two-n", "4", "--a-bar", "0.6", "--p", "1.0",
                "--q", "0.5", "--xi", "1.2", "--out", str(base)])
    assert code == 0
    assert not (tmp_path / "run_roots_inh.json").exists()


def test_bae_and_classify(tmp_path):
    roots = tmp_path / "roots.json"
    code = run(["bae", "--two-n", "8", "--a-bar", "0.66", "--p", "1.2",
                "--q", "1.0934349546269315", "--xi", "1.2", "--out", str(roots)])
    assert code == 0
    doc = json.loads(roots.read_text())
    assert doc["regime"] == "V"
    assert doc["residual"] <= 1e-10
    cls = tmp_path / "cls.json"
    assert run(["classify", "--roots", str(roots), "--out", str(cls)]) == 0
    cdoc = json.loads(cls.read_text())
    assert cdoc["regime"] == "V"
    assert len(cdoc["pairs_n2"]) == 8


def test_thermo_json(tmp_path):
    out = tmp_path / "thermo.json"
    code = run(["thermo", "--two-n", "8", "--a-bar", "0.6", "--p", "1.0",
                "--q", "1.2496799588882023", "--xi", "1.2", "--out", str(out)])
    assert code == 0
    doc = json.loads(out.read_text())
    assert set(doc["components"]) == {"e_b_p", "e_b_q", "e_b0"}
    assert doc["est_error"] <= doc["quadrature"]["abs_tol"]


def test_scan_rectangular_with_divergence_marker(tmp_path):
    out = tmp_path / "scan.csv"
    code = run(["scan", "--quantity", "surface", "--var", "p",
                "--grid=-1:1:5", "--two-n", "8", "--a-bar", "0.6",
                "--q", "1.0", "--xi", "1.2", "--out", str(out)])
    assert code == 0
    lines = out.read_text().strip().splitlines()
    assert lines[0] == "p,E_b,e_b_p,e_b_q,e_b0,est_error,status"
    assert len(lines) == 6
    rows = [l.split(",") for l in lines[1:]]
    markers = [r[-1] for r in rows]
    assert markers == ["ok", "ok", "divergent", "ok", "ok"]  # p = 0 row flagged
    assert all(len(r) == 7 for r in rows)


def test_config_file_and_flag_override(tmp_path):
    cfg = tmp_path / "chain.cfg"
    cfg.write_text("two_n = 4\na_bar = 0.6\np = 1.0\nq = 0.5\nxi = 1.2\n"
                   "theta_bar = 0.0,0.0,0.0,0.0\n")
    out1 = tmp_path / "a.json"
    out2 = tmp_path / "b.json"
    assert run(["thermo", "--config", str(cfg), "--out", str(out1)]) == 0
    assert run(["thermo", "--config", str(cfg), "--p", "2.0", "--out", str(out2)]) == 0
    d1, d2 = json.loads(out1.read_text()), json.loads(out2.read_text())
    assert d1["params"]["p"] == 1.0
    assert d2["params"]["p"] == 2.0
    assert d1["value"] != d2["value"]


@pytest.mark.parametrize("args", [
    ["verify", "--two-n", "4", "--a-bar", "0.6", "--p", "1.0", "--q", "0.5",
     "--xi", "1.2"],
    ["thermo", "--two-n", "8", "--a-bar", "0.6", "--p", "1.0", "--q", "1.1",
     "--xi", "1.2"],
    ["scan", "--quantity", "eb0", "--var", "a_bar", "--grid", "0:0.8:4",
     "--two-n", "8"],
    ["bae", "--two-n", "8", "--a-bar", "0.66", "--p", "1.2",
     "--q", "1.0934349546269315", "--xi", "1.2"],
])
def test_reproducibility_byte_identical(tmp_path, args):
    out1 = tmp_path / "one.out"
    out2 = tmp_path / "two.out"
    assert run(args + ["--out", str(out1)]) == 0
    assert run(args + ["--out", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()
