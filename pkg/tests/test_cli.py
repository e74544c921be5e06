import numpy as np

from crossdiff.cli import main


def test_convergence_subcommand(tmp_path, capsys):
    cfg = tmp_path / "study.cfg"
    cfg.write_text(
        "scenario=example1_dirichlet\n"
        "interior_count=11\n"
        "final_time=2e-3\n"
        "tau_init=2e-4\n"
    )
    code = main(["convergence", "--config", str(cfg), "--output-dir", str(tmp_path / "out")])
    assert code == 0
    out = capsys.readouterr().out
    assert "estimated order" in out
    assert (tmp_path / "out" / "errors.csv").exists()
    assert (tmp_path / "out" / "order.csv").exists()


def test_override_flags(tmp_path, capsys):
    code = main([
        "run", "--output-dir", str(tmp_path),
        "--scenario=custom", "--interior_count=9", "--final_time=5e-5",
        "--tau_init=1e-5", "--ic_u0=0.5", "--ic_v0=0.5",
    ])
    assert code == 0
    assert (tmp_path / "snapshot_final.csv").exists()


def test_bad_config_exits_2(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("scenario=example2\nd1=-3\n")
    assert main(["run", "--config", str(cfg)]) == 2
    assert "config error" in capsys.readouterr().err


def test_unknown_override_exits_2(capsys):
    assert main(["run", "--scenario=custom", "--bogus=1"]) == 2


def test_wrong_scenario_for_blowup(capsys):
    assert main(["blowup", "--scenario=example2"]) == 2


def test_timing_subcommand(tmp_path, capsys):
    code = main(["timing", "--output-dir", str(tmp_path),
                 "--timing_n_list=12,16", "--timing_steps=3"])
    assert code == 0
    out = capsys.readouterr().out
    assert "slope" in out
    body = (tmp_path / "timing.csv").read_text().strip().splitlines()
    assert len(body) == 3
    for line in body[1:]:
        assert float(line.split(",")[1]) > 0


def test_blowup_subcommand_miniature(tmp_path, capsys):
    code = main([
        "blowup", "--output-dir", str(tmp_path),
        "--interior_count=15", "--snapshot_every=50",
    ])
    assert code == 0
    out = capsys.readouterr().out
    assert "blowup_detected" in out
    assert (tmp_path / "blowup.csv").exists()
    snap = tmp_path / "snapshot_final.csv"
    assert snap.exists()
    # final snapshot peak agrees with the last recorded max
    last = (tmp_path / "blowup.csv").read_text().strip().splitlines()[-1]
    max_u_logged = float(last.split(",")[2])
    data = np.loadtxt(snap, delimiter=",", skiprows=1)
    assert np.isclose(data[:, 2].max(), max_u_logged, rtol=0, atol=0)
