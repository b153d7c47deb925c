import subprocess
import sys

from vmimo_game.cli import main


def test_list(capsys):
    assert main(["list"]) == 0
    assert "fig2_ber" in capsys.readouterr().out


def test_validate_ok(capsys):
    assert main(["validate", "fig7_net_utility_uniform"]) == 0
    assert "ok" in capsys.readouterr().out


def test_run_writes_files(tmp_path):
    assert main(["run", "fig2_ber", "--out", str(tmp_path), "--seed", "7"]) == 0
    text = (tmp_path / "fig2_ber.csv").read_text()
    assert "# seed: 7" in text
    assert (tmp_path / "fig2_ber.json").exists()


def test_set_override(tmp_path):
    assert main(["run", "fig2_ber", "--out", str(tmp_path), "--set", "sweep.points=3",
                 "--no-timestamp"]) == 0
    lines = [l for l in (tmp_path / "fig2_ber.csv").read_text().splitlines()
             if not l.startswith("#")]
    assert len(lines) == 4


def test_config_error_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.yaml"
    bad.write_text("name: bad\nkind: ber_sweep\nsweep: {start: 5, stop: 1, points: 3}\n")
    assert main(["validate", str(bad)]) == 1
    assert "sweep.stop" in capsys.readouterr().err


def test_missing_spec_is_config_error():
    assert main(["run", "no_such_spec"]) == 1


def test_bad_value_via_set_is_config_error(tmp_path, capsys):
    assert main(["run", "fig7_net_utility_uniform", "--out", str(tmp_path),
                 "--set", "channel.gain=-1"]) == 1
    assert "channel.gain" in capsys.readouterr().err


def test_domain_error_exit_code(tmp_path, monkeypatch):
    from vmimo_game import cli
    from vmimo_game.errors import DomainError

    def boom(spec, jobs=1):
        raise DomainError("transmit power must be > 0")

    monkeypatch.setattr(cli, "run_experiment", boom)
    assert main(["run", "fig2_ber", "--out", str(tmp_path)]) == 2


def test_oracle_command(capsys):
    assert main(["oracle", "fig7_net_utility_uniform"]) == 0
    out = capsys.readouterr().out
    assert "PASS" in out and "FAIL" not in out


def test_montecarlo_command(capsys):
    assert main(["montecarlo", "--pairs", "3", "--frames", "20000", "--seed", "1"]) == 0
    assert capsys.readouterr().out.count("PASS") == 3


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "vmimo_game", "list"],
                         capture_output=True, text=True, check=True)
    assert "equilibrium" in out.stdout
