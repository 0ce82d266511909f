import hashlib
import math
import subprocess
import sys
from pathlib import Path

import pytest

from chiralqubit.cli import main

SWAP_SCRIPT = """\
RESET 0 +1
RESET 1 -1
LINK 0 1 ON
XCHG 0 1 3.141592653589793
MEASURE 0
MEASURE 1
"""


def write(path: Path, text: str) -> str:
    path.write_text(text, encoding="utf-8")
    return str(path)


def run_to_file(tmp_path: Path, subcommand: str, config_text: str, name: str = "out.txt", extra=()):
    config = write(tmp_path / f"{name}.cfg", config_text)
    out = tmp_path / name
    code = main([subcommand, "--config", config, "--out", str(out), *extra])
    return code, out


class TestChern:
    def test_defaults_report_plus_one(self, tmp_path, capsys):
        assert main(["chern"]) == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines[0] == "method,n_integer,raw,residual,n_grid,k_max"
        assert lines[1].startswith("quadrature,1,")
        assert lines[2].startswith("plaquette,1,")

    def test_opposite_chirality(self, tmp_path):
        code, out = run_to_file(tmp_path, "chern", "chi = -1\n")
        assert code == 0
        assert ",-1," in out.read_text().splitlines()[1]

    def test_no_fermi_surface(self, tmp_path):
        code, out = run_to_file(tmp_path, "chern", "mu = -1.0\n")
        assert code == 0
        assert out.read_text().splitlines()[1].split(",")[1] == "0"

    def test_single_method(self, tmp_path):
        code, out = run_to_file(
            tmp_path, "chern", "method = plaquette\nn_grid = 128\nk_max = 8.0\n"
        )
        assert code == 0
        rows = out.read_text().strip().splitlines()
        assert len(rows) == 2
        assert rows[1].split(",")[0] == "plaquette"
        assert rows[1].split(",")[4] == "128"

    def test_gapless_exit_code(self, tmp_path, capsys):
        config = write(tmp_path / "c.cfg", "gap = 0.0\n")
        assert main(["chern", "--config", config]) == 2

    def test_not_converged_exit_code(self, tmp_path):
        config = write(
            tmp_path / "c.cfg",
            "gap = 5.0\nmu = 0.5\nmethod = quadrature\nk_max = 40.0\nn_grid = 64\n",
        )
        assert main(["chern", "--config", config]) == 3

    def test_unknown_key_named_in_error(self, tmp_path, capsys):
        config = write(tmp_path / "c.cfg", "gapp = 1.0\n")
        assert main(["chern", "--config", config]) == 1
        assert "gapp" in capsys.readouterr().err


class TestBeatDampRabi:
    def test_beat_half_period_row(self, tmp_path):
        config_text = (
            "delta = 0.5\n"
            f"t_max = {2.0 * math.pi!r}\n"
            f"dt = {math.pi / 100.0!r}\n"
        )
        code, out = run_to_file(tmp_path, "beat", config_text)
        assert code == 0
        rows = out.read_text().strip().splitlines()
        assert rows[0] == "t,p_diff,pop_plus,pop_minus"
        assert len(rows) == 202
        t, p_diff, *_ = rows[101].split(",")
        assert abs(float(t) - math.pi) < 1e-12
        assert abs(float(p_diff) + 1.0) < 1e-9

    def test_damp_overdamped_never_changes_sign(self, tmp_path):
        config_text = "delta = 0.5\ngamma = 10.0\nt_max = 120.0\ndt = 0.005\n"
        code, out = run_to_file(tmp_path, "damp", config_text)
        assert code == 0
        rows = out.read_text().strip().splitlines()
        assert rows[0] == "t,p_diff,pop_plus,pop_minus,purity"
        values = [float(row.split(",")[1]) for row in rows[1:]]
        assert min(values) > 0.0

    def test_rabi_zero_amplitude_bit_identical_to_beat(self, tmp_path):
        shared = "delta = 0.5\nepsilon = 0.3\nt_max = 10.0\ndt = 0.01\n"
        _, beat_out = run_to_file(tmp_path, "beat", shared, name="beat.csv")
        _, rabi_out = run_to_file(tmp_path, "rabi", shared + "amp = 0.0\n", name="rabi.csv")
        assert beat_out.read_bytes() == rabi_out.read_bytes()

    def test_rabi_resonant_transfer(self, tmp_path):
        # driven from |+1> at resonance: full population swing within a pi pulse
        amp = 0.05
        config_text = (
            f"epsilon = 1.0\namp = {amp!r}\nomega = 2.0\n"
            f"t_max = {math.pi / amp!r}\ndt = 0.005\n"
        )
        code, out = run_to_file(tmp_path, "rabi", config_text)
        assert code == 0
        rows = out.read_text().strip().splitlines()[1:]
        final = float(rows[-1].split(",")[1])
        assert final < -0.9

    def test_step_too_large_exit_code(self, tmp_path):
        config = write(tmp_path / "c.cfg", "delta = 0.5\ngamma = 10.0\ndt = 0.05\n")
        assert main(["damp", "--config", config]) == 4


class TestChain:
    def test_swap_script_log(self, tmp_path):
        script = write(tmp_path / "swap.gates", SWAP_SCRIPT)
        code, out = run_to_file(tmp_path, "chain", f"script_path = {script}\nseed = 42\n")
        assert code == 0
        text = out.read_text()
        assert "shot 1 measurements: 0:-1 1:+1" in text
        assert "|-1,+1> 1.0" in text

    def test_empty_script_reports_initial_state(self, tmp_path):
        script = write(tmp_path / "empty.gates", "# nothing\n")
        code, out = run_to_file(tmp_path, "chain", f"script_path = {script}\n")
        assert code == 0
        text = out.read_text()
        assert "shot 1 measurements: none" in text
        assert "|-1> 1.0" in text

    def test_missing_script_is_config_error(self, tmp_path):
        code, _ = run_to_file(tmp_path, "chain", "seed = 1\n")
        assert code == 1

    def test_parse_error_exit_and_line(self, tmp_path, capsys):
        script = write(tmp_path / "bad.gates", "RESET 0 +1\nFROB 1\n")
        config = write(tmp_path / "c.cfg", f"script_path = {script}\n")
        assert main(["chain", "--config", config]) == 5
        assert "line 2" in capsys.readouterr().err

    def test_link_off_exit_code(self, tmp_path):
        script = write(tmp_path / "off.gates", "XCHG 0 1 1.0\n")
        config = write(tmp_path / "c.cfg", f"script_path = {script}\n")
        assert main(["chain", "--config", config]) == 6

    def test_seed_flag_overrides_config(self, tmp_path):
        script = write(
            tmp_path / "coin.gates", "GATE 0 H\nMEASURE 0\n"
        )
        config_text = f"script_path = {script}\nseed = 7\nshots = 40\n"
        _, base = run_to_file(tmp_path, "chain", config_text, name="a.log")
        _, rerun = run_to_file(tmp_path, "chain", config_text, name="b.log")
        _, other = run_to_file(
            tmp_path, "chain", config_text, name="c.log", extra=("--seed", "8")
        )
        assert base.read_bytes() == rerun.read_bytes()
        assert base.read_bytes() != other.read_bytes()


class TestDevice:
    def test_default_report(self, tmp_path):
        code, out = run_to_file(tmp_path, "device", "")
        assert code == 0
        rows = out.read_text().strip().splitlines()
        header = rows[-2]
        data = rows[-1].split(",")
        assert header == "h_gauss,eps_ev,n_pairs,volume_a3,lx_a,ly_a,lz_a,within_lambda"
        assert float(data[1]) == pytest.approx(1.447e-9, rel=1e-3)
        assert 1e5 < int(data[2]) < 1e7
        assert 1e7 < float(data[3]) < 1e9
        assert data[7] == "true"

    def test_bare_mass(self, tmp_path):
        code, out = run_to_file(tmp_path, "device", "mass_ratio = 1.0\n")
        assert code == 0
        eps = float(out.read_text().strip().splitlines()[-1].split(",")[1])
        assert eps == pytest.approx(5.7883818e-9, rel=1e-9)

    def test_zero_field_is_config_error(self, tmp_path):
        code, _ = run_to_file(tmp_path, "device", "h_gauss = 0.0\n")
        assert code == 1


class TestConfigParsing:
    def test_duplicate_key(self, tmp_path):
        config = write(tmp_path / "c.cfg", "mu = 1.0\nmu = 2.0\n")
        assert main(["chern", "--config", config]) == 1

    def test_malformed_line(self, tmp_path):
        config = write(tmp_path / "c.cfg", "just words\n")
        assert main(["chern", "--config", config]) == 1

    def test_non_numeric_value(self, tmp_path):
        config = write(tmp_path / "c.cfg", "mu = lots\n")
        assert main(["chern", "--config", config]) == 1

    def test_non_finite_value(self, tmp_path):
        config = write(tmp_path / "c.cfg", "mu = inf\n")
        assert main(["chern", "--config", config]) == 1

    def test_missing_config_file(self, tmp_path):
        assert main(["chern", "--config", str(tmp_path / "absent.cfg")]) == 1

    def test_comments_allowed(self, tmp_path):
        config = write(tmp_path / "c.cfg", "# full line\nmu = 1.0  # tail\n")
        code, _ = run_to_file(tmp_path, "chern", "mu = 1.0  # tail\n")
        assert code == 0


class TestOutputContract:
    def test_csv_column_counts_constant(self, tmp_path):
        jobs = {
            "beat": ("delta = 0.5\nt_max = 3.0\ndt = 0.01\n", 4),
            "damp": ("delta = 0.5\ngamma = 0.2\nt_max = 3.0\ndt = 0.01\n", 5),
            "rabi": ("epsilon = 1.0\namp = 0.05\nomega = 2.0\nt_max = 3.0\ndt = 0.005\n", 4),
        }
        for subcommand, (config_text, columns) in jobs.items():
            _, out = run_to_file(tmp_path, subcommand, config_text, name=f"{subcommand}.csv")
            rows = out.read_text().strip().splitlines()
            assert all(len(row.split(",")) == columns for row in rows), subcommand

    def test_config_output_path_honored(self, tmp_path):
        target = tmp_path / "from_config.csv"
        config = write(
            tmp_path / "c.cfg", f"delta = 0.5\nt_max = 1.0\ndt = 0.1\noutput_path = {target}\n"
        )
        assert main(["beat", "--config", config]) == 0
        assert target.exists()
        assert target.read_text().startswith("t,p_diff")


class TestDeterminism:
    def test_repeated_runs_hash_identically(self, tmp_path):
        script = write(tmp_path / "bell.gates", SWAP_SCRIPT)
        jobs = {
            "chern": "n_grid = 128\n",
            "beat": "delta = 0.5\nt_max = 5.0\ndt = 0.01\n",
            "damp": "delta = 0.5\ngamma = 0.2\nt_max = 5.0\ndt = 0.01\n",
            "rabi": "epsilon = 1.0\namp = 0.05\nomega = 2.0\nt_max = 5.0\ndt = 0.005\n",
            "chain": f"script_path = {script}\nseed = 11\nshots = 25\n",
            "device": "",
        }
        for subcommand, config_text in jobs.items():
            digests = set()
            for repeat in range(2):
                _, out = run_to_file(
                    tmp_path, subcommand, config_text, name=f"{subcommand}-{repeat}.out"
                )
                digests.add(hashlib.sha256(out.read_bytes()).hexdigest())
            assert len(digests) == 1, subcommand


def test_module_entry_point(tmp_path):
    result = subprocess.run(
        [sys.executable, "-m", "chiralqubit.cli", "device"],
        capture_output=True,
        text=True,
        env={"PYTHONPATH": str(Path(__file__).resolve().parents[1] / "src"), "PATH": "/usr/bin:/bin"},
    )
    assert result.returncode == 0
    assert "h_gauss,eps_ev" in result.stdout
