import json
import math

import numpy as np
import pytest

from coherray import SweepSpec, run_sweep
from coherray.cli import main

TWO_PI = 2.0 * math.pi
UNIT_ENERGY = TWO_PI  # unit-amplitude wave at unit wavelength, unit box


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def split_csv(text):
    """Return (meta dict, header list, data row lists) from CSV output."""
    lines = text.splitlines()
    meta = {}
    body = []
    for line in lines:
        if line.startswith("# "):
            key, _, value = line[2:].partition(" = ")
            meta[key] = value
        else:
            body.append(line)
    header = body[0].split(",")
    rows = [line.split(",") for line in body[1:]]
    return meta, header, rows


def quantity_map(rows):
    return {row[0]: row[1] for row in rows}


class TestWorkedExamples:
    def test_quantum_pair_near_antiphase(self, capsys):
        code, out, _ = run_cli(
            capsys, "quantum", "--n-waves", "2", "--delta-phi", "3.14159265",
            "--n", "1",
        )
        assert code == 0
        values = quantity_map(split_csv(out)[2])
        assert float(values["diagonal"]) == pytest.approx(3.0, rel=1e-12)
        assert abs(float(values["total"])) < 1e-12

    def test_overlap_half_period_shift(self, capsys):
        code, out, _ = run_cli(
            capsys, "overlap", "--dk", "3.14159,0,0", "--box", "1,1,1"
        )
        assert code == 0
        values = quantity_map(split_csv(out)[2])
        assert float(values["overlap_re"]) == pytest.approx(2.0 / math.pi, abs=1e-4)
        assert float(values["overlap_im"]) == 0.0
        assert values["regime"] == "small_volume"

    def test_overlap_missing_box_reports_the_key(self, capsys):
        code, _, err = run_cli(capsys, "overlap", "--dk", "1,0,0")
        assert code == 4
        assert "box" in err


class TestExitCodes:
    def test_unknown_subcommand_is_usage_error(self, capsys):
        code, _, err = run_cli(capsys, "frobnicate")
        assert code == 2
        assert err

    def test_type_mismatch(self, capsys):
        code, _, err = run_cli(capsys, "classical", "--n-waves", "many")
        assert code == 3
        assert "n-waves" in err

    def test_unknown_flag(self, capsys):
        code, _, _ = run_cli(capsys, "classical", "--n-waves", "2", "--bogus", "1")
        assert code == 5

    def test_missing_required_key(self, capsys):
        code, _, err = run_cli(capsys, "classical")
        assert code == 4
        assert "n-waves" in err

    def test_runtime_failure(self, capsys):
        # detector parked well inside the near field
        code, _, err = run_cli(
            capsys, "spectrum", "--n-sources", "2", "--spacing", "0.5",
            "--wavelength-min", "1", "--wavelength-max", "2", "--radius", "5",
        )
        assert code == 1
        assert err


class TestConfigFile:
    def write(self, tmp_path, text):
        path = tmp_path / "run.cfg"
        path.write_text(text, encoding="utf-8")
        return str(path)

    def test_file_values_are_used(self, tmp_path, capsys):
        path = self.write(tmp_path, "# comment line\nclassical.n-waves = 3\n")
        code, out, _ = run_cli(capsys, "classical", "--config", path)
        assert code == 0
        values = quantity_map(split_csv(out)[2])
        assert float(values["enhancement"]) == pytest.approx(3.0, rel=1e-12)

    def test_flag_beats_file(self, tmp_path, capsys):
        path = self.write(tmp_path, "classical.n-waves = 3\n")
        code, out, _ = run_cli(
            capsys, "classical", "--config", path, "--n-waves", "2"
        )
        assert code == 0
        values = quantity_map(split_csv(out)[2])
        assert float(values["enhancement"]) == pytest.approx(2.0, rel=1e-12)

    def test_global_section_sets_format(self, tmp_path, capsys):
        path = self.write(
            tmp_path, "global.format = json\nclassical.n-waves = 2\n"
        )
        code, out, _ = run_cli(capsys, "classical", "--config", path)
        assert code == 0
        document = json.loads(out)
        assert document["meta"]["config.format"] == "json"

    def test_energy_scale_leaves_enhancement_alone(self, tmp_path, capsys):
        base_args = ("classical", "--n-waves", "2")
        _, plain_out, _ = run_cli(capsys, *base_args)
        path = self.write(tmp_path, "units.energy-scale = 2.0\n")
        code, scaled_out, _ = run_cli(capsys, *base_args, "--config", path)
        assert code == 0
        plain = quantity_map(split_csv(plain_out)[2])
        scaled = quantity_map(split_csv(scaled_out)[2])
        for key in ("diagonal", "cross", "total"):
            assert float(scaled[key]) == 2.0 * float(plain[key])
        assert scaled["enhancement"] == plain["enhancement"]

    def test_unknown_key_and_section_rejected(self, tmp_path, capsys):
        path = self.write(tmp_path, "classical.warp = 9\n")
        assert run_cli(capsys, "classical", "--config", path)[0] == 5
        path = self.write(tmp_path, "engine.n-waves = 2\n")
        assert run_cli(capsys, "classical", "--config", path)[0] == 5

    def test_malformed_line(self, tmp_path, capsys):
        path = self.write(tmp_path, "this line has no equals sign\n")
        code, _, err = run_cli(capsys, "classical", "--config", path)
        assert code == 2
        assert "run.cfg:1" in err

    def test_unreadable_path(self, capsys):
        code, _, _ = run_cli(
            capsys, "classical", "--n-waves", "2", "--config", "/no/such/file.cfg"
        )
        assert code == 2


class TestOutputShape:
    def test_csv_meta_block_is_sorted_and_rows_ordered(self, capsys):
        code, out, _ = run_cli(capsys, "classical", "--n-waves", "4")
        assert code == 0
        meta_lines = [l for l in out.splitlines() if l.startswith("# ")]
        assert meta_lines == sorted(meta_lines)
        meta, header, rows = split_csv(out)
        assert header == ["quantity", "value"]
        assert [row[0] for row in rows] == [
            "diagonal", "cross", "total", "enhancement"
        ]
        assert meta["config.subcommand"] == "classical"

    def test_biphoton_row_labels(self, capsys):
        code, out, _ = run_cli(
            capsys, "biphoton", "--overlap", "1", "--delta-phi", "0"
        )
        assert code == 0
        values = quantity_map(split_csv(out)[2])
        assert float(values["photon_energy"]) == 4.0
        assert float(values["vacuum_energy"]) == 2.0
        assert float(values["total_energy"]) == 6.0

    def test_sweep_emits_one_row_per_step(self, capsys):
        code, out, _ = run_cli(
            capsys, "sweep", "--target", "classical_energy",
            "--parameter", "phase_delta", "--start", "0", "--stop", "6.28",
            "--steps", "9", "--n-waves", "2",
        )
        assert code == 0
        _, header, rows = split_csv(out)
        assert header == ["phase_delta", "power", "enhancement"]
        assert len(rows) == 9

    def test_json_rows_reproduce_library_floats(self, capsys):
        code, out, _ = run_cli(
            capsys, "sweep", "--target", "classical_energy",
            "--parameter", "phase_delta", "--start", "0", "--stop", "3.14",
            "--steps", "5", "--n-waves", "2", "--format", "json",
        )
        assert code == 0
        document = json.loads(out)
        assert document["columns"] == ["phase_delta", "power", "enhancement"]
        curve = run_sweep(
            SweepSpec("classical_energy", "phase_delta", 0.0, 3.14, 5, {"n_waves": 2})
        )
        assert len(document["rows"]) == 5
        for row, param, power, enh in zip(
            document["rows"], curve.parameter, curve.power, curve.enhancement
        ):
            assert row[0] == param
            assert row[1] == power
            assert row[2] == enh

    def test_identical_config_gives_identical_bytes(self, tmp_path, capsys):
        out_path = tmp_path / "result.csv"
        argv = (
            "sweep", "--target", "farfield_power", "--parameter", "source_count",
            "--start", "1", "--stop", "4", "--steps", "4", "--spacing", "0.2",
            "--wavelength", "1.0", "--samples", "128",
            "--output", str(out_path),
        )
        assert run_cli(capsys, *argv)[0] == 0
        first = out_path.read_bytes()
        assert run_cli(capsys, *argv)[0] == 0
        assert out_path.read_bytes() == first

    def test_seed_changes_random_profile_output(self, capsys):
        argv = (
            "sweep", "--target", "classical_energy", "--parameter", "source_count",
            "--start", "2", "--stop", "6", "--steps", "5",
            "--phase-profile", "random",
        )
        _, out_a, _ = run_cli(capsys, *argv, "--seed", "3")
        _, out_b, _ = run_cli(capsys, *argv, "--seed", "3")
        _, out_c, _ = run_cli(capsys, *argv, "--seed", "4")
        rows_a = split_csv(out_a)[2]
        rows_b = split_csv(out_b)[2]
        rows_c = split_csv(out_c)[2]
        assert rows_a == rows_b
        assert [r[1] for r in rows_a] != [r[1] for r in rows_c]

    def test_quantum_sweep_respects_source_count(self, capsys):
        code, out, _ = run_cli(
            capsys, "sweep", "--target", "quantum_energy",
            "--parameter", "source_count", "--start", "1", "--stop", "4",
            "--steps", "4", "--n", "1", "--omega", "1.0",
        )
        assert code == 0
        rows = split_csv(out)[2]
        for row, n in zip(rows, (1, 2, 3, 4)):
            assert float(row[1]) == pytest.approx(n * n * 1.5, rel=1e-12)
