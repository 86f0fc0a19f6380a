import csv
import json
from pathlib import Path

import pytest

from diffbeam.cli import main


def write_json(path: Path, payload: dict) -> Path:
    path.write_text(json.dumps(payload, indent=2))
    return path


def read_csv(path: Path):
    with open(path) as fh:
        reader = csv.reader(fh)
        header = next(reader)
        rows = [[float(v) for v in row] for row in reader]
    return header, rows


@pytest.fixture
def workspace(tmp_path):
    gen_config = write_json(
        tmp_path / "generate.json",
        {"element_count": 9, "aperture_radius_mm": 20.0, "min_spacing_mm": 8.0},
    )
    assert main([
        "geometry", "generate",
        "--config", str(gen_config),
        "--seed", "7",
        "--out", str(tmp_path),
    ]) == 0
    return tmp_path


class TestGeometryCommands:
    def test_generated_geometry_validates(self, workspace):
        assert main([
            "geometry", "validate", "--config", str(workspace / "geometry.json")
        ]) == 0

    def test_validate_rejects_close_pair(self, tmp_path):
        bad = write_json(
            tmp_path / "bad.json",
            {
                "aperture_radius_mm": 20.0,
                "min_spacing_mm": 8.0,
                "elements": [
                    {"r_mm": 2.5, "phi_deg": 0.0, "q": 0.0, "theta_steer_deg": 0.0},
                    {"r_mm": 2.5, "phi_deg": 180.0, "q": 0.0, "theta_steer_deg": 0.0},
                ],
            },
        )
        assert main(["geometry", "validate", "--config", str(bad)]) == 1

    def test_generate_needs_seed(self, tmp_path):
        config = write_json(
            tmp_path / "g.json",
            {"element_count": 4, "aperture_radius_mm": 20.0, "min_spacing_mm": 8.0},
        )
        assert main(["geometry", "generate", "--config", str(config)]) == 1


class TestDesignCommand:
    def test_design_writes_filter_and_manifest(self, workspace):
        config = write_json(
            workspace / "design.json",
            {
                "geometry_file": "geometry.json",
                "pattern": {"family": "hypercardioid", "order": 4, "steer_deg": 60.0},
                "grid_hz": {"f_min": 1000.0, "f_max": 4000.0, "count": 7},
                "element_model": "first_order",
            },
        )
        out = workspace / "design"
        assert main(["design", "--config", str(config), "--out", str(out)]) == 0
        header, rows = read_csv(out / "filter.csv")
        assert len(rows) == 7
        assert len(header) == 1 + 2 * 9
        manifest = json.loads((out / "design_manifest.json").read_text())
        assert manifest["pattern"]["id"] == "hypercardioid-n4"

    def test_single_omni_design_weight_is_one(self, tmp_path):
        geometry = write_json(
            tmp_path / "one.json",
            {
                "aperture_radius_mm": 20.0,
                "min_spacing_mm": 8.0,
                "elements": [
                    {"r_mm": 0.0, "phi_deg": 0.0, "q": 0.0, "theta_steer_deg": 0.0}
                ],
            },
        )
        config = write_json(
            tmp_path / "design.json",
            {
                "geometry_file": "one.json",
                "pattern": {"family": "hypercardioid", "order": 0, "steer_deg": 0.0},
                "grid_hz": {"f_min": 50.0, "f_max": 4000.0, "count": 5},
                "element_model": "omni",
            },
        )
        out = tmp_path / "design"
        assert main(["design", "--config", str(config), "--out", str(out)]) == 0
        _, rows = read_csv(out / "filter.csv")
        for row in rows:
            assert row[1] == pytest.approx(1.0, abs=1e-12)
            assert row[2] == pytest.approx(0.0, abs=1e-12)

    def test_design_reruns_are_byte_identical(self, workspace):
        config = write_json(
            workspace / "design.json",
            {
                "geometry_file": "geometry.json",
                "pattern": {"family": "hypercardioid", "order": 2, "steer_deg": 60.0},
                "grid_hz": {"f_min": 1000.0, "f_max": 2000.0, "count": 3},
            },
        )
        out1, out2 = workspace / "d1", workspace / "d2"
        assert main(["design", "--config", str(config), "--out", str(out1)]) == 0
        assert main(["design", "--config", str(config), "--out", str(out2)]) == 0
        assert (out1 / "filter.csv").read_bytes() == (out2 / "filter.csv").read_bytes()

    def test_too_few_elements_fails_before_solving(self, tmp_path):
        geometry = write_json(
            tmp_path / "three.json",
            {
                "aperture_radius_mm": 20.0,
                "min_spacing_mm": 8.0,
                "elements": [
                    {"r_mm": 10.0, "phi_deg": a, "q": 0.0, "theta_steer_deg": 0.0}
                    for a in (0.0, 120.0, 240.0)
                ],
            },
        )
        config = write_json(
            tmp_path / "design.json",
            {
                "geometry_file": "three.json",
                "pattern": {"family": "hypercardioid", "order": 2, "steer_deg": 0.0},
                "grid_hz": {"f_min": 1000.0, "f_max": 1000.0, "count": 1},
            },
        )
        assert main(["design", "--config", str(config), "--out", str(tmp_path)]) == 1


class TestEvaluateCommand:
    @pytest.fixture
    def design_dir(self, workspace):
        config = write_json(
            workspace / "design.json",
            {
                "geometry_file": "geometry.json",
                "pattern": {"family": "hypercardioid", "order": 4, "steer_deg": 60.0},
                "grid_hz": {"f_min": 1000.0, "f_max": 4000.0, "count": 7},
            },
        )
        out = workspace / "design"
        assert main(["design", "--config", str(config), "--out", str(out)]) == 0
        return out

    def evaluate(self, workspace, design_dir, out_name="eval"):
        config = write_json(
            workspace / "evaluate.json",
            {
                "geometry_file": "geometry.json",
                "design_manifest": "design/design_manifest.json",
                "eval_frequency_hz": 1000.0,
            },
        )
        out = workspace / out_name
        code = main(["evaluate", "--config", str(config), "--out", str(out)])
        return code, out

    def test_distortionless_at_steering_angle(self, workspace, design_dir):
        code, out = self.evaluate(workspace, design_dir)
        assert code == 0
        header, rows = read_csv(out / "beampattern.csv")
        assert header == ["angle_deg", "rendered_db", "target_db"]
        assert len(rows) == 360
        at_60 = next(r for r in rows if r[0] == 60.0)
        assert abs(at_60[1] - at_60[2]) < 0.5
        assert abs(at_60[1]) < 0.5
        header, rows = read_csv(out / "wng.csv")
        assert header == ["freq_hz", "wng_db"]
        assert [r[0] for r in rows] == [1000.0, 1500.0, 2000.0, 2500.0, 3000.0, 3500.0, 4000.0]

    def test_byte_identical_reruns(self, workspace, design_dir):
        _, first = self.evaluate(workspace, design_dir, "eval1")
        _, second = self.evaluate(workspace, design_dir, "eval2")
        for name in ("beampattern.csv", "wng.csv", "df.csv"):
            assert (first / name).read_bytes() == (second / name).read_bytes()

    def test_geometry_hash_mismatch_rejected(self, workspace, design_dir):
        # regenerate the geometry with another seed, keep the old design
        gen_config = workspace / "generate.json"
        assert main([
            "geometry", "generate", "--config", str(gen_config),
            "--seed", "8", "--out", str(workspace),
        ]) == 0
        code, _ = self.evaluate(workspace, design_dir, "eval_mismatch")
        assert code == 1


class TestMontecarloCommand:
    def mc_config(self, tmp_path, trials=3):
        return write_json(
            tmp_path / "mc.json",
            {
                "trials": trials,
                "element_count": 5,
                "aperture_radius_mm": 20.0,
                "min_spacing_mm": 8.0,
                "pattern": {"family": "hypercardioid", "order": 1, "steer_deg": 60.0},
                "grid_hz": {"f_min": 1000.0, "f_max": 1000.0, "count": 1},
                "eval_frequency_hz": 1000.0,
                "master_seed": 4242,
                "angle_step_deg": 2.0,
                "integration_points": 1024,
            },
        )

    def test_single_trial_confidence_collapses(self, tmp_path):
        config = self.mc_config(tmp_path, trials=1)
        out = tmp_path / "mc"
        assert main(["montecarlo", "--config", str(config), "--out", str(out)]) == 0
        header, rows = read_csv(out / "bp_stats.csv")
        assert header == ["angle_deg", "mean_db", "std_db", "lower_ci", "upper_ci"]
        for row in rows:
            assert row[2] == 0.0
            assert row[3] == row[1] == row[4]
        failures = json.loads((out / "failures.json").read_text())
        assert failures["failed_trials"] == 0

    def test_same_seed_same_bytes(self, tmp_path):
        config = self.mc_config(tmp_path)
        out1, out2 = tmp_path / "a", tmp_path / "b"
        assert main(["montecarlo", "--config", str(config), "--out", str(out1)]) == 0
        assert main(["montecarlo", "--config", str(config), "--out", str(out2)]) == 0
        for name in ("bp_stats.csv", "wng_stats.csv", "df_stats.csv", "failures.json"):
            assert (out1 / name).read_bytes() == (out2 / name).read_bytes()

    def test_stats_headers(self, tmp_path):
        config = self.mc_config(tmp_path)
        out = tmp_path / "mc"
        assert main(["montecarlo", "--config", str(config), "--out", str(out)]) == 0
        assert read_csv(out / "wng_stats.csv")[0] == ["freq_hz", "mean_wng", "std_wng"]
        assert read_csv(out / "df_stats.csv")[0] == ["freq_hz", "mean_df", "std_df"]
