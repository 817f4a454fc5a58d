import json

from totsim.cli import main
from totsim.output import RECORDS_HEADER


def write_config(tmp_path, raw, name="scenario.json"):
    path = tmp_path / name
    path.write_text(json.dumps(raw))
    return str(path)


def minimal_raw(**overrides):
    raw = {
        "seed": 7,
        "lexicon": {
            "words": [
                {
                    "id": "apple",
                    "semantic": "++-+--++-",
                    "lexical": "++-+--++-",
                    "phonological": "++-+--++-",
                }
            ]
        },
        "target": "apple",
        "recall": {"cue_fraction": 1.0, "max_attempts": 8},
        "n_trials": 20,
    }
    raw.update(overrides)
    return raw


class TestSimulate:
    def test_writes_output_bundle(self, tmp_path):
        cfg = write_config(tmp_path, minimal_raw())
        out = tmp_path / "out"
        assert main(["simulate", "--config", cfg, "--out", str(out)]) == 0
        assert (out / "records.csv").exists()
        assert (out / "summary.csv").exists()
        assert (out / "run_meta.json").exists()
        lines = (out / "records.csv").read_text().splitlines()
        assert lines[0] == RECORDS_HEADER
        assert len(lines) == 21

    def test_metadata_reflects_resolved_config(self, tmp_path):
        cfg = write_config(tmp_path, minimal_raw())
        out = tmp_path / "out"
        main(["simulate", "--config", cfg, "--out", str(out)])
        meta = json.loads((out / "run_meta.json").read_text())
        assert meta["seed"] == 7
        assert meta["config"]["recall"]["max_attempts"] == 8
        assert "episodes_per_trial" in meta["defaults_applied"]
        assert meta["records_format"] == "csv"
        assert "interval_method" in meta

    def test_identical_runs_are_byte_identical(self, tmp_path):
        cfg = write_config(tmp_path, minimal_raw(recall={"cue_fraction": 0.0}))
        out_a, out_b = tmp_path / "a", tmp_path / "b"
        main(["simulate", "--config", cfg, "--out", str(out_a)])
        main(["simulate", "--config", cfg, "--out", str(out_b)])
        assert (out_a / "records.csv").read_bytes() == (out_b / "records.csv").read_bytes()
        assert (out_a / "summary.csv").read_bytes() == (out_b / "summary.csv").read_bytes()
        assert (out_a / "run_meta.json").read_bytes() == (out_b / "run_meta.json").read_bytes()

    def test_seed_override_changes_records(self, tmp_path):
        cfg = write_config(tmp_path, minimal_raw(recall={"cue_fraction": 0.0}))
        out_a, out_b, out_c = tmp_path / "a", tmp_path / "b", tmp_path / "c"
        main(["simulate", "--config", cfg, "--out", str(out_a)])
        main(["simulate", "--config", cfg, "--out", str(out_b), "--seed", "99"])
        main(["simulate", "--config", cfg, "--out", str(out_c), "--seed", "99"])
        assert (out_a / "records.csv").read_bytes() != (out_b / "records.csv").read_bytes()
        assert (out_b / "records.csv").read_bytes() == (out_c / "records.csv").read_bytes()
        assert json.loads((out_b / "run_meta.json").read_text())["seed"] == 99

    def test_workers_do_not_change_bytes(self, tmp_path):
        cfg = write_config(
            tmp_path, minimal_raw(recall={"cue_fraction": 0.0}, n_trials=64)
        )
        out_a, out_b = tmp_path / "a", tmp_path / "b"
        main(["simulate", "--config", cfg, "--out", str(out_a), "--workers", "1"])
        main(["simulate", "--config", cfg, "--out", str(out_b), "--workers", "4"])
        assert (out_a / "records.csv").read_bytes() == (out_b / "records.csv").read_bytes()

    def test_json_format(self, tmp_path):
        cfg = write_config(tmp_path, minimal_raw())
        out = tmp_path / "out"
        assert main(["simulate", "--config", cfg, "--out", str(out), "--format", "json"]) == 0
        payload = json.loads((out / "records.json").read_text())
        assert len(payload["records"]) == 20
        assert payload["records"][0]["classification"] == "Resolved"
        assert (out / "summary.json").exists()

    def test_invalid_config_exits_2_with_field_path(self, tmp_path, capsys):
        cfg = write_config(tmp_path, minimal_raw(recall={"cue_fraction": 1.5}))
        code = main(["simulate", "--config", cfg, "--out", str(tmp_path / "out")])
        assert code == 2
        assert "recall.cue_fraction" in capsys.readouterr().err

    def test_missing_config_file_exits_2(self, tmp_path, capsys):
        code = main(
            ["simulate", "--config", str(tmp_path / "nope.json"), "--out", str(tmp_path)]
        )
        assert code == 2

    def test_invalid_json_exits_2(self, tmp_path, capsys):
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        assert main(["simulate", "--config", str(path), "--out", str(tmp_path / "o")]) == 2

    def test_workers_flag_validated(self, tmp_path, capsys):
        cfg = write_config(tmp_path, minimal_raw())
        code = main(
            ["simulate", "--config", cfg, "--out", str(tmp_path / "o"), "--workers", "0"]
        )
        assert code == 2
        assert "workers" in capsys.readouterr().err

    def test_unsatisfiable_generation_exits_1(self, tmp_path, capsys):
        raw = {
            "seed": 3,
            "lexicon": {
                "generator": {
                    "count": 3,
                    "lengths": {"semantic": 4, "lexical": 4, "phonological": 4},
                    "min_pairwise_distance": 4,
                }
            },
            "target": "w0",
            "n_trials": 1,
        }
        cfg = write_config(tmp_path, raw)
        assert main(["simulate", "--config", cfg, "--out", str(tmp_path / "o")]) == 1
        assert "min pairwise distance" in capsys.readouterr().err


class TestOracle:
    def test_cued_probability(self, tmp_path, capsys):
        cfg = write_config(tmp_path, minimal_raw())
        code = main(
            [
                "oracle",
                "--config",
                cfg,
                "--word",
                "apple",
                "--component",
                "phonological",
                "--cue-size",
                "3",
            ]
        )
        assert code == 0
        assert capsys.readouterr().out.strip() == "57/64 = 0.890625"

    def test_free_recall_reduced_fraction(self, tmp_path, capsys):
        cfg = write_config(tmp_path, minimal_raw())
        main(["oracle", "--config", cfg, "--word", "apple", "--component", "semantic", "--cue-size", "0"])
        assert capsys.readouterr().out.strip() == "1/2 = 0.5"

    def test_full_cue_certain(self, tmp_path, capsys):
        cfg = write_config(tmp_path, minimal_raw())
        main(["oracle", "--config", cfg, "--word", "apple", "--component", "lexical", "--cue-size", "9"])
        assert capsys.readouterr().out.strip() == "1/1 = 1"

    def test_unknown_word_exits_2(self, tmp_path, capsys):
        cfg = write_config(tmp_path, minimal_raw())
        code = main(
            ["oracle", "--config", cfg, "--word", "pear", "--component", "semantic", "--cue-size", "0"]
        )
        assert code == 2

    def test_unknown_component_exits_2(self, tmp_path, capsys):
        cfg = write_config(tmp_path, minimal_raw())
        code = main(
            ["oracle", "--config", cfg, "--word", "apple", "--component", "orthographic", "--cue-size", "0"]
        )
        assert code == 2

    def test_capacity_exceeded_exits_2(self, tmp_path, capsys):
        raw = {
            "seed": 5,
            "lexicon": {
                "generator": {
                    "count": 1,
                    "lengths": {"semantic": 31, "lexical": 9, "phonological": 9},
                }
            },
            "target": "w0",
        }
        cfg = write_config(tmp_path, raw)
        code = main(
            ["oracle", "--config", cfg, "--word", "w0", "--component", "semantic", "--cue-size", "0"]
        )
        assert code == 2
        assert "enumeration cap" in capsys.readouterr().err

    def test_cue_size_bounds(self, tmp_path, capsys):
        cfg = write_config(tmp_path, minimal_raw())
        code = main(
            ["oracle", "--config", cfg, "--word", "apple", "--component", "semantic", "--cue-size", "10"]
        )
        assert code == 2


class TestValidate:
    def test_valid_config_echoes_normalized(self, tmp_path, capsys):
        cfg = write_config(tmp_path, minimal_raw())
        assert main(["validate", "--config", cfg]) == 0
        echoed = json.loads(capsys.readouterr().out)
        assert echoed["recall"]["max_attempts"] == 8
        assert echoed["recall"]["chronometry"] == {"spike_ms": 1.0, "interval_ms": 10.0}
        assert echoed["episodes_per_trial"] == 1

    def test_unknown_field_exits_2(self, tmp_path, capsys):
        cfg = write_config(tmp_path, minimal_raw(bogus=1))
        assert main(["validate", "--config", cfg]) == 2
        assert "bogus" in capsys.readouterr().err

    def test_bad_pattern_chars_exit_2(self, tmp_path, capsys):
        raw = minimal_raw()
        raw["lexicon"]["words"][0]["phonological"] = "++=+--++-"
        cfg = write_config(tmp_path, raw)
        assert main(["validate", "--config", cfg]) == 2
        assert "lexicon.words[0].phonological" in capsys.readouterr().err


class TestBundledConfigs:
    def test_every_bundled_config_validates(self, capsys):
        import pathlib

        configs = sorted(pathlib.Path(__file__).parent.parent.glob("configs/*.json"))
        assert configs
        for path in configs:
            assert main(["validate", "--config", str(path)]) == 0, path.name
            capsys.readouterr()

    def test_bundled_configs_match_scenario_builders(self):
        import pathlib

        import totsim.scenarios as sc

        root = pathlib.Path(__file__).parent.parent / "configs"
        expected = {
            "free_recall.json": sc.free_recall_baseline(),
            "cue_sweep.json": sc.cue_intensity_sweep(),
            "damage_sweep.json": sc.damage_sweep(),
            "priming_interloper.json": sc.priming_interloper(),
            "illusory_tot.json": sc.illusory_tot(),
            "partial_information.json": sc.partial_information(),
            "delayed_resolution.json": sc.delayed_resolution(),
        }
        for name, raw in expected.items():
            assert json.loads((root / name).read_text()) == raw, name
