import csv
import json

import numpy as np
import pytest

from assayqc.cli import main

PLATE_HEADER = "plate_id,row,col,role,value\n"


def write_group_csv(path, neg, pos):
    lines = ["group,value"]
    lines += [f"neg,{v}" for v in neg]
    lines += [f"pos,{v}" for v in pos]
    path.write_text("\n".join(lines) + "\n")


def write_plate_csv(path, plates):
    """plates: {plate_id: (neg_vals, pos_vals, sample_vals)}"""
    lines = [PLATE_HEADER.strip()]
    for pid, (neg, pos, samples) in plates.items():
        for r, v in enumerate(neg, 1):
            lines.append(f"{pid},{r},1,neg,{v}")
        for r, v in enumerate(pos, 1):
            lines.append(f"{pid},{r},2,pos,{v}")
        for r, v in enumerate(samples, 1):
            lines.append(f"{pid},{r},3,sample,{v}")
    path.write_text("\n".join(lines) + "\n")


def read_tidy(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


class TestMetricsCommand:
    def test_disjoint_two_group_csv(self, tmp_path, capsys):
        rng = np.random.default_rng(0)
        path = tmp_path / "groups.csv"
        write_group_csv(path, rng.normal(0, 1, 1000), rng.normal(10, 1, 1000))
        assert main(["metrics", str(path)]) == 0
        report = json.loads(capsys.readouterr().out)
        assert report["gssmd"] == 1.0
        assert report["accepted"]["gssmd"] is True

    def test_identical_groups(self, tmp_path, capsys):
        values = np.random.default_rng(1).normal(0, 1, 1000)
        path = tmp_path / "groups.csv"
        write_group_csv(path, values, values)
        assert main(["metrics", str(path)]) == 0
        report = json.loads(capsys.readouterr().out)
        assert abs(report["gssmd"]) <= 0.05

    def test_missing_header_exits_2(self, tmp_path, capsys):
        path = tmp_path / "bad.csv"
        path.write_text("1,2,3\n4,5,6\n")
        assert main(["metrics", str(path)]) == 2
        err = capsys.readouterr().err
        assert "plate_id,row,col,role,value" in err
        assert "group,value" in err

    def test_plate_csv_emits_one_report_per_plate(self, tmp_path, capsys):
        rng = np.random.default_rng(2)
        path = tmp_path / "plates.csv"
        write_plate_csv(path, {
            "p1": (rng.normal(0, 1, 20), rng.normal(8, 1, 20), []),
            "p2": (rng.normal(0, 1, 20), rng.normal(8, 1, 20), []),
        })
        assert main(["metrics", str(path)]) == 0
        reports = json.loads(capsys.readouterr().out)
        assert [r["plate_id"] for r in reports] == ["p1", "p2"]
        assert all(r["n_neg"] == 20 for r in reports)

    def test_out_file_and_csv_format(self, tmp_path):
        rng = np.random.default_rng(3)
        src = tmp_path / "groups.csv"
        write_group_csv(src, rng.normal(0, 1, 100), rng.normal(5, 1, 100))
        out = tmp_path / "report.csv"
        assert main(["metrics", str(src), "--format", "csv", "--out", str(out)]) == 0
        rows = {r["key"]: r["value"] for r in csv.DictReader(out.open())}
        assert "gssmd" in rows and "accepted.gssmd" in rows

    def test_csv_format_multi_plate(self, tmp_path, capsys):
        rng = np.random.default_rng(4)
        path = tmp_path / "plates.csv"
        write_plate_csv(path, {
            "p1": (rng.normal(0, 1, 10), rng.normal(8, 1, 10), []),
            "p2": (rng.normal(0, 1, 10), rng.normal(8, 1, 10), []),
        })
        assert main(["metrics", str(path), "--format", "csv"]) == 0
        out = capsys.readouterr().out
        assert out.count("plate_id,p") == 2  # one block per plate
        assert out.splitlines()[0] == "key,value"

    def test_nan_value_exits_2(self, tmp_path, capsys):
        path = tmp_path / "plate.csv"
        path.write_text(PLATE_HEADER + "p1,1,1,pos,NaN\n")
        assert main(["metrics", str(path)]) == 2
        assert "line 2" in capsys.readouterr().err


class TestSimulateCommand:
    def test_seed_is_required(self, tmp_path):
        with pytest.raises(SystemExit) as exc:
            main(["simulate", "fig1", "--out-dir", str(tmp_path)])
        assert exc.value.code == 2

    def test_unknown_scenario_exits_2(self, tmp_path):
        with pytest.raises(SystemExit) as exc:
            main(["simulate", "fig9", "--seed", "1", "--out-dir", str(tmp_path)])
        assert exc.value.code == 2

    def test_fig1_covers_the_grid(self, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"trials": 2, "n": 200}))
        assert main(["simulate", "fig1", "--seed", "3", "--out-dir", str(tmp_path),
                     "--config", str(cfg)]) == 0
        seen = set()
        for sigma in (1, 3, 5):
            for row in read_tidy(tmp_path / f"fig1_sigma{sigma}.csv"):
                seen.add((float(row["sigma"]), float(row["mu_diff"])))
                if (row["sigma"], row["mu_diff"], row["metric"],
                        row["aggregate"]) == ("1", "10", "gssmd", "mean"):
                    assert float(row["value"]) == 1.0  # disjoint at 10 sigma
        assert seen == {(float(s), float(m)) for s in (1, 3, 5)
                        for m in (0, 1, 3, 5, 10, 20, 30)}

    def test_fig3_outlier_convergence(self, tmp_path):
        assert main(["simulate", "fig3", "--seed", "9", "--out-dir", str(tmp_path)]) == 0
        rows = read_tidy(tmp_path / "fig3_outliers.csv")
        cell = [r for r in rows
                if r["metric"] == "gssmd" and r["aggregate"] == "mean"
                and float(r["fraction"]) == 0.2 and float(r["outlier_mean"]) == 30.0]
        assert len(cell) == 1
        assert float(cell[0]["value"]) == pytest.approx(0.20, abs=0.02)

    def test_rerun_is_byte_identical(self, tmp_path, monkeypatch):
        monkeypatch.setenv("SOURCE_DATE_EPOCH", "1700000000")
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"sizes": [10, 50], "trials": 150,
                                   "dists": ["normal"]}))
        out1, out2 = tmp_path / "run1", tmp_path / "run2"
        for out in (out1, out2):
            assert main(["simulate", "fig6", "--seed", "1", "--out-dir", str(out),
                         "--config", str(cfg)]) == 0
        names = sorted(p.name for p in out1.iterdir())
        assert names == sorted(p.name for p in out2.iterdir())
        for name in names:
            assert (out1 / name).read_bytes() == (out2 / name).read_bytes()

    def test_replaying_a_manifest_reproduces_outputs(self, tmp_path, monkeypatch):
        monkeypatch.setenv("SOURCE_DATE_EPOCH", "1700000000")
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"trials": 2, "n": 100, "mu_diffs": [0, 5]}))
        out1, out2 = tmp_path / "run1", tmp_path / "run2"
        assert main(["simulate", "fig2", "--seed", "7", "--out-dir", str(out1),
                     "--config", str(cfg)]) == 0
        assert main(["simulate", "fig2", "--seed", "7", "--out-dir", str(out2),
                     "--config", str(out1 / "manifest.json")]) == 0
        assert (out1 / "fig2_lognormal.csv").read_bytes() == \
            (out2 / "fig2_lognormal.csv").read_bytes()

    def test_fig4_panels(self, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"n": 200, "trials": 2, "mu_diffs": [0, 5],
                                   "snr_db": [0, 20], "panel_c_sizes": [50, 100]}))
        assert main(["simulate", "fig4", "--seed", "2", "--out-dir", str(tmp_path),
                     "--config", str(cfg)]) == 0
        for panel in ("A", "B", "C"):
            assert (tmp_path / f"fig4_panel{panel}.csv").exists()
        scaled = [float(r["value"]) for r in read_tidy(tmp_path / "fig4_panelB.csv")]
        assert all(0.0 <= v <= 1.0 for v in scaled)
        sizes = {int(r["n"]) for r in read_tidy(tmp_path / "fig4_panelC.csv")}
        assert sizes == {50, 100}

    def test_fig5_subsampling_panel(self, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"n": 60, "trials": 2, "mu_diffs": [0, 5],
                                   "snr_db": [20], "panel_c_sizes": [10, 30],
                                   "subsample_size": 5, "subsample_repeats": 4}))
        assert main(["simulate", "fig5", "--seed", "2", "--out-dir", str(tmp_path),
                     "--config", str(cfg)]) == 0
        rows = read_tidy(tmp_path / "fig5_panelD.csv")
        metrics = {r["metric"] for r in rows}
        assert metrics == {"gssmd_subsampled", "ssmd_subsampled",
                           "gssmd_full", "ssmd_full"}
        strong = [r for r in rows if float(r["mu_diff"]) == 5.0
                  and r["metric"] == "gssmd_subsampled" and r["aggregate"] == "mean"]
        assert float(strong[0]["value"]) >= 0.9

    def test_unknown_config_key_exits_2(self, tmp_path, capsys):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"bogus": 1}))
        assert main(["simulate", "fig1", "--seed", "1", "--out-dir", str(tmp_path),
                     "--config", str(cfg)]) == 2
        assert "bogus" in capsys.readouterr().err

    def test_manifest_hashes_match_outputs(self, tmp_path):
        import hashlib
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"trials": 2, "n": 100}))
        assert main(["simulate", "fig2", "--seed", "5", "--out-dir", str(tmp_path),
                     "--config", str(cfg)]) == 0
        manifest = json.loads((tmp_path / "manifest.json").read_text())
        for name, digest in manifest["outputs"].items():
            assert hashlib.sha256((tmp_path / name).read_bytes()).hexdigest() == digest


class TestHitsCommand:
    def make_two_plates(self, tmp_path, d=10.0, n=100, n_samples=20):
        rng = np.random.default_rng(42)
        train, test = tmp_path / "train.csv", tmp_path / "test.csv"
        planted = rng.normal(d, 1, n_samples)
        write_plate_csv(train, {
            "plate1": (rng.normal(0, 1, n), rng.normal(d, 1, n), planted),
        })
        write_plate_csv(test, {
            "plate2": (rng.normal(0, 1, n), rng.normal(d, 1, n), []),
        })
        return train, test, planted

    def test_disjoint_plate_finds_planted_hits(self, tmp_path, capsys):
        train, _, planted = self.make_two_plates(tmp_path)
        assert main(["hits", str(train), "--rule", "gssmd", "--alpha", "0.05"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["n_hits"] == len(planted)
        assert 3.0 < payload["threshold"] < 7.0
        assert payload["direction"] == "higher"
        assert payload["assay_quality"]["accepted"]["gssmd"] is True

    def test_rules_agree_on_well_separated_controls(self, tmp_path, capsys):
        train, _, _ = self.make_two_plates(tmp_path, d=4.0, n=200)
        thresholds = {}
        bins = None
        for rule in ("gssmd", "logistic"):
            assert main(["hits", str(train), "--rule", rule]) == 0
            payload = json.loads(capsys.readouterr().out)
            thresholds[rule] = payload["threshold"]
            bins = payload["assay_quality"]["bins"]
        # both approximate the density crossing: within one shared bin width
        controls = [float(r["value"]) for r in csv.DictReader(train.open())
                    if r["role"] in ("pos", "neg")]
        bin_width = (max(controls) - min(controls)) / bins
        assert abs(thresholds["gssmd"] - thresholds["logistic"]) <= bin_width

    def test_evaluation_block_on_test_plate(self, tmp_path, capsys):
        train, test, _ = self.make_two_plates(tmp_path)
        assert main(["hits", str(train), "--test", str(test), "--rule", "logistic"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["evaluation"]["test_plate_id"] == "plate2"
        assert payload["evaluation"]["accuracy"] == 1.0
        assert payload["evaluation"]["type1_error"] == 0.0

    def test_zero_variance_controls_exit_3(self, tmp_path, capsys):
        path = tmp_path / "flat.csv"
        write_plate_csv(path, {"p": ([1.0, 1.0, 1.0], [5.0, 6.0, 7.0], [2.0])})
        assert main(["hits", str(path), "--rule", "sigma"]) == 3
        assert "numeric error" in capsys.readouterr().err

    def test_missing_file_exits_2(self, tmp_path):
        assert main(["hits", str(tmp_path / "nope.csv")]) == 2

    def test_plate_id_selector(self, tmp_path, capsys):
        rng = np.random.default_rng(1)
        path = tmp_path / "multi.csv"
        write_plate_csv(path, {
            "a": (rng.normal(0, 1, 30), rng.normal(9, 1, 30), []),
            "b": (rng.normal(0, 1, 30), rng.normal(9, 1, 30), []),
        })
        assert main(["hits", str(path), "--plate-id", "b"]) == 0
        assert json.loads(capsys.readouterr().out)["plate_id"] == "b"
        assert main(["hits", str(path), "--plate-id", "zzz"]) == 2

    def test_log_transform_for_lognormal_readouts(self, tmp_path, capsys):
        rng = np.random.default_rng(2)
        path = tmp_path / "ln.csv"
        write_plate_csv(path, {
            "p": (np.exp(rng.normal(0, 0.5, 100)), np.exp(rng.normal(3, 0.5, 100)),
                  np.exp(rng.normal(3, 0.5, 10))),
        })
        assert main(["hits", str(path), "--rule", "logistic", "--log-transform"]) == 0
        payload = json.loads(capsys.readouterr().out)
        # boundary in log units: between 0 and 3
        assert 0.5 < payload["threshold"] < 2.5
        assert payload["n_hits"] == 10


class TestCalibrateCommand:
    def test_writes_table_and_manifest(self, tmp_path):
        assert main(["calibrate", "--seed", "4", "--sizes", "10", "50",
                     "--trials", "150", "--out-dir", str(tmp_path)]) == 0
        rows = read_tidy(tmp_path / "null_calibration.csv")
        assert [int(r["n"]) for r in rows] == [10, 50]
        assert float(rows[0]["p999"]) >= float(rows[1]["p999"])
        manifest = json.loads((tmp_path / "manifest.json").read_text())
        assert manifest["subcommand"] == "calibrate"
        assert manifest["seed"] == 4

    def test_too_few_trials_exits_2(self, tmp_path):
        assert main(["calibrate", "--seed", "4", "--sizes", "10",
                     "--trials", "10", "--out-dir", str(tmp_path)]) == 2
