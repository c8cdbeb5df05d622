import re
import subprocess
import sys

import pytest

from ddmrfi.cli import EXIT_CONFIG, EXIT_OK, EXIT_ORDER, EXIT_SCHEMA, main
from ddmrfi.core import ChannelObservation, EpochRecord, from_db
from ddmrfi.ingest import write_records_file


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def worked_example_file(tmp_path, dbs=(45.0, 38.0, 37.0, 36.0), t=1746057600.0):
    chans = tuple(
        ChannelObservation(prn_id=p + 1, sp_lat=33.0, sp_lon=250.0,
                           noise_floor_counts=from_db(db))
        for p, db in enumerate(dbs)
    )
    path = tmp_path / "records.ndjson"
    write_records_file([EpochRecord(sat_id=1, epoch_time=t, channels=chans)], path)
    return path


class TestVersion:
    def test_version_lists_formats(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["--version"])
        assert exc.value.code == 0
        out = capsys.readouterr().out
        assert "ddmrfi 0.1.0" in out
        assert "flag-csv=1" in out

    def test_console_script_installed(self):
        proc = subprocess.run(
            [sys.executable, "-m", "ddmrfi.cli", "--version"],
            capture_output=True, text=True,
        )
        assert proc.returncode == 0
        assert "ddmrfi" in proc.stdout


class TestSimulate:
    def test_missing_scenario_exits_2(self, capsys, tmp_path):
        code, _, err = run(
            capsys, "simulate", str(tmp_path / "nope.toml"),
            "--records", str(tmp_path / "r.ndjson"), "--truth", str(tmp_path / "t.ndjson"),
        )
        assert code == EXIT_CONFIG
        assert "nope.toml" in err

    def test_deterministic_reruns(self, capsys, tmp_path, repo_root):
        scenario = repo_root / "scenarios" / "spike.toml"
        outs = []
        for tag in ("a", "b"):
            rec = tmp_path / f"{tag}.ndjson"
            tru = tmp_path / f"{tag}.truth.ndjson"
            code, _, _ = run(capsys, "simulate", str(scenario),
                             "--records", str(rec), "--truth", str(tru))
            assert code == EXIT_OK
            outs.append((rec.read_bytes(), tru.read_bytes()))
        assert outs[0] == outs[1]

    def test_seed_changes_output(self, capsys, tmp_path, repo_root):
        scenario = repo_root / "scenarios" / "spike.toml"
        rec1, rec2 = tmp_path / "1.ndjson", tmp_path / "2.ndjson"
        run(capsys, "simulate", str(scenario), "--records", str(rec1),
            "--truth", str(tmp_path / "t1.ndjson"))
        run(capsys, "simulate", str(scenario), "--records", str(rec2),
            "--truth", str(tmp_path / "t2.ndjson"), "--seed", "99")
        assert rec1.read_bytes() != rec2.read_bytes()


class TestDetect:
    def test_worked_example_row(self, capsys, tmp_path):
        path = worked_example_file(tmp_path)
        code, out, _ = run(capsys, "detect", str(path), "--method", "all",
                           "--threshold", "40")
        assert code == EXIT_OK
        lines = out.splitlines()
        assert lines[0].startswith("#") and "threshold_db=40.000" in lines[0]
        assert lines[1].startswith("epoch_time,sat,")
        fields = lines[2].split(",")
        # raw_max fires on the 45 dB channel, the 39.0 dB mean stays quiet
        assert fields[2] == "45.000"
        assert fields[3] == "39.000"
        assert fields[4] == "1" and fields[5] == "0"

    def test_default_threshold_in_header(self, capsys, tmp_path):
        path = worked_example_file(tmp_path)
        _, out, _ = run(capsys, "detect", str(path))
        assert "threshold_db=41.000" in out.splitlines()[0]

    def test_empty_input_header_only(self, capsys, tmp_path):
        path = tmp_path / "empty.ndjson"
        path.write_text("")
        code, out, _ = run(capsys, "detect", str(path))
        assert code == EXIT_OK
        lines = [l for l in out.splitlines() if not l.startswith("#")]
        assert lines == ["epoch_time,sat,max_db,mean_db,raw_max,mean_flag,"
                         "kurtosis_flag,simul,persist,proposed,cause"]

    def test_unsorted_needs_sort_flag(self, capsys, tmp_path):
        chans = (ChannelObservation(prn_id=1, sp_lat=33.0, sp_lon=250.0,
                                    noise_floor_counts=from_db(37.0)),)
        records = [
            EpochRecord(sat_id=1, epoch_time=1746057601.0, channels=chans),
            EpochRecord(sat_id=1, epoch_time=1746057600.0, channels=chans),
        ]
        path = tmp_path / "unsorted.ndjson"
        write_records_file(records, path)
        code, _, err = run(capsys, "detect", str(path))
        assert code == EXIT_ORDER
        assert "--sort" in err
        code, out, _ = run(capsys, "detect", str(path), "--sort")
        assert code == EXIT_OK
        assert len([l for l in out.splitlines() if not l.startswith("#")]) == 3

    def test_bounds_override_region(self, capsys, tmp_path):
        path = worked_example_file(tmp_path)
        code, out, _ = run(capsys, "detect", str(path), "--threshold", "40",
                           "--bounds", "0,10,0,10")  # observation out of region
        assert code == EXIT_OK
        fields = out.splitlines()[2].split(",")
        assert fields[4] == "0"

    def test_lenient_skips_bad_lines(self, capsys, tmp_path):
        path = worked_example_file(tmp_path)
        text = path.read_text()
        path.write_text("this is not json\n" + text)
        code, _, err = run(capsys, "detect", str(path))
        assert code == EXIT_SCHEMA
        code, out, err = run(capsys, "detect", str(path), "--lenient")
        assert code == EXIT_OK
        assert "skipped" in err
        assert len([l for l in out.splitlines() if not l.startswith("#")]) == 2


class TestEvaluate:
    def make_flags(self, capsys, tmp_path, repo_root, scenario="partial_channel"):
        rec = tmp_path / "records.ndjson"
        tru = tmp_path / "truth.ndjson"
        flags = tmp_path / "flags.csv"
        assert run(capsys, "simulate", str(repo_root / "scenarios" / f"{scenario}.toml"),
                   "--records", str(rec), "--truth", str(tru))[0] == EXIT_OK
        assert run(capsys, "detect", str(rec), "--out", str(flags))[0] == EXIT_OK
        return rec, tru, flags

    def test_full_report_set(self, capsys, tmp_path, repo_root):
        _, tru, flags = self.make_flags(capsys, tmp_path, repo_root)
        out_dir = tmp_path / "reports"
        code, _, _ = run(capsys, "evaluate", str(flags), "--truth", str(tru),
                         "--out-dir", str(out_dir))
        assert code == EXIT_OK
        names = sorted(p.name for p in out_dir.iterdir())
        assert names == ["daily.csv", "hourly.csv", "score.csv", "summary.csv"]

    def test_score_omitted_without_truth(self, capsys, tmp_path, repo_root):
        _, _, flags = self.make_flags(capsys, tmp_path, repo_root)
        out_dir = tmp_path / "reports"
        code, _, _ = run(capsys, "evaluate", str(flags), "--out-dir", str(out_dir))
        assert code == EXIT_OK
        assert not (out_dir / "score.csv").exists()
        assert (out_dir / "summary.csv").exists()

    def test_daily_sums_to_summary(self, capsys, tmp_path, repo_root):
        _, _, flags = self.make_flags(capsys, tmp_path, repo_root)
        out_dir = tmp_path / "reports"
        run(capsys, "evaluate", str(flags), "--out-dir", str(out_dir))
        daily = (out_dir / "daily.csv").read_text().splitlines()[1:]
        summary = (out_dir / "summary.csv").read_text().splitlines()[1:]
        daily_sums = {}
        for line in daily:
            _, method, count, unit = line.split(",")
            if unit == "sat-epoch":
                daily_sums[method] = daily_sums.get(method, 0) + int(count)
        for line in summary:
            method, flagged, _, _ = line.split(",")
            assert daily_sums.get(method, 0) == int(flagged)

    def test_schema_mismatch_exits_4_naming_column(self, capsys, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("epoch_time,sat,max_db,mean_db,raw_max,mean_flag,"
                       "wrongname,simul,persist,proposed,cause\n")
        code, _, err = run(capsys, "evaluate", str(bad))
        assert code == EXIT_SCHEMA
        assert "kurtosis_flag" in err


class TestGeom:
    def headline_numbers(self, out):
        numbers = {}
        for line in out.splitlines():
            if line.startswith("# headline:"):
                for key, value in re.findall(r"(\S+)=([-\d.]+)", line):
                    numbers[key] = float(value)
        return numbers

    def test_default_headline_values(self, capsys):
        code, out, _ = run(capsys, "geom")
        assert code == EXIT_OK
        numbers = self.headline_numbers(out)
        assert numbers["slant(10s)"] == pytest.approx(504.9, abs=0.1)
        assert numbers["fspl_delta(10s)"] == pytest.approx(0.085, abs=0.001)
        assert numbers["halfpower_slant"] == pytest.approx(707.0, abs=1.0)
        assert numbers["halfpower_horizontal"] == pytest.approx(500.0, abs=1.0)
        assert numbers["halfpower_transit"] == pytest.approx(71.0, abs=1.0)

    def test_altitude_recomputes_headline(self, capsys):
        _, out_500, _ = run(capsys, "geom")
        _, out_510, _ = run(capsys, "geom", "--altitude", "510")
        n500 = self.headline_numbers(out_500)
        n510 = self.headline_numbers(out_510)
        assert n510["slant(10s)"] != n500["slant(10s)"]
        assert n510["slant(10s)"] == pytest.approx((510.0**2 + 70.0**2) ** 0.5, abs=0.01)

    def test_range_zero_single_row(self, capsys):
        code, out, _ = run(capsys, "geom", "--range", "0")
        rows = [l for l in out.splitlines() if not l.startswith("#")]
        assert rows[0] == "dt_s,slant_km,fspl_delta_db"
        assert len(rows) == 2
        assert rows[1] == "0.0,500.000,0.0000"


class TestDdm:
    def test_synth_info_round_trip(self, capsys, tmp_path):
        out_path = tmp_path / "grid.ddm"
        code, out, _ = run(capsys, "ddm", "synth", "--out", str(out_path),
                           "--seed", "5", "--roughness", "0.4")
        assert code == EXIT_OK
        match = re.search(r"noise floor ([-\d.]+) dB", out)
        assert match
        synth_floor = float(match.group(1))
        code, out, _ = run(capsys, "ddm", "info", str(out_path))
        assert code == EXIT_OK
        match = re.search(r"= ([-\d.]+) dB", out)
        assert float(match.group(1)) == pytest.approx(synth_floor, abs=1e-3)

    def test_synth_deterministic(self, capsys, tmp_path):
        a, b = tmp_path / "a.ddm", tmp_path / "b.ddm"
        run(capsys, "ddm", "synth", "--out", str(a), "--seed", "7")
        run(capsys, "ddm", "synth", "--out", str(b), "--seed", "7")
        assert a.read_bytes() == b.read_bytes()

    def test_jammer_stripe_raises_floor(self, capsys, tmp_path):
        clean, jammed = tmp_path / "c.ddm", tmp_path / "j.ddm"
        run(capsys, "ddm", "synth", "--out", str(clean), "--seed", "3")
        run(capsys, "ddm", "synth", "--out", str(jammed), "--seed", "3",
            "--jammer-col", "5", "--jammer-counts", "50000")
        from ddmrfi.ddm import ddm_from_text, noise_floor

        floor_clean = noise_floor(ddm_from_text(clean.read_text()))
        floor_jam = noise_floor(ddm_from_text(jammed.read_text()))
        assert floor_jam > floor_clean
