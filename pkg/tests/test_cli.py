"""The command-line front end, run in-process through main()."""

import json
import shutil
import subprocess

import numpy as np
import pytest

from accenthmm.cli import main
from accenthmm.hmm import load_params


def run(capsys, *argv):
    rc = main(list(argv))
    captured = capsys.readouterr()
    return rc, captured.out, captured.err


class TestEncode:
    def test_one_vector_line_per_phone(self, capsys):
        rc, out, _ = run(capsys, "encode", "sneɪk")
        assert rc == 0
        assert len(out.splitlines()) == 4

    def test_affricate_counts_once(self, capsys):
        rc, out, _ = run(capsys, "encode", "tʃiz")
        assert rc == 0
        assert len(out.splitlines()) == 3

    def test_multiple_inputs_get_headers(self, capsys):
        rc, out, _ = run(capsys, "encode", "sneɪk", "tʃiz")
        assert rc == 0
        assert sum(line.startswith("# ") for line in out.splitlines()) == 2

    def test_unknown_symbol_fails_with_offset(self, capsys):
        rc, _, err = run(capsys, "encode", "sn@ke")
        assert rc == 1
        assert "'@'" in err and "byte 2" in err

    def test_empty_text_is_a_usage_error(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["encode", ""])
        assert exc.value.code == 2


class TestRecognize:
    def test_exact_word_wins(self, capsys):
        rc, out, _ = run(capsys, "recognize", "sneɪk")
        assert rc == 0
        text, ties, score = out.strip().split("\t")
        assert text == "sneɪk" and ties == "snake" and float(score) < 0

    def test_homophones_tie(self, capsys):
        rc, out, _ = run(capsys, "recognize", "ɹed")
        assert rc == 0
        assert set(out.strip().split("\t")[1].split("|")) == {"red", "read"}


class TestParams:
    def test_dump_then_load(self, capsys, tmp_path):
        snapshot = tmp_path / "naive.json"
        rc, _, _ = run(capsys, "params", "dump", "--params-out", str(snapshot))
        assert rc == 0 and snapshot.exists()
        rc, out, _ = run(capsys, "params", "load", "--params-in", str(snapshot))
        assert rc == 0
        assert "emission rows sum to 1 within 1e-9: yes" in out
        assert "space: 714 vectors" in out

    def test_round_trip_is_byte_identical(self, capsys, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        run(capsys, "params", "dump", "--params-out", str(a))
        run(capsys, "params", "dump", "--params-in", str(a), "--params-out", str(b))
        assert a.read_bytes() == b.read_bytes()

    def test_schema_mismatch_diagnosed(self, capsys, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text('{"format": "other"}', encoding="utf-8")
        rc, _, err = run(capsys, "params", "load", "--params-in", str(bad))
        assert rc == 1 and "format" in err

    def test_constants_validation(self, capsys, tmp_path):
        rc, _, err = run(
            capsys, "params", "dump", "--p-ins", "1.5",
            "--params-out", str(tmp_path / "x.json"),
        )
        assert rc == 1 and "p-ins" in err


class TestAdapt:
    def test_writes_snapshot_matching_reference(self, capsys, tmp_path, data_dir):
        snapshot = tmp_path / "adapted.json"
        rc, out, _ = run(
            capsys, "adapt",
            "--transcripts", str(data_dir / "transcripts" / "french8.tsv"),
            "--reference", str(data_dir / "reference_transformations.tsv"),
            "--params-out", str(snapshot),
        )
        assert rc == 0
        assert "french8: 35 training tokens" in out
        assert " NO" not in out  # every reference row matched
        assert snapshot.exists()

    def test_learned_emission_mass_moves(self, capsys, tmp_path, data_dir, symbols,
                                          naive_params):
        """After training on the French speaker, /ð/ emits [d] far more."""
        snapshot = tmp_path / "adapted.json"
        run(capsys, "adapt",
            "--transcripts", str(data_dir / "transcripts" / "french8.tsv"),
            "--params-out", str(snapshot))
        adapted = load_params(snapshot)
        eth = next(p for p in adapted.inventory if p.symbol == "ð")
        d = symbols.parse("d")[0].features
        assert adapted.emission_at(eth, d) > 20 * naive_params.emission_at(eth, d)
        assert adapted.emission_at(eth, d) > 0.1

    def test_transcripts_required(self, capsys, tmp_path):
        with pytest.raises(SystemExit) as exc:
            main(["adapt", "--params-out", str(tmp_path / "x.json")])
        assert exc.value.code == 2


@pytest.fixture(scope="module")
def french8_path(data_dir):
    return str(data_dir / "transcripts" / "french8.tsv")


class TestEvaluate:
    def test_writes_reports(self, capsys, tmp_path, french8_path):
        out_dir = tmp_path / "run"
        rc, out, _ = run(
            capsys, "evaluate", "--transcripts", french8_path,
            "--out-dir", str(out_dir),
        )
        assert rc == 0
        rates = (out_dir / "rates.csv").read_text(encoding="utf-8").splitlines()
        assert rates[0] == "speaker,group,condition,rate"
        assert rates[1] == "french8,B,before,64.7059"
        assert rates[2] == "french8,B,after,88.2353"
        report = (out_dir / "report.txt").read_text(encoding="utf-8")
        assert "french8 (group B): before 64.71" in report
        assert "ANOVA skipped" in report

    def test_reruns_are_byte_identical(self, capsys, tmp_path, french8_path):
        for name in ("one", "two"):
            rc, _, _ = run(
                capsys, "evaluate", "--transcripts", french8_path,
                "--out-dir", str(tmp_path / name),
            )
            assert rc == 0
        assert (tmp_path / "one" / "rates.csv").read_bytes() == (
            tmp_path / "two" / "rates.csv"
        ).read_bytes()
        assert (tmp_path / "one" / "report.txt").read_bytes() == (
            tmp_path / "two" / "report.txt"
        ).read_bytes()

    def test_missing_lexicon_names_the_path(self, capsys, tmp_path, french8_path):
        rc, _, err = run(
            capsys, "evaluate", "--transcripts", french8_path,
            "--lexicon", "/no/such/lexicon.tsv", "--out-dir", str(tmp_path),
        )
        assert rc == 1
        assert "/no/such/lexicon.tsv" in err

    def test_out_dir_from_environment(self, capsys, tmp_path, monkeypatch,
                                      french8_path):
        monkeypatch.setenv("ACCENTHMM_OUT_DIR", str(tmp_path / "from_env"))
        rc, _, _ = run(capsys, "evaluate", "--transcripts", french8_path)
        assert rc == 0
        assert (tmp_path / "from_env" / "rates.csv").exists()

    def test_config_file_supplies_options(self, capsys, tmp_path, french8_path):
        config = tmp_path / "run.json"
        config.write_text(
            json.dumps(
                {"transcripts": [french8_path], "out_dir": str(tmp_path / "cfg")}
            ),
            encoding="utf-8",
        )
        rc, _, _ = run(capsys, "evaluate", "--config", str(config))
        assert rc == 0
        assert (tmp_path / "cfg" / "rates.csv").exists()

    def test_flags_override_config(self, capsys, tmp_path, french8_path):
        config = tmp_path / "run.json"
        config.write_text(
            json.dumps(
                {"transcripts": [french8_path], "out_dir": str(tmp_path / "cfg")}
            ),
            encoding="utf-8",
        )
        rc, _, _ = run(
            capsys, "evaluate", "--config", str(config),
            "--out-dir", str(tmp_path / "flag"),
        )
        assert rc == 0
        assert (tmp_path / "flag" / "rates.csv").exists()
        assert not (tmp_path / "cfg").exists()

    def test_unknown_config_key_diagnosed(self, capsys, tmp_path):
        config = tmp_path / "bad.json"
        config.write_text('{"bogus": 1}', encoding="utf-8")
        rc, _, err = run(capsys, "evaluate", "--config", str(config))
        assert rc == 1 and "bogus" in err

    def test_parallel_run_matches_serial(self, capsys, tmp_path, data_dir):
        transcripts = [
            str(data_dir / "transcripts" / name)
            for name in ("french8.tsv", "english10.tsv")
        ]
        for out, jobs in (("serial", "1"), ("parallel", "2")):
            rc, _, _ = run(
                capsys, "evaluate",
                "--transcripts", transcripts[0], "--transcripts", transcripts[1],
                "--out-dir", str(tmp_path / out), "--jobs", jobs,
            )
            assert rc == 0
        assert (tmp_path / "serial" / "rates.csv").read_bytes() == (
            tmp_path / "parallel" / "rates.csv"
        ).read_bytes()


def test_console_script_installed():
    exe = shutil.which("accenthmm")
    assert exe, "accenthmm entry point not on PATH"
    done = subprocess.run(
        [exe, "encode", "sneɪk"], capture_output=True, text=True, timeout=60
    )
    assert done.returncode == 0
    assert len(done.stdout.splitlines()) == 4
