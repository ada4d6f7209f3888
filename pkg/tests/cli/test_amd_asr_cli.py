"""Tests for the amd_asr command line - argument parsing, config resolution and exit codes."""

import os
import subprocess
import sys
from pathlib import Path

import pytest

from cli.main import build_parser, collect_overrides, resolve_config
from schemas.decode_schema import FusionWeights, SchedulePlan

REPO_ROOT = Path(__file__).resolve().parents[2]


def run_cli(*args: str, tmp_path: Path) -> subprocess.CompletedProcess:
    env = {**os.environ, "AMD_LOG_FILE": str(tmp_path / "amd.log")}
    return subprocess.run(
        [sys.executable, "amd_asr.py", *args],
        capture_output=True,
        text=True,
        cwd=REPO_ROOT,
        env=env,
    )


class TestHelp:
    """Tests for --help output."""

    def test_help_flag(self, tmp_path):
        """Should display help without error."""
        result = run_cli("--help", tmp_path=tmp_path)
        assert result.returncode == 0
        assert "Train and decode a CTC + AR + attention-mask-decoder speech recognizer" in result.stdout
        for command in ("gen", "train", "decode", "bench", "analyze"):
            assert command in result.stdout

    def test_decode_help(self, tmp_path):
        """Should list the decoding flags."""
        result = run_cli("decode", "--help", tmp_path=tmp_path)
        assert result.returncode == 0
        for flag in ("--mode", "--schedule", "--k-amd", "--k-main", "--lambdas", "--corpus", "--checkpoint"):
            assert flag in result.stdout


class TestExitCodes:
    """Tests for the exit-code contract."""

    def test_missing_command(self, tmp_path):
        """Should fail with the validation code without a subcommand."""
        assert run_cli(tmp_path=tmp_path).returncode == 1

    def test_bad_schedule(self, tmp_path):
        """Should reject a malformed schedule with exit code 1."""
        result = run_cli(
            "decode", "--corpus", str(tmp_path), "--checkpoint", str(tmp_path), "--schedule", "blocks:3",
            tmp_path=tmp_path,
        )
        assert result.returncode == 1
        assert "schedule" in result.stderr

    def test_missing_corpus(self, tmp_path):
        """Should exit with 2 when the corpus file does not exist."""
        result = run_cli(
            "decode", "--corpus", str(tmp_path / "none"), "--checkpoint", str(tmp_path), "--out", str(tmp_path / "out"),
            tmp_path=tmp_path,
        )
        assert result.returncode == 2

    def test_invalid_length_range(self, tmp_path):
        """Should exit with 1 for an empty transcript length range."""
        config = tmp_path / "run.env"
        config.write_text("AMD_CORPUS__MIN_LENGTH=9\nAMD_CORPUS__MAX_LENGTH=3\n", encoding="utf-8")
        result = run_cli("gen", "--config", str(config), "--out", str(tmp_path / "out"), tmp_path=tmp_path)
        assert result.returncode == 1
        assert not (tmp_path / "out" / "corpus.amdc").exists()

    def test_gen_succeeds(self, tmp_path):
        """Should write a corpus and exit 0."""
        result = run_cli("gen", "--seed", "1", "--utterances", "4", "--out", str(tmp_path / "out"), tmp_path=tmp_path)
        assert result.returncode == 0
        assert (tmp_path / "out" / "corpus.amdc").exists()
        assert (tmp_path / "out" / "manifest.json").exists()


class TestOverrides:
    """Tests for collect_overrides and resolve_config."""

    def test_only_given_flags(self):
        """Should leave unset flags out of the overrides."""
        args = build_parser().parse_args(["gen", "--seed", "5"])
        assert collect_overrides(args) == {"seed": 5}

    def test_decode_flags(self):
        """Should nest decode and bench flags under their sections."""
        args = build_parser().parse_args(
            ["decode", "--corpus", "c", "--checkpoint", "m", "--schedule", "mixed:10-2", "--k-amd", "3",
             "--split", "dev", "--workers", "2"]
        )
        overrides = collect_overrides(args)
        assert overrides["decode"] == {"schedule": "mixed:10-2", "k_amd": 3}
        assert overrides["bench"] == {"split": "dev", "workers": 2}

    def test_lambdas_follow_mode(self):
        """Should read three lambdas for amd and two for the CTC+AR modes."""
        args = build_parser().parse_args(
            ["decode", "--corpus", "c", "--checkpoint", "m", "--mode", "amd", "--lambdas", "0.2,0.2,0.6"]
        )
        config = resolve_config(args)
        assert config.decode.weights == FusionWeights(lambda_ctc=0.2, lambda_amd=0.2, lambda_ar=0.6)

        args = build_parser().parse_args(
            ["decode", "--corpus", "c", "--checkpoint", "m", "--mode", "beam-ctc-ar", "--lambdas", "0.5,0.5"]
        )
        assert resolve_config(args).decode.weights == FusionWeights(lambda_ctc=0.5, lambda_amd=0.0, lambda_ar=0.5)

    def test_lambdas_wrong_arity(self):
        """Should reject two lambdas for the amd mode."""
        args = build_parser().parse_args(
            ["decode", "--corpus", "c", "--checkpoint", "m", "--mode", "amd", "--lambdas", "0.5,0.5"]
        )
        with pytest.raises(ValueError):
            resolve_config(args)

    def test_flags_override_file(self, tmp_path):
        """Should prefer flags over config-file values."""
        config_file = tmp_path / "run.env"
        config_file.write_text("AMD_DECODE__SCHEDULE=fixed:4\nAMD_SEED=2\n", encoding="utf-8")
        args = build_parser().parse_args(
            ["decode", "--config", str(config_file), "--corpus", "c", "--checkpoint", "m", "--schedule", "fixed:1"]
        )
        config = resolve_config(args)
        assert config.decode.schedule == SchedulePlan(kind="fixed", block_size=1)
        assert config.seed == 2
