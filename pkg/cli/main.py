"""
amd_asr command line.

Subcommands:
    gen      Generate the synthetic corpus
    train    Train the tripartite model (optionally resuming)
    decode   Decode a split into JSON-lines records
    bench    Benchmark decoding systems (WER, oracle, density, RTF, MAPSSWE)
    analyze  Sweep beam sizes 1..K for lattice density and oracle WER

Usage:
    python amd_asr.py gen --seed 7 --out runs/corpus
    python amd_asr.py train --corpus runs/corpus --out runs/model --gammas 0.4,0.3,0.3
    python amd_asr.py decode --corpus runs/corpus --checkpoint runs/model --out runs/dec \
        --mode amd --schedule mixed:10-2 --k-amd 10 --k-main 10 --lambdas 0.3,0.3,0.4

Exit codes: 0 success, 1 validation error, 2 I/O error, 3 numeric failure.
"""

import argparse
import asyncio
import logging
import sys
from pathlib import Path
from typing import Any, Optional

from dotenv import load_dotenv

from config import settings, setup_logging
from exceptions import EXIT_OK, EXIT_VALIDATION, exit_code_for
from pipelines import run_analyze, run_bench, run_decode, run_gen, run_train
from schemas.decode_schema import FusionWeights, SchedulePlan
from schemas.run_config import RunConfig
from schemas.train_schema import LossWeights
from utils.config_loader import load_run_config

logger = logging.getLogger(__name__)

DECODE_MODES = ["greedy-ar", "beam-ctc-ar", "amd", "ctc"]


class _Parser(argparse.ArgumentParser):
    """ArgumentParser whose usage errors exit with the validation code."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_VALIDATION, f"{self.prog}: error: {message}\n")


def _schedule(text: str) -> str:
    try:
        SchedulePlan.parse(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e))
    return text


def _gammas(text: str) -> LossWeights:
    try:
        return LossWeights.parse(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e))


def _set(overrides: dict[str, Any], path: str, value: Any) -> None:
    """Set a dotted key in a nested override dict, skipping unset flags."""
    if value is None:
        return
    keys = path.split(".")
    node = overrides
    for key in keys[:-1]:
        node = node.setdefault(key, {})
    node[keys[-1]] = value


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", type=str, help="Dotenv config file with AMD_ keys (flags override it)")
    parser.add_argument("--seed", type=int, help="Root seed of every random stream")
    parser.add_argument("--out", type=str, help="Run directory for outputs (default: <runs_dir>/<command>)")


def _add_inputs(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--corpus", type=str, required=True, help="Corpus file or the run directory holding it")
    parser.add_argument("--checkpoint", type=str, required=True, help="Checkpoint file or the run directory holding it")


def _add_eval(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--split", choices=["train", "dev", "test"], help="Split to decode (default: test)")
    parser.add_argument("--limit", type=int, help="Decode at most this many utterances")
    parser.add_argument("--workers", type=int, help="Utterances decoded concurrently (default: 1)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="amd_asr",
        description="Train and decode a CTC + AR + attention-mask-decoder speech recognizer",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    gen = commands.add_parser("gen", help="Generate the synthetic corpus")
    _add_common(gen)
    gen.add_argument("--utterances", type=int, help="Total number of utterances")

    train = commands.add_parser("train", help="Train the tripartite model")
    _add_common(train)
    train.add_argument("--corpus", type=str, required=True, help="Corpus file or the run directory holding it")
    train.add_argument("--gammas", type=_gammas, help="Loss weights ctc,ar,amd (default: 0.4,0.3,0.3)")
    train.add_argument("--epochs", type=int, help="Number of epochs")
    train.add_argument("--resume", action="store_true", default=False, help="Continue from the train state in --out")

    decode = commands.add_parser("decode", help="Decode a split into JSON-lines records")
    _add_common(decode)
    _add_inputs(decode)
    _add_eval(decode)
    decode.add_argument("--mode", choices=DECODE_MODES, help="Decoding strategy")
    decode.add_argument("--schedule", type=_schedule, help="AMD block schedule: fixed:B or mixed:N-B")
    decode.add_argument("--k-amd", type=int, help="In-block pruning width")
    decode.add_argument("--k-main", type=int, help="Beam width after each block")
    decode.add_argument("--beam", type=int, help="Beam width of the CTC+AR search")
    decode.add_argument("--lambdas", type=str, help="Fusion weights: ctc,ar (CTC+AR modes) or ctc,amd,ar (amd)")
    decode.add_argument("--ar-per-slot", action="store_true", default=None, help="Score AR after every slot")

    bench = commands.add_parser("bench", help="Benchmark decoding systems")
    _add_common(bench)
    _add_inputs(bench)
    _add_eval(bench)
    bench.add_argument("--repetitions", type=int, help="Timed runs per system (median reported)")

    analyze = commands.add_parser("analyze", help="Sweep beam sizes for lattice density and oracle WER")
    _add_common(analyze)
    _add_inputs(analyze)
    _add_eval(analyze)
    analyze.add_argument("--k-max", type=int, help="Largest beam size of the sweep (default: 20)")

    return parser


def collect_overrides(args: argparse.Namespace) -> dict[str, Any]:
    """Nested RunConfig overrides from the flags that were given."""
    overrides: dict[str, Any] = {}
    _set(overrides, "seed", args.seed)
    get = vars(args).get

    _set(overrides, "corpus.utterance_count", get("utterances"))
    if get("gammas") is not None:
        _set(overrides, "train.weights", args.gammas.model_dump())
    _set(overrides, "train.epochs", get("epochs"))

    _set(overrides, "decode.mode", get("mode"))
    _set(overrides, "decode.schedule", get("schedule"))
    _set(overrides, "decode.k_amd", get("k_amd"))
    _set(overrides, "decode.k_main", get("k_main"))
    _set(overrides, "decode.beam", get("beam"))
    _set(overrides, "decode.ar_per_slot", get("ar_per_slot"))

    _set(overrides, "bench.split", get("split"))
    _set(overrides, "bench.limit", get("limit"))
    _set(overrides, "bench.workers", get("workers"))
    _set(overrides, "bench.repetitions", get("repetitions"))
    _set(overrides, "bench.sweep_k_max", get("k_max"))
    return overrides


def resolve_config(args: argparse.Namespace) -> RunConfig:
    """
    Load the config file and apply flag overrides.

    --lambdas depends on the effective decode mode, so it is parsed after a
    first resolution and applied in a second one.
    """
    overrides = collect_overrides(args)
    config = load_run_config(args.config, overrides)
    lambdas: Optional[str] = getattr(args, "lambdas", None)
    if lambdas is not None:
        weights = FusionWeights.parse(lambdas, config.decode.mode)
        _set(overrides, "decode.weights", weights.model_dump())
        config = load_run_config(args.config, overrides)
    return config


def run_command(args: argparse.Namespace, config: RunConfig) -> None:
    out_dir = Path(args.out) if args.out else settings.runs_dir / args.command
    if args.command == "gen":
        run_gen(config, out_dir)
    elif args.command == "train":
        run_train(config, Path(args.corpus), out_dir, resume=args.resume)
    elif args.command == "decode":
        asyncio.run(run_decode(config, Path(args.corpus), Path(args.checkpoint), out_dir))
    elif args.command == "bench":
        asyncio.run(run_bench(config, Path(args.corpus), Path(args.checkpoint), out_dir))
    elif args.command == "analyze":
        asyncio.run(run_analyze(config, Path(args.corpus), Path(args.checkpoint), out_dir))


def main(argv: Optional[list[str]] = None) -> int:
    load_dotenv()
    setup_logging(level=settings.log_level)

    args = build_parser().parse_args(argv)
    try:
        config = resolve_config(args)
        logger.info(f"Running {args.command} with seed {config.seed}")
        run_command(args, config)
    except Exception as e:
        code = exit_code_for(e)
        logger.error(f"{args.command} failed ({type(e).__name__}): {e}")
        return code
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
