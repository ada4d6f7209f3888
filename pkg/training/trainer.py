"""
Training loop for the tripartite model.

Each epoch shuffles the training split, takes one optimizer step per batch,
evaluates greedy CTC+AR decoding on a dev subset and appends one metrics line.
With a run directory the checkpoint and a resumable train state are written
after every epoch.
"""

import logging
import math
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import editdistance

from exceptions import EmptyInputError, TrainingDivergedError
from model.checkpoint import load_checkpoint, read_container, save_checkpoint, write_container
from model.params import ModelParams
from schemas.corpus_schema import Corpus, Utterance
from schemas.decode_schema import DecodeSystem, FusionWeights
from schemas.records_io import append_jsonl
from schemas.train_schema import EpochMetrics, TrainConfig
from search.decode import decode_tokens
from tensor_core import backward
from training.losses import batch_loss
from training.optimizer import Adam, learning_rate
from utils.paths import get_checkpoint_path, get_metrics_path, get_train_state_path
from utils.rng import BLOCKS_STREAM, SHUFFLE_STREAM, named_rng, restore_rng, rng_state

logger = logging.getLogger(__name__)

DEV_SYSTEM = DecodeSystem(name="dev_greedy", mode="greedy-ar", weights=FusionWeights.baseline())


@dataclass
class TrainResult:
    """
    Attributes:
        params: Parameters after the last epoch.
        metrics: One entry per epoch run in this call (resumed epochs excluded).
    """

    params: ModelParams
    metrics: list[EpochMetrics] = field(default_factory=list)


def dev_token_error_rate(params: ModelParams, utterances: list[Utterance]) -> Optional[float]:
    """Total edit errors over total reference tokens under greedy CTC+AR decoding."""
    if not utterances:
        return None
    errors = 0
    ref_tokens = 0
    for utterance in utterances:
        hypothesis = decode_tokens(params, utterance.features, DEV_SYSTEM)
        errors += editdistance.eval(list(utterance.transcript), hypothesis)
        ref_tokens += len(utterance.transcript)
    return errors / max(ref_tokens, 1)


def _save_state(run_dir: Path, params: ModelParams, optimizer: Adam, epoch: int, rngs: dict) -> None:
    save_checkpoint(params, get_checkpoint_path(run_dir), meta={"epoch": epoch, "step": optimizer.step_count})
    write_container(
        get_train_state_path(run_dir),
        "train_state",
        optimizer.state_tensors(),
        {
            "epoch": epoch,
            "optimizer": optimizer.state_header(),
            "rng": {name: rng_state(rng) for name, rng in rngs.items()},
        },
    )


def train(
    config: TrainConfig,
    corpus: Corpus,
    params: ModelParams,
    run_dir: Optional[Path] = None,
    resume: bool = False,
) -> TrainResult:
    """
    Optimise params on the corpus training split.

    Args:
        config: Optimisation settings; config.seed roots the block-sampling
            and shuffle streams.
        corpus: Corpus with a non-empty training split.
        params: Starting parameters (ignored when resuming from run_dir).
        run_dir: Where the checkpoint, train state and metrics log live.
        resume: Continue from the train state in run_dir.

    Returns:
        TrainResult with the final parameters and the new metrics lines.

    Raises:
        EmptyInputError: If the training split is empty.
        FileNotFoundError: If resume is set but no train state exists.
        TrainingDivergedError: If a batch loss is NaN or infinite.
    """
    train_set = corpus.train
    if not train_set:
        raise EmptyInputError("training split is empty")

    rngs = {
        BLOCKS_STREAM: named_rng(config.seed, BLOCKS_STREAM),
        SHUFFLE_STREAM: named_rng(config.seed, SHUFFLE_STREAM),
    }
    optimizer = Adam(params, config.beta1, config.beta2, config.adam_eps)
    first_epoch = 1

    if resume:
        if run_dir is None:
            raise ValueError("resume needs a run directory")
        state_path = get_train_state_path(run_dir)
        if not state_path.exists():
            raise FileNotFoundError(f"No train state to resume from at {state_path}")
        params = load_checkpoint(get_checkpoint_path(run_dir))
        header, tensors = read_container(state_path, "train_state")
        optimizer = Adam(params, config.beta1, config.beta2, config.adam_eps)
        optimizer.load_state(header["optimizer"], tensors)
        rngs = {name: restore_rng(state) for name, state in header["rng"].items()}
        first_epoch = int(header["epoch"]) + 1
        logger.info(f"Resuming training at epoch {first_epoch} (step {optimizer.step_count})")

    dev_subset = corpus.dev[: config.dev_eval_limit]
    n_batches = math.ceil(len(train_set) / config.batch_size)
    result = TrainResult(params=params)

    for epoch in range(first_epoch, config.epochs + 1):
        started = time.perf_counter()
        order = rngs[SHUFFLE_STREAM].permutation(len(train_set))
        sums = {"loss": 0.0, "ctc": 0.0, "ar": 0.0, "amd": 0.0}
        skipped = 0
        lr = 0.0

        for b in range(n_batches):
            batch = [train_set[i] for i in order[b * config.batch_size:(b + 1) * config.batch_size]]
            lr = learning_rate(optimizer.step_count + 1, config.peak_lr, config.warmup_steps)
            loss = batch_loss(params, batch, config.weights, rngs[BLOCKS_STREAM], config.n_block_samples)
            value = loss.total.item()
            if not math.isfinite(value):
                raise TrainingDivergedError(
                    f"loss became {value} at epoch {epoch}, batch {b + 1}/{n_batches} "
                    f"(step {optimizer.step_count + 1}, lr {lr:.3g})"
                )
            leaf_grads = backward(loss.total)
            grads = {leaf.name: g for leaf, g in leaf_grads.items() if leaf.name}
            params = optimizer.step(params, grads, lr)

            sums["loss"] += value
            sums["ctc"] += loss.ctc
            sums["ar"] += loss.ar
            sums["amd"] += loss.amd
            skipped += loss.skipped_infeasible
            logger.debug(f"[{b + 1}/{n_batches}] loss {value:.4f} lr {lr:.3g}")

        dev_ter = dev_token_error_rate(params, dev_subset)
        metrics = EpochMetrics(
            epoch=epoch,
            step=optimizer.step_count,
            loss=sums["loss"] / n_batches,
            ctc_loss=sums["ctc"] / n_batches,
            ar_loss=sums["ar"] / n_batches,
            amd_loss=sums["amd"] / n_batches,
            skipped_infeasible=skipped,
            learning_rate=lr,
            dev_token_error_rate=dev_ter,
            wall_time=time.perf_counter() - started,
        )
        result.metrics.append(metrics)
        dev_text = "n/a" if dev_ter is None else f"{dev_ter:.2%}"
        logger.info(
            f"[{epoch}/{config.epochs}] loss {metrics.loss:.4f} "
            f"(ctc {metrics.ctc_loss:.3f}, ar {metrics.ar_loss:.3f}, amd {metrics.amd_loss:.3f}) "
            f"dev TER {dev_text}"
        )
        if run_dir is not None:
            append_jsonl(metrics, get_metrics_path(run_dir))
            _save_state(Path(run_dir), params, optimizer, epoch, rngs)

    result.params = params
    return result
