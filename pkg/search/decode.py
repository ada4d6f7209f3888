"""
Run one DecodeSystem on one utterance, or on a whole split with bounded
utterance-level concurrency.
"""

import asyncio
import logging
import time
from typing import Sequence

import editdistance
import numpy as np

from ctc.greedy import ctc_greedy
from ctc.prefix_score import ctc_initial_state, ctc_prefix_extend, ctc_sequence_logprob
from exceptions import ContractViolation
from model.params import ModelParams
from model.vocab import render_tokens
from schemas.corpus_schema import Utterance
from schemas.decode_schema import DecodeRecord, DecodeSystem, NBestList
from search.amd_search import beam_search_amd
from search.ctc_ar_search import beam_search_ctc_ar, greedy_search_ctc_ar
from search.hypothesis import Hypothesis, to_scored
from search.scorers import DecoderScorer, ModelScorer

logger = logging.getLogger(__name__)


def ctc_only(scorer: DecoderScorer) -> NBestList:
    """Best-path CTC decoding; the score is the terminated CTC log-probability."""
    tokens = ctc_greedy(scorer.ctc_logprobs)
    state = ctc_initial_state(scorer.ctc_logprobs)
    for token in tokens:
        state, _ = ctc_prefix_extend(state, token, scorer.ctc_logprobs)
    h = Hypothesis(tokens=tuple(tokens), alpha_ctc=ctc_sequence_logprob(state), ended=True)
    return NBestList(hypotheses=[to_scored(h, h.alpha_ctc)])


def run_system(scorer: DecoderScorer, system: DecodeSystem) -> NBestList:
    """
    Dispatch on the system's mode.

    Raises:
        ContractViolation: On an unknown mode.
    """
    if system.mode == "ctc":
        return ctc_only(scorer)
    if system.mode == "greedy-ar":
        return greedy_search_ctc_ar(scorer, system.weights, system.max_len, system.length_bonus)
    if system.mode == "beam-ctc-ar":
        return beam_search_ctc_ar(
            scorer, system.beam, system.weights, system.max_len, system.nbest, system.length_bonus
        )
    if system.mode == "amd":
        return beam_search_amd(
            scorer, system.schedule, system.k_amd, system.k_main, system.weights, system.ar_per_slot, system.nbest
        )
    raise ContractViolation(f"unknown decode mode {system.mode!r}")


def decode_utterance(params: ModelParams, utterance: Utterance, system: DecodeSystem) -> DecodeRecord:
    """
    Encode and decode one utterance, timing the whole pass.

    Args:
        params: Model weights.
        utterance: Utterance to decode.
        system: Decoding configuration.

    Returns:
        DecodeRecord with the N-best, errors against the reference and call counts.
    """
    started = time.perf_counter()
    scorer = ModelScorer.from_features(params, utterance.features)
    nbest = run_system(scorer, system)
    elapsed = time.perf_counter() - started

    hypothesis = nbest.best_tokens()
    return DecodeRecord(
        utterance_id=utterance.id,
        system=system.name,
        reference=list(utterance.transcript),
        reference_text=render_tokens(utterance.transcript),
        hypothesis=hypothesis,
        hypothesis_text=render_tokens(hypothesis),
        nbest=nbest.hypotheses,
        errors=int(editdistance.eval(list(utterance.transcript), hypothesis)),
        decode_seconds=elapsed,
        duration_seconds=utterance.duration_seconds,
        amd_calls=scorer.amd_calls,
        ar_calls=scorer.ar_calls,
        empty_result=nbest.empty_result,
    )


def decode_tokens(params: ModelParams, features: np.ndarray, system: DecodeSystem) -> list[int]:
    """1-best tokens only, for quick evaluation loops."""
    scorer = ModelScorer.from_features(params, features)
    return run_system(scorer, system).best_tokens()


async def decode_split(
    params: ModelParams,
    utterances: Sequence[Utterance],
    system: DecodeSystem,
    workers: int = 1,
) -> list[DecodeRecord]:
    """
    Decode utterances with at most `workers` running at once.

    Args:
        params: Model weights.
        utterances: Utterances to decode.
        system: Decoding configuration.
        workers: Concurrency bound.

    Returns:
        One DecodeRecord per utterance, in input order.
    """
    total = len(utterances)
    sem = asyncio.Semaphore(max(1, workers))

    async def decode_one(i: int, utterance: Utterance) -> DecodeRecord:
        async with sem:
            record = await asyncio.to_thread(decode_utterance, params, utterance, system)
        logger.debug(f"[{i}/{total}] {system.name} {utterance.id}: {record.errors} errors")
        return record

    records = await asyncio.gather(*(decode_one(i, u) for i, u in enumerate(utterances, 1)))
    logger.info(f"Decoded {total} utterances with {system.describe()}")
    return list(records)
