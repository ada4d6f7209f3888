"""
Benchmarking of decoding systems and the beam-size sweep of lattice density
and oracle WER.
"""

import logging
import statistics
import time
from dataclasses import dataclass, field
from typing import Sequence

from evaluation.metrics import corpus_lattice_density, corpus_oracle_wer
from evaluation.significance import mapsswe
from exceptions import EmptyInputError
from model.params import ModelParams
from schemas.bench_schema import BenchConfig, BenchReport, PairwiseSignificance, SweepRow, SystemReport
from schemas.corpus_schema import Utterance
from schemas.decode_schema import DecodeRecord, DecodeSystem, FusionWeights
from search.decode import decode_split

logger = logging.getLogger(__name__)


@dataclass
class BenchResult:
    """
    Attributes:
        report: Aggregates and significance tests.
        records: Decode records of the first repetition, by system name.
    """

    report: BenchReport
    records: dict[str, list[DecodeRecord]] = field(default_factory=dict)


def real_time_factor(decode_seconds: float, audio_seconds: float) -> float:
    """Decode wall time over audio duration."""
    if audio_seconds <= 0:
        raise EmptyInputError("real time factor needs a positive audio duration")
    return decode_seconds / audio_seconds


def summarize_system(system: DecodeSystem, records: Sequence[DecodeRecord], decode_seconds: float) -> SystemReport:
    """Aggregate one system's records over the split."""
    errors = sum(r.errors for r in records)
    reference_tokens = sum(len(r.reference) for r in records)
    audio_seconds = sum(r.duration_seconds for r in records)
    return SystemReport(
        name=system.name,
        description=system.describe(),
        wer=errors / reference_tokens,
        errors=errors,
        reference_tokens=reference_tokens,
        oracle_wer=corpus_oracle_wer(records),
        lattice_density=corpus_lattice_density(records),
        decode_seconds=decode_seconds,
        audio_seconds=audio_seconds,
        rtf=real_time_factor(decode_seconds, audio_seconds),
        amd_calls=sum(r.amd_calls for r in records),
        ar_calls=sum(r.ar_calls for r in records),
        segment_errors=[r.errors for r in records],
    )


async def benchmark(
    params: ModelParams,
    utterances: Sequence[Utterance],
    config: BenchConfig,
    split_name: str = "test",
) -> BenchResult:
    """
    Run every configured system over the utterances.

    Each system is decoded `config.repetitions` times; the median wall time
    is reported. Error fields come from the first repetition and are expected
    to be identical across repetitions.

    Args:
        params: Trained model.
        utterances: Split to decode.
        config: Systems, baseline, repetitions, significance level and workers.
        split_name: Name of the split, recorded in the report.

    Returns:
        BenchResult with the report and the decode records.

    Raises:
        EmptyInputError: If there are no utterances.
    """
    if not utterances:
        raise EmptyInputError("benchmark needs at least one utterance")

    records_by_system: dict[str, list[DecodeRecord]] = {}
    reports: list[SystemReport] = []
    for n, system in enumerate(config.systems, 1):
        logger.info(f"[{n}/{len(config.systems)}] Benchmarking {system.describe()}")
        timings: list[float] = []
        first: list[DecodeRecord] = []
        for rep in range(config.repetitions):
            started = time.perf_counter()
            records = await decode_split(params, utterances, system, config.workers)
            timings.append(time.perf_counter() - started)
            if rep == 0:
                first = records
            elif [r.hypothesis for r in records] != [r.hypothesis for r in first]:
                logger.warning(f"{system.name}: hypotheses changed between repetitions 1 and {rep + 1}")
        records_by_system[system.name] = first
        reports.append(summarize_system(system, first, statistics.median(timings)))

    baseline = next(r for r in reports if r.name == config.baseline)
    for entry in reports:
        entry.speedup = baseline.decode_seconds / entry.decode_seconds if entry.decode_seconds > 0 else 1.0

    pairwise: list[PairwiseSignificance] = []
    if len(utterances) < 2:
        logger.warning("Fewer than 2 utterances, skipping significance tests")
    else:
        for entry in reports:
            if entry.name == baseline.name:
                continue
            z, significant = mapsswe(entry.segment_errors, baseline.segment_errors, config.alpha)
            pairwise.append(
                PairwiseSignificance(
                    system=entry.name, baseline=baseline.name, z=z, significant=significant, alpha=config.alpha
                )
            )

    report = BenchReport(
        split=split_name,
        utterances=len(utterances),
        workers=config.workers,
        repetitions=config.repetitions,
        baseline=config.baseline,
        systems=reports,
        pairwise=pairwise,
    )
    return BenchResult(report=report, records=records_by_system)


def sweep_systems(k: int, block_sizes: Sequence[int]) -> list[DecodeSystem]:
    """CTC+AR beam search with beam k, and AMD Fixed(B) with K_AMD = K_main = k."""
    systems = [
        DecodeSystem(name="ctc_ar_beam", mode="beam-ctc-ar", beam=k, weights=FusionWeights.baseline())
    ]
    for block_size in block_sizes:
        systems.append(
            DecodeSystem(name=f"amd_fixed_{block_size}", mode="amd", schedule=f"fixed:{block_size}", k_amd=k, k_main=k)
        )
    return systems


async def sweep(
    params: ModelParams,
    utterances: Sequence[Utterance],
    config: BenchConfig,
) -> list[SweepRow]:
    """
    Lattice density and oracle WER for beam sizes 1..config.sweep_k_max.

    Returns:
        One row per (system, K), ordered by system then K.

    Raises:
        EmptyInputError: If there are no utterances.
    """
    if not utterances:
        raise EmptyInputError("sweep needs at least one utterance")
    rows: list[SweepRow] = []
    for k in range(1, config.sweep_k_max + 1):
        logger.info(f"[{k}/{config.sweep_k_max}] Sweeping beam size {k}")
        for system in sweep_systems(k, config.sweep_block_sizes):
            records = await decode_split(params, utterances, system, config.workers)
            rows.append(
                SweepRow(
                    system=system.name,
                    K=k,
                    density=corpus_lattice_density(records),
                    oracle_wer=corpus_oracle_wer(records),
                )
            )
    rows.sort(key=lambda r: (r.system, r.K))
    return rows
