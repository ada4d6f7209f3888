"""
Reporting and output formatting for benchmark results.

Summary tables go to the log; the structured report is written as JSON and
as a flat CSV (one row per system), and the sweep as a CSV with columns
system, K, density, oracle_wer.
"""

import logging
from pathlib import Path
from typing import Sequence

import pandas as pd

from schemas.bench_schema import BenchReport, SweepRow

logger = logging.getLogger(__name__)

CSV_COLUMNS = [
    "name",
    "description",
    "wer",
    "oracle_wer",
    "lattice_density",
    "rtf",
    "speedup",
    "decode_seconds",
    "audio_seconds",
    "amd_calls",
    "ar_calls",
    "errors",
    "reference_tokens",
    "z",
    "significant",
]
SWEEP_COLUMNS = ["system", "K", "density", "oracle_wer"]


def report_frame(report: BenchReport) -> pd.DataFrame:
    """
    One row per system, with the MAPSSWE z and verdict against the baseline
    (empty for the baseline itself).
    """
    tests = {p.system: p for p in report.pairwise}
    rows = []
    for system in report.systems:
        row = system.model_dump(exclude={"segment_errors"})
        test = tests.get(system.name)
        row["z"] = test.z if test else None
        row["significant"] = test.significant if test else None
        rows.append(row)
    return pd.DataFrame(rows, columns=CSV_COLUMNS)


def write_bench_report(report: BenchReport, json_path: Path, csv_path: Path) -> None:
    """Write the report as indented JSON plus the flat CSV table."""
    json_path = Path(json_path)
    csv_path = Path(csv_path)
    json_path.parent.mkdir(parents=True, exist_ok=True)
    json_path.write_text(report.model_dump_json(indent=2), encoding="utf-8")
    report_frame(report).to_csv(csv_path, index=False)
    logger.info(f"Bench report saved to: {json_path} and {csv_path}")


def write_sweep_csv(rows: Sequence[SweepRow], path: Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame = pd.DataFrame([r.model_dump() for r in rows], columns=SWEEP_COLUMNS)
    frame.to_csv(path, index=False)
    logger.info(f"Sweep saved to: {path} ({len(frame)} rows)")


def print_summary_table(report: BenchReport) -> None:
    """
    Log a formatted table of the benchmark, one line per system.

    Example:
        ====================================================================================================
        BENCHMARK SUMMARY (test, 200 utterances, workers=1)
        ====================================================================================================
        System                    WER   Oracle  Density     RTF  Speed-up    AMD     AR        z
        ...
    """
    tests = {p.system: p for p in report.pairwise}

    logger.info("")
    logger.info("=" * 100)
    logger.info(f"BENCHMARK SUMMARY ({report.split}, {report.utterances} utterances, workers={report.workers})")
    logger.info("=" * 100)
    header = (
        f"{'System':<24} {'WER':>7} {'Oracle':>7} {'Density':>8} {'RTF':>8} "
        f"{'Speed-up':>9} {'AMD':>7} {'AR':>7} {'z':>9}"
    )
    logger.info(header)
    logger.info("-" * 100)

    for system in report.systems:
        display_name = system.name[:22] + ".." if len(system.name) > 24 else system.name
        test = tests.get(system.name)
        if test is None:
            z_text = "base"
        else:
            z_text = f"{test.z:.2f}{'*' if test.significant else ''}"
        logger.info(
            f"{display_name:<24} {system.wer:>7.2%} {system.oracle_wer:>7.2%} {system.lattice_density:>8.3f} "
            f"{system.rtf:>8.4f} {system.speedup:>8.2f}x {system.amd_calls:>7} {system.ar_calls:>7} {z_text:>9}"
        )

    logger.info("=" * 100)
    logger.info("")
    logger.info("Legend:")
    logger.info("  Oracle   - Error rate of the best N-best entry per utterance")
    logger.info("  Density  - Distinct aligned predictions per reference token")
    logger.info(f"  Speed-up - Decode time of {report.baseline} divided by the system's")
    logger.info(f"  z        - MAPSSWE statistic vs {report.baseline}; * marks significance at alpha={_alpha(report)}")
    logger.info("")


def _alpha(report: BenchReport) -> str:
    return f"{report.pairwise[0].alpha:g}" if report.pairwise else "n/a"
