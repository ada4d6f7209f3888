"""
Metrics and analysis: WER, oracle WER, lattice density, MAPSSWE significance,
real-time-factor benchmarking and the beam-size sweep.
"""

from evaluation.metrics import (
    ABSENT,
    WERResult,
    align,
    aligned_predictions,
    corpus_lattice_density,
    corpus_oracle_wer,
    lattice_density,
    oracle_errors,
    oracle_wer,
    token_error_rate,
    wer,
)
from evaluation.significance import SignificanceResult, critical_value, mapsswe
from evaluation.benchmark import BenchResult, benchmark, real_time_factor, summarize_system, sweep, sweep_systems
from evaluation.reporting import (
    print_summary_table,
    report_frame,
    write_bench_report,
    write_sweep_csv,
)

__all__ = [
    # Metrics
    "ABSENT",
    "WERResult",
    "align",
    "aligned_predictions",
    "corpus_lattice_density",
    "corpus_oracle_wer",
    "lattice_density",
    "oracle_errors",
    "oracle_wer",
    "token_error_rate",
    "wer",
    # Significance
    "SignificanceResult",
    "critical_value",
    "mapsswe",
    # Benchmark
    "BenchResult",
    "benchmark",
    "real_time_factor",
    "summarize_system",
    "sweep",
    "sweep_systems",
    # Reporting
    "print_summary_table",
    "report_frame",
    "write_bench_report",
    "write_sweep_csv",
]
