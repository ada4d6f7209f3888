"""
Benchmark and analysis pipelines.

bench runs the configured systems and writes the report as JSON and CSV;
analyze runs the beam-size sweep and writes its CSV.
"""

import logging
from pathlib import Path

from evaluation.benchmark import BenchResult, benchmark, sweep
from evaluation.reporting import print_summary_table, write_bench_report, write_sweep_csv
from pipelines.common import finish_run, load_inputs, select_split
from schemas.bench_schema import SweepRow
from schemas.run_config import RunConfig
from utils.paths import ensure_output_dir, get_bench_paths, get_checkpoint_path, get_corpus_path, get_sweep_path

logger = logging.getLogger(__name__)


def _inputs(corpus_path: Path, checkpoint_path: Path) -> list[Path]:
    return [get_corpus_path(Path(corpus_path)), get_checkpoint_path(Path(checkpoint_path))]


async def run_bench(config: RunConfig, corpus_path: Path, checkpoint_path: Path, out_dir: Path) -> BenchResult:
    """
    Benchmark `config.bench.systems` on `config.bench.split`.

    Returns:
        BenchResult with the report and per-system decode records.
    """
    corpus, params = load_inputs(corpus_path, checkpoint_path)
    utterances = select_split(corpus, config.bench.split, config.bench.limit)
    out_dir = ensure_output_dir(Path(out_dir))

    result = await benchmark(params, utterances, config.bench, config.bench.split)
    json_path, csv_path = get_bench_paths(out_dir)
    write_bench_report(result.report, json_path, csv_path)
    print_summary_table(result.report)

    finish_run(out_dir, "bench", config, inputs=_inputs(corpus_path, checkpoint_path), outputs=[json_path, csv_path])
    return result


async def run_analyze(config: RunConfig, corpus_path: Path, checkpoint_path: Path, out_dir: Path) -> list[SweepRow]:
    """
    Sweep beam sizes 1..`config.bench.sweep_k_max` and write the density/oracle CSV.
    """
    corpus, params = load_inputs(corpus_path, checkpoint_path)
    utterances = select_split(corpus, config.bench.split, config.bench.limit)
    out_dir = ensure_output_dir(Path(out_dir))

    rows = await sweep(params, utterances, config.bench)
    sweep_path = get_sweep_path(out_dir)
    write_sweep_csv(rows, sweep_path)

    finish_run(out_dir, "analyze", config, inputs=_inputs(corpus_path, checkpoint_path), outputs=[sweep_path])
    return rows
