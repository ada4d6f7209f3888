"""
Pipelines package for the amd_asr command line.

Contains orchestration logic for each command:
- Corpus generation
- Training (fresh or resumed)
- Decoding a split into JSON-lines records
- Benchmarking systems and sweeping beam sizes
"""

from pipelines.common import check_vocab, finish_run, load_inputs, select_split
from pipelines.gen_pipeline import run_gen
from pipelines.train_pipeline import run_train
from pipelines.decode_pipeline import run_decode
from pipelines.bench_pipeline import run_analyze, run_bench

__all__ = [
    # Shared
    "check_vocab",
    "finish_run",
    "load_inputs",
    "select_split",
    # Commands
    "run_gen",
    "run_train",
    "run_decode",
    "run_bench",
    "run_analyze",
]
