#!/usr/bin/env python
"""
AMD ASR CLI

Synthetic corpus generation, tripartite training, CTC+AR and attention-mask
decoding, benchmarking and lattice-density analysis.

Usage:
    python amd_asr.py gen --seed 7 --out runs/corpus
    python amd_asr.py train --corpus runs/corpus --out runs/model
    python amd_asr.py decode --corpus runs/corpus --checkpoint runs/model --out runs/decode \
        --mode beam-ctc-ar --beam 10 --lambdas 0.7,0.3
    python amd_asr.py bench --corpus runs/corpus --checkpoint runs/model --out runs/bench
    python amd_asr.py analyze --corpus runs/corpus --checkpoint runs/model --out runs/analyze
"""

import sys

from cli.main import main

if __name__ == "__main__":
    sys.exit(main())
