"""
Training of the tripartite CTC + AR + AMD model.
"""

from training.losses import (
    BatchLoss,
    LossBreakdown,
    amd_loss,
    ar_loss,
    batch_loss,
    compute_losses,
    sample_block_sizes,
    tripartite_loss,
)
from training.optimizer import Adam, learning_rate
from training.trainer import TrainResult, dev_token_error_rate, train

__all__ = [
    # Losses
    "BatchLoss",
    "LossBreakdown",
    "amd_loss",
    "ar_loss",
    "batch_loss",
    "compute_losses",
    "sample_block_sizes",
    "tripartite_loss",
    # Optimisation
    "Adam",
    "learning_rate",
    # Loop
    "TrainResult",
    "dev_token_error_rate",
    "train",
]
