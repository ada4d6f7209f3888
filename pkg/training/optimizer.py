"""
Adam with an inverse-square-root warmup schedule.
"""

import logging
from typing import Any

import numpy as np

from model.params import ModelParams

logger = logging.getLogger(__name__)


def learning_rate(step: int, peak_lr: float, warmup_steps: int) -> float:
    """peak_lr * min(step / warmup, sqrt(warmup / step)); 0 before the first step."""
    if step < 1:
        return 0.0
    return peak_lr * min(step / warmup_steps, np.sqrt(warmup_steps / step))


class Adam:
    """
    Adaptive-moment optimizer over the trainable tensors of ModelParams.

    Params are never written in place: every step returns a new ModelParams.

    Attributes:
        beta1: First-moment decay.
        beta2: Second-moment decay.
        eps: Denominator stabiliser.
        step_count: Steps taken so far.
        m: First moments by parameter name.
        v: Second moments by parameter name.
    """

    def __init__(self, params: ModelParams, beta1: float = 0.9, beta2: float = 0.98, eps: float = 1e-9):
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self.step_count = 0
        self.m = {name: np.zeros(t.shape) for name, t in params.trainable().items()}
        self.v = {name: np.zeros(t.shape) for name, t in params.trainable().items()}

    def step(self, params: ModelParams, grads: dict[str, np.ndarray], lr: float) -> ModelParams:
        """
        Apply one update.

        Args:
            params: Current parameters.
            grads: Gradient per parameter name; missing names count as zero.
            lr: Learning rate of this step. With lr == 0 the parameters are
                returned unchanged bit for bit (moments still advance).

        Returns:
            Updated parameters.
        """
        self.step_count += 1
        t = self.step_count
        arrays = params.arrays()
        new_arrays = dict(arrays)
        for name in self.m:
            g = grads.get(name)
            if g is None:
                g = np.zeros_like(self.m[name])
            self.m[name] = self.beta1 * self.m[name] + (1.0 - self.beta1) * g
            self.v[name] = self.beta2 * self.v[name] + (1.0 - self.beta2) * g * g
            if lr == 0.0:
                continue
            m_hat = self.m[name] / (1.0 - self.beta1 ** t)
            v_hat = self.v[name] / (1.0 - self.beta2 ** t)
            new_arrays[name] = arrays[name] - lr * m_hat / (np.sqrt(v_hat) + self.eps)
        return ModelParams.from_arrays(params.config, new_arrays)

    def state_tensors(self) -> dict[str, np.ndarray]:
        """Moments keyed "m.<name>" and "v.<name>", for the train-state container."""
        tensors = {f"m.{name}": value for name, value in self.m.items()}
        tensors.update({f"v.{name}": value for name, value in self.v.items()})
        return tensors

    def state_header(self) -> dict[str, Any]:
        return {"step": self.step_count, "beta1": self.beta1, "beta2": self.beta2, "eps": self.eps}

    def load_state(self, header: dict[str, Any], tensors: dict[str, np.ndarray]) -> None:
        """
        Restore moments and the step counter.

        Raises:
            ValueError: If a moment is missing or has the wrong shape.
        """
        for name in self.m:
            for prefix, store in (("m", self.m), ("v", self.v)):
                key = f"{prefix}.{name}"
                if key not in tensors or tensors[key].shape != store[name].shape:
                    raise ValueError(f"train state lacks a valid {key}")
                store[name] = np.array(tensors[key], dtype=np.float64)
        self.step_count = int(header["step"])
        logger.info(f"Optimizer state restored at step {self.step_count}")
