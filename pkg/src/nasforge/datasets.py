"""Synthetic regression data standing in for real datasets.

The task is y = sin(x @ W.T) with a fixed projection W drawn once from the
dataset's seed stream; it is smooth and learnable by every candidate in the
toy MLP space.  A held-out evaluation batch is generated at construction
and never changes, so candidate evaluation is deterministic within a
session.
"""

import numpy as np

from .config import Field
from .registry import ComponentKind, register


@register(ComponentKind.DATASET, "synthetic_regression")
class SyntheticRegressionDataset:
    CONFIG_FIELDS = (
        Field("input_dim", "int", 4, "input feature count"),
        Field("output_dim", "int", 1, "regression target count"),
        Field("train_batch_size", "int", 32, "per-step training batch"),
        Field("eval_batch_size", "int", 64, "fixed held-out batch"),
    )

    def __init__(self, input_dim, output_dim, train_batch_size, eval_batch_size, rng):
        self.input_dim = input_dim
        self.output_dim = output_dim
        self.train_batch_size = train_batch_size
        self.eval_batch_size = eval_batch_size
        self._rng = rng
        self.projection = rng.normal(0.0, 1.0 / np.sqrt(input_dim), size=(output_dim, input_dim))
        self._eval_batch = self._make_batch(eval_batch_size)

    @classmethod
    def from_config(cls, cfg, ctx):
        return cls(
            cfg["input_dim"],
            cfg["output_dim"],
            cfg["train_batch_size"],
            cfg["eval_batch_size"],
            ctx.rng(ComponentKind.DATASET),
        )

    def _make_batch(self, n):
        x = self._rng.normal(0.0, 1.0, size=(n, self.input_dim))
        y = np.sin(x @ self.projection.T)
        return x, y

    def train_batch(self):
        return self._make_batch(self.train_batch_size)

    def eval_batch(self):
        return self._eval_batch

    def rng_state(self):
        return self._rng.bit_generator.state

    def set_rng_state(self, state):
        self._rng.bit_generator.state = state
