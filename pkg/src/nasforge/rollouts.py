"""Rollouts: the value objects passed between controller, weights manager and evaluator.

A discrete rollout carries a genotype (tuple of integer decisions), an
optional handle to an assembled candidate network, and a perf mapping that
the evaluator fills ("reward" appears only after evaluation).  A
differentiable rollout carries per-decision logits; it only participates in
search after discretization.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import NasforgeError
from .nn.losses import softmax


@dataclass
class DiscreteRollout:
    genotype: tuple
    candidate: object = None
    perf: dict = field(default_factory=dict)

    def __post_init__(self):
        self.genotype = tuple(int(v) for v in self.genotype)

    @property
    def reward(self):
        if "reward" not in self.perf:
            raise NasforgeError("rollout has not been evaluated (no reward)")
        return self.perf["reward"]

    def copy_unevaluated(self):
        return DiscreteRollout(self.genotype)


class DifferentiableRollout:
    """Per-decision logits; probs are derived by softmax, never stored."""

    def __init__(self, logits):
        self.logits = [np.asarray(row, dtype=np.float64) for row in logits]
        for i, row in enumerate(self.logits):
            if row.ndim != 1 or row.size == 0:
                raise NasforgeError(f"logits row {i} must be a non-empty vector")

    @property
    def probs(self):
        return [softmax(row) for row in self.logits]

    def __len__(self):
        return len(self.logits)


def discretize(rollout):
    """argmax of each probs row; ties break to the lowest index."""
    genotype = tuple(int(np.argmax(p)) for p in rollout.probs)
    return DiscreteRollout(genotype)
