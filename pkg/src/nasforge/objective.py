"""Scalar reward from a perf mapping: weighted sum plus hard constraints."""

from .config import Field
from .registry import ComponentKind, register


@register(ComponentKind.OBJECTIVE, "weighted_sum")
class WeightedSumObjective:
    """reward = sum(coeff * perf[metric]) over metrics present in perf.

    Any present metric exceeding its hard upper bound forces the reward to
    the penalty value instead.
    """

    CONFIG_FIELDS = (
        Field("weights", "float_map", {"acc": 1.0}, "metric name -> coefficient"),
        Field("constraints", "float_map", {}, "metric name -> hard upper bound"),
        Field("penalty", "float", -1.0, "reward when a constraint is violated"),
    )

    def __init__(self, weights, constraints=None, penalty=-1.0):
        self.weights = dict(weights)
        self.constraints = dict(constraints or {})
        self.penalty = float(penalty)

    @classmethod
    def from_config(cls, cfg, ctx):
        return cls(cfg["weights"], cfg["constraints"], cfg["penalty"])

    def reward(self, perf):
        for metric, bound in self.constraints.items():
            if metric in perf and perf[metric] > bound:
                return self.penalty
        return float(
            sum(coeff * perf[m] for m, coeff in self.weights.items() if m in perf)
        )
