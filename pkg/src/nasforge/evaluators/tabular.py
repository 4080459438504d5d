"""Tabular oracle evaluation: file-backed tables or a synthetic scoring function.

Synthetic mode scores a genotype by its weighted Hamming distance to a
seed-derived optimum genotype, minus a small interaction term over adjacent
mismatches:

    base(g) = 1 - sum_i w_i * [g_i != opt_i] / sum_i w_i
    acc(g)  = clip(base(g) - delta * adj(g) / (L - 1), 0, 1)

where adj(g) counts adjacent positions that both mismatch, w_i ~ U(0.5, 1.5)
from the evaluator seed stream, and genotypes are canonicalized first.  The
optimum scores exactly 1.0 and is the unique maximum.
"""

import csv

import numpy as np

from ..config import Field
from ..errors import EvaluationError, NasforgeError
from ..registry import ComponentKind, register


@register(ComponentKind.WEIGHTS_MANAGER, "noop")
class NoopWeightsManager:
    """For evaluators that never touch weights (tabular oracles)."""

    CONFIG_FIELDS = ()

    def __init__(self, space):
        self.space = space

    @classmethod
    def from_config(cls, cfg, ctx):
        return cls(ctx.search_space)

    def assemble_candidate(self, rollout):
        self.space.validate(rollout.genotype)
        rollout.candidate = None
        return None

    def state_tensors(self):
        return []

    def load_state_tensors(self, tensors):
        pass


@register(ComponentKind.EVALUATOR, "tabular")
class TabularEvaluator:
    supports_concurrent_evaluation = True  # read-only after construction

    CONFIG_FIELDS = (
        Field("mode", "str", "synthetic", "scoring source", choices=("synthetic", "file")),
        Field("table_path", "str", "", "CSV path (file mode)"),
        Field("interaction_weight", "float", 0.05, "adjacent-mismatch penalty (synthetic)"),
        Field(
            "hardware_device",
            "str",
            "none",
            "add a hardware metric from a profiled device",
            choices=("none", "gpu_like", "fpga_like"),
        ),
        Field("hardware_seed", "int", 0, "device simulator seed"),
    )

    def __init__(
        self,
        space,
        objective,
        rng,
        mode="synthetic",
        table_path="",
        interaction_weight=0.05,
        hardware_device="none",
        hardware_seed=0,
    ):
        self.space = space
        self.objective = objective
        self.mode = mode
        self.interaction_weight = float(interaction_weight)
        if mode == "synthetic":
            self.optimum = space.canonicalize(space.random_genotype(rng))
            self.position_weights = rng.uniform(0.5, 1.5, size=space.num_decisions)
            self.table = None
        elif mode == "file":
            if not table_path:
                raise NasforgeError("file mode requires table_path")
            self.table = self._load_table(table_path)
            self.optimum = None
            self.position_weights = None
        else:
            raise NasforgeError(f"unknown tabular mode {mode!r}")
        self._hw = None
        if hardware_device != "none":
            from ..hwcost.profiling import profile_primitives
            from ..hwcost.simulator import DeviceSimulator

            device = DeviceSimulator(hardware_device, seed=hardware_seed)
            table = profile_primitives(space, device)  # raises for non-blockwise spaces
            self._hw = (device.metric, table)

    @classmethod
    def from_config(cls, cfg, ctx):
        return cls(
            ctx.search_space,
            ctx.objective,
            ctx.rng(ComponentKind.EVALUATOR),
            cfg["mode"],
            cfg["table_path"],
            cfg["interaction_weight"],
            cfg["hardware_device"],
            cfg["hardware_seed"],
        )

    def _load_table(self, path):
        table = {}
        try:
            with open(path, "r", encoding="utf-8", newline="") as fh:
                reader = csv.reader(fh)
                header = next(reader, None)
                if header != ["genotype", "accuracy"]:
                    raise NasforgeError(
                        f"{path}: expected header 'genotype,accuracy', got {header}"
                    )
                for row in reader:
                    if len(row) != 2:
                        raise NasforgeError(f"{path}: malformed row {row}")
                    genotype = self.space.canonicalize(self.space.parse_genotype(row[0]))
                    if genotype in table:
                        raise NasforgeError(f"{path}: duplicate genotype {row[0]!r}")
                    table[genotype] = float(row[1])
        except OSError as exc:
            raise NasforgeError(f"cannot read table {path}: {exc}") from exc
        return table

    def accuracy(self, genotype):
        """Deterministic oracle accuracy of a genotype."""
        canon = self.space.canonicalize(genotype)
        if self.mode == "file":
            if canon not in self.table:
                raise EvaluationError(
                    f"table has no entry for genotype "
                    f"{self.space.genotype_to_string(canon)!r}"
                )
            return self.table[canon]
        mism = np.asarray(
            [1.0 if c != o else 0.0 for c, o in zip(canon, self.optimum)]
        )
        total = self.position_weights.sum()
        base = 1.0 - float(self.position_weights @ mism) / total
        if len(canon) > 1:
            adj = float((mism[:-1] * mism[1:]).sum())
            base -= self.interaction_weight * adj / (len(canon) - 1)
        return float(min(1.0, max(0.0, base)))

    def evaluate_rollout(self, rollout):
        perf = {"acc": self.accuracy(rollout.genotype)}
        if self._hw is not None:
            metric, table = self._hw
            features = self.space.block_features(rollout.genotype, table)
            perf[metric] = float(sum(f.cost for f in features))
        perf["reward"] = self.objective.reward(perf)
        rollout.perf.update(perf)
        return rollout

    def update(self, controller):
        """Tabular oracles have nothing to train."""
        return {}

    def state_tensors(self):
        return []

    def load_state_tensors(self, tensors):
        pass
