"""Shared-weights supernet over the toy MLP space.

The manager owns maximal dense parameters sized to the largest width
choice; a candidate with width w at layer l reads and writes exactly the
leading w x (prev width) weight block and the leading w bias entries
(prefix slicing).  Candidates hold view descriptors only - training a
candidate mutates the shared sub-blocks in place and nothing else.
"""

import numpy as np

from ..config import Field
from ..errors import GenotypeError, NasforgeError
from ..nn import kernels
from ..nn.core import init_weight
from ..nn.kernels import ACTIVATION_CODES
from ..nn.losses import mse
from ..registry import ComponentKind, register
from ..spaces.toy_mlp import ToyMLPSpace


@register(ComponentKind.WEIGHTS_MANAGER, "supernet")
class SupernetWeightsManager:
    CONFIG_FIELDS = ()

    def __init__(self, space, dataset, rng):
        if not isinstance(space, ToyMLPSpace):
            raise NasforgeError("supernet weights manager requires the toy_mlp space")
        self.space = space
        self.dataset = dataset
        self.max_width = max(space.width_choices)
        self.input_dim = dataset.input_dim
        self.output_dim = dataset.output_dim
        self.weights = []
        self.biases = []
        prev = self.input_dim
        for _ in range(space.num_layers):
            self.weights.append(init_weight(rng, self.max_width, prev))
            self.biases.append(np.zeros(self.max_width))
            prev = self.max_width
        self.head_w = init_weight(rng, self.output_dim, self.max_width)
        self.head_b = np.zeros(self.output_dim)

    @classmethod
    def from_config(cls, cfg, ctx):
        return cls(ctx.search_space, ctx.dataset, ctx.rng(ComponentKind.WEIGHTS_MANAGER))

    def assemble_candidate(self, rollout):
        candidate = CandidateNet(self, rollout.genotype)
        rollout.candidate = candidate
        return candidate

    def state_tensors(self):
        tensors = []
        for i, (w, b) in enumerate(zip(self.weights, self.biases)):
            tensors += [(f"layer_w_{i}", w), (f"layer_b_{i}", b)]
        tensors += [("head_w", self.head_w), ("head_b", self.head_b)]
        return tensors

    def load_state_tensors(self, tensors):
        for i in range(len(self.weights)):
            self.weights[i][:] = tensors[f"layer_w_{i}"]
            self.biases[i][:] = tensors[f"layer_b_{i}"]
        self.head_w[:] = tensors["head_w"]
        self.head_b[:] = tensors["head_b"]


class CandidateNet:
    """A sub-network of the supernet, parameterized by views into shared storage."""

    def __init__(self, manager, genotype):
        manager.space.validate(genotype)
        self.manager = manager
        self.genotype = tuple(genotype)
        self.plan = manager.space.layer_plan(genotype)

    def _views(self):
        """[(w_view, b_view, act_code), ...] for hidden layers plus the head."""
        views = []
        prev = self.manager.input_dim
        for (width, act), w, b in zip(self.plan, self.manager.weights, self.manager.biases):
            views.append((w[:width, :prev], b[:width], ACTIVATION_CODES[act]))
            prev = width
        views.append(
            (
                self.manager.head_w[:, :prev],
                self.manager.head_b,
                ACTIVATION_CODES["identity"],
            )
        )
        return views

    def forward(self, x):
        x = np.asarray(x, dtype=np.float64)
        for w, b, act in self._views():
            x = kernels.dense_forward(
                np.ascontiguousarray(x),
                np.ascontiguousarray(w),
                np.ascontiguousarray(b),
                act,
            )
        return x

    def eval_mse(self, x, y):
        loss, _ = mse(self.forward(x), y)
        return loss

    def train_step(self, x, y, learning_rate):
        """One SGD step on this candidate's shared parameter views."""
        x = np.asarray(x, dtype=np.float64)
        views = self._views()
        inputs = []
        outputs = []
        cur = x
        for w, b, act in views:
            inputs.append(cur)
            cur = kernels.dense_forward(
                np.ascontiguousarray(cur),
                np.ascontiguousarray(w),
                np.ascontiguousarray(b),
                act,
            )
            outputs.append(cur)
        loss, grad = mse(cur, y)
        for (w, b, act), layer_in, layer_out in zip(
            reversed(views), reversed(inputs), reversed(outputs)
        ):
            gx, gw, gb = kernels.dense_backward(
                np.ascontiguousarray(layer_in),
                np.ascontiguousarray(w),
                layer_out,
                np.ascontiguousarray(grad),
                act,
            )
            w -= learning_rate * gw  # in-place on the shared view
            b -= learning_rate * gb
            grad = gx
        return loss


@register(ComponentKind.EVALUATOR, "supernet")
class SupernetEvaluator:
    """Scores candidates on a fixed held-out batch; update() trains shared weights."""

    supports_concurrent_evaluation = False  # update() conflicts with evaluation

    CONFIG_FIELDS = (
        Field("rollouts_per_update", "int", 4, "candidates trained per update call"),
        Field("sgd_learning_rate", "float", 0.05, "candidate SGD step size"),
    )

    def __init__(self, weights_manager, objective, dataset, rollouts_per_update=4, sgd_learning_rate=0.05):
        if not isinstance(weights_manager, SupernetWeightsManager):
            raise NasforgeError("supernet evaluator requires the supernet weights manager")
        self.weights_manager = weights_manager
        self.objective = objective
        self.dataset = dataset
        self.rollouts_per_update = rollouts_per_update
        self.sgd_learning_rate = sgd_learning_rate
        _, eval_y = dataset.eval_batch()
        self._ref_mse = float(np.mean((eval_y - eval_y.mean(axis=0)) ** 2))

    @classmethod
    def from_config(cls, cfg, ctx):
        return cls(
            ctx.weights_manager,
            ctx.objective,
            ctx.dataset,
            cfg["rollouts_per_update"],
            cfg["sgd_learning_rate"],
        )

    def evaluate_rollout(self, rollout):
        candidate = rollout.candidate
        if candidate is None:
            candidate = self.weights_manager.assemble_candidate(rollout)
        if candidate.genotype != tuple(rollout.genotype):
            raise GenotypeError("rollout candidate does not match its genotype")
        x, y = self.dataset.eval_batch()
        loss = candidate.eval_mse(x, y)
        acc = float(min(1.0, max(0.0, 1.0 - loss / self._ref_mse)))
        perf = {"acc": acc, "mse": loss}
        perf["reward"] = self.objective.reward(perf)
        rollout.perf.update(perf)
        return rollout

    def update(self, controller):
        """Train shared weights on freshly sampled candidates (one SGD step each)."""
        rollouts = controller.sample(self.rollouts_per_update, mode="explore")
        losses = []
        for r in rollouts:
            candidate = self.weights_manager.assemble_candidate(r)
            x, y = self.dataset.train_batch()
            losses.append(candidate.train_step(x, y, self.sgd_learning_rate))
        return {"mean_loss": float(np.mean(losses))}

    def state_tensors(self):
        return self.weights_manager.state_tensors()

    def load_state_tensors(self, tensors):
        self.weights_manager.load_state_tensors(tensors)
