"""Predictor-based controller: an MLP surrogate over one-hot genotypes.

Exploration samples a pool of random candidates and proposes the ones the
surrogate ranks highest; every evaluated rollout is appended to the
surrogate's dataset, which is retrained for a fixed epoch budget on each
step.  Derive scores a fresh deterministic pool and returns its argmax.
"""

import numpy as np

from ..config import Field
from ..errors import NasforgeError
from ..nn.core import MLP
from ..nn.losses import mse
from ..nn.optim import Adam
from ..rollouts import DiscreteRollout
from .base import Controller


class PredictorController(Controller):
    kind_name = "predictor"
    CONFIG_FIELDS = (
        Field("candidates_per_round", "int", 100, "random pool scored per round"),
        Field("top_k", "int", 5, "default proposals per round"),
        Field("hidden_sizes", "int_list", [32, 32], "surrogate MLP hidden widths"),
        Field("learning_rate", "float", 0.01, "surrogate Adam learning rate"),
        Field("train_epochs", "int", 100, "full-batch epochs per retrain"),
    )

    def __init__(
        self,
        space,
        rng,
        candidates_per_round=100,
        top_k=5,
        hidden_sizes=(32, 32),
        learning_rate=0.01,
        train_epochs=100,
    ):
        super().__init__(space, rng)
        self.candidates_per_round = candidates_per_round
        self.top_k = top_k
        self.train_epochs = train_epochs
        self.dataset = []  # (genotype, reward)
        self.input_dim = sum(space.cardinalities)
        init_rng = np.random.Generator(np.random.PCG64(rng.integers(2**63)))
        sizes = [self.input_dim] + list(hidden_sizes) + [1]
        activations = ["relu"] * len(hidden_sizes) + ["identity"]
        self.surrogate = MLP(sizes, activations, init_rng)
        self.optimizer = Adam(learning_rate)

    @classmethod
    def from_config(cls, cfg, ctx):
        from ..registry import ComponentKind

        return cls(
            ctx.search_space,
            ctx.rng(ComponentKind.CONTROLLER),
            cfg["candidates_per_round"],
            cfg["top_k"],
            cfg["hidden_sizes"],
            cfg["learning_rate"],
            cfg["train_epochs"],
        )

    def encode(self, genotypes):
        """One-hot encode a list of genotypes to an (m, input_dim) matrix."""
        m = len(genotypes)
        x = np.zeros((m, self.input_dim))
        offsets = np.cumsum([0] + list(self.space.cardinalities[:-1]))
        for row, genotype in enumerate(genotypes):
            for pos, value in enumerate(genotype):
                x[row, offsets[pos] + value] = 1.0
        return x

    def predict(self, genotypes):
        return self.surrogate.forward(self.encode(genotypes))[:, 0]

    def _propose(self, n, rng):
        pool = [self.space.random_genotype(rng) for _ in range(self.candidates_per_round)]
        scores = self.predict(pool)
        order = np.argsort(-scores, kind="stable")
        return [DiscreteRollout(pool[int(i)]) for i in order[:n]]

    def _sample_explore(self, n):
        if not self.dataset:
            return [
                DiscreteRollout(self.space.random_genotype(self.rng)) for _ in range(n)
            ]
        if n > self.candidates_per_round:
            raise NasforgeError("cannot propose more rollouts than the candidate pool")
        return self._propose(n, self.rng)

    def _sample_derive(self, n):
        if not self.dataset:
            return super()._sample_derive(n)
        out = self._propose(min(n, self.candidates_per_round), self._ephemeral_rng())
        while len(out) < n:  # n larger than the pool: repeat the surrogate argmax
            out.append(DiscreteRollout(out[0].genotype))
        return out

    def train_mse(self):
        if not self.dataset:
            return 0.0
        genotypes = [g for g, _ in self.dataset]
        targets = np.asarray([[r] for _, r in self.dataset])
        loss, _ = mse(self.surrogate.forward(self.encode(genotypes)), targets)
        return loss

    def _step(self, rollouts):
        for r in rollouts:
            self.dataset.append((r.genotype, r.perf["reward"]))
        x = self.encode([g for g, _ in self.dataset])
        y = np.asarray([[r] for _, r in self.dataset])
        loss = None
        for _ in range(self.train_epochs):
            pred = self.surrogate.forward(x)
            loss, grad = mse(pred, y)
            self.surrogate.backward(grad)
            self.optimizer.step(self.surrogate.params(), self.surrogate.grads())
        return {"train_mse": loss, "dataset_size": len(self.dataset)}

    def _state_tensors(self):
        tensors = []
        for i, layer in enumerate(self.surrogate.layers):
            tensors += [(f"layer_w_{i}", layer.w), (f"layer_b_{i}", layer.b)]
        for i, moment in enumerate(self.optimizer.moment_tensors()):
            tensors.append((f"adam_moment_{i}", moment))
        return tensors

    def _state_meta(self):
        return {
            "dataset": [[list(g), r] for g, r in self.dataset],
            "optimizer": self.optimizer.state_dict(),
            "num_adam_moments": len(self.optimizer.moment_tensors()),
        }

    def _load_state(self, meta, tensors):
        try:
            layers = [
                (tensors[f"layer_w_{i}"], tensors[f"layer_b_{i}"])
                for i in range(len(self.surrogate.layers))
            ]
            moments = [
                tensors[f"adam_moment_{i}"] for i in range(meta["num_adam_moments"])
            ]
        except KeyError as exc:
            raise NasforgeError(f"controller checkpoint missing tensor {exc}") from exc
        dataset = [(tuple(g), r) for g, r in meta["dataset"]]
        for layer, (w, b) in zip(self.surrogate.layers, layers):
            layer.w[:] = w
            layer.b[:] = b
        self.optimizer.load_state_dict(meta["optimizer"])
        self.optimizer.load_moments(moments, self.surrogate.params())
        self.dataset = dataset
