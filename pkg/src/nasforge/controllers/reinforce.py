"""REINFORCE controller: an LSTM emits one categorical distribution per decision.

The sequence is autoregressive: the embedding of the previous choice is the
next LSTM input (a learned start vector feeds the first step), and each
position has its own output head sized to that decision's cardinality.
Updates use the score-function gradient with an EMA reward baseline and an
entropy bonus; sampling rollouts never caches anything, ``step`` re-runs
the policy teacher-forced on the genotypes it is given, so rollouts can
come back from anywhere (including async workers).
"""

import numpy as np

from ..config import Field
from ..errors import NasforgeError
from ..nn.core import DenseLayer, LSTMCell
from ..nn.losses import softmax
from ..nn.optim import Adam
from ..rollouts import DiscreteRollout
from .base import Controller


class RLController(Controller):
    kind_name = "rl"
    CONFIG_FIELDS = (
        Field("hidden_size", "int", 64, "LSTM hidden units"),
        Field("embedding_dim", "int", 16, "choice embedding width"),
        Field("learning_rate", "float", 0.001, "Adam learning rate"),
        Field("entropy_weight", "float", 0.01, "entropy bonus coefficient"),
        Field("baseline_decay", "float", 0.9, "EMA decay of the reward baseline"),
    )

    def __init__(
        self,
        space,
        rng,
        hidden_size=64,
        embedding_dim=16,
        learning_rate=0.001,
        entropy_weight=0.01,
        baseline_decay=0.9,
    ):
        super().__init__(space, rng)
        self.hidden_size = hidden_size
        self.embedding_dim = embedding_dim
        self.entropy_weight = float(entropy_weight)
        self.baseline_decay = float(baseline_decay)
        self.baseline = 0.0
        cards = space.cardinalities
        self.start_embedding = rng.uniform(-0.1, 0.1, size=(1, embedding_dim))
        self.embeddings = [
            rng.uniform(-0.1, 0.1, size=(c, embedding_dim)) for c in cards
        ]
        self.cell = LSTMCell(embedding_dim, hidden_size, rng)
        self.heads = [DenseLayer(hidden_size, c, "identity", rng) for c in cards]
        self.optimizer = Adam(learning_rate)
        self._g_start = np.zeros_like(self.start_embedding)
        self._g_emb = [np.zeros_like(e) for e in self.embeddings]

    @classmethod
    def from_config(cls, cfg, ctx):
        from ..registry import ComponentKind

        return cls(
            ctx.search_space,
            ctx.rng(ComponentKind.CONTROLLER),
            cfg["hidden_size"],
            cfg["embedding_dim"],
            cfg["learning_rate"],
            cfg["entropy_weight"],
            cfg["baseline_decay"],
        )

    # -- policy executions --------------------------------------------------

    def _roll_policy(self, batch, choose):
        """Run the policy for `batch` sequences; `choose(i, probs)->actions` picks moves."""
        h, c = self.cell.zero_state(batch)
        x = np.repeat(self.start_embedding, batch, axis=0)
        actions = np.zeros((batch, self.space.num_decisions), dtype=np.int64)
        for i in range(self.space.num_decisions):
            h, c, _ = self.cell.step(x, h, c)
            logits = self.heads[i].forward(h)
            probs = softmax(logits)
            acts = choose(i, probs)
            actions[:, i] = acts
            x = self.embeddings[i][acts]
        return actions

    def _sample_explore(self, n):
        def choose(_i, probs):
            u = self.rng.random(probs.shape[0])
            cdf = np.cumsum(probs, axis=1)
            return np.minimum(
                (u[:, None] > cdf).sum(axis=1), probs.shape[1] - 1
            ).astype(np.int64)

        actions = self._roll_policy(n, choose)
        return [DiscreteRollout(tuple(int(a) for a in row)) for row in actions]

    def _sample_derive(self, n):
        actions = self._roll_policy(1, lambda _i, p: np.argmax(p, axis=1))
        genotype = tuple(int(a) for a in actions[0])
        return [DiscreteRollout(genotype) for _ in range(n)]

    def decision_probs(self, genotype):
        """Per-position probabilities along a teacher-forced pass (read-only)."""
        probs, _caches = self._forward_sequence(np.asarray([genotype], dtype=np.int64))
        return [p[0] for p in probs]

    def _forward_sequence(self, actions):
        """Teacher-forced forward over an (m, L) action matrix, caching for backward."""
        m = actions.shape[0]
        h, c = self.cell.zero_state(m)
        x = np.repeat(self.start_embedding, m, axis=0)
        probs = []
        caches = []
        for i in range(self.space.num_decisions):
            h, c, cache = self.cell.step(x, h, c)
            logits = self.heads[i].forward(h)
            probs.append(softmax(logits))
            caches.append(cache)
            x = self.embeddings[i][actions[:, i]]
        return probs, caches

    def policy_grad_logits(self, probs, actions, advantages):
        """d(loss)/d(logits) for one position: score function + entropy bonus."""
        adv = np.asarray(advantages, dtype=np.float64).reshape(-1, 1)
        grad = adv * probs
        grad[np.arange(probs.shape[0]), actions] -= adv[:, 0]
        if self.entropy_weight:
            logp = np.log(np.clip(probs, 1e-300, None))
            entropy = -(probs * logp).sum(axis=1, keepdims=True)
            grad += self.entropy_weight * probs * (logp + entropy)
        return grad

    def _step(self, rollouts):
        m = len(rollouts)
        actions = np.asarray([r.genotype for r in rollouts], dtype=np.int64)
        rewards = np.asarray([r.perf["reward"] for r in rollouts])
        advantages = rewards - self.baseline
        probs, caches = self._forward_sequence(actions)

        self.cell.zero_grads()
        self._g_start[:] = 0.0
        for g in self._g_emb:
            g[:] = 0.0
        grad_h = np.zeros((m, self.hidden_size))
        grad_c = np.zeros((m, self.hidden_size))
        grad_x_next = None
        for i in reversed(range(self.space.num_decisions)):
            dlogits = self.policy_grad_logits(probs[i], actions[:, i], advantages) / m
            grad_h_head = self.heads[i].backward(dlogits)
            grad_h = grad_h + grad_h_head
            if grad_x_next is not None:
                np.add.at(self._g_emb[i], actions[:, i], grad_x_next)
            grad_x, grad_h, grad_c = self.cell.backward_step(caches[i], grad_h, grad_c)
            grad_x_next = grad_x
        self._g_start += grad_x_next.sum(axis=0, keepdims=True)

        params = self._params()
        grads = self._grads()
        self.optimizer.step(params, grads)

        mean_loss = 0.0
        for i in range(self.space.num_decisions):
            logp = np.log(np.clip(probs[i][np.arange(m), actions[:, i]], 1e-300, None))
            mean_loss -= float((logp * advantages).mean())
        for r in rewards:
            self.baseline = (
                self.baseline_decay * self.baseline + (1 - self.baseline_decay) * r
            )
        return {"loss": mean_loss, "baseline": self.baseline}

    # -- parameters ----------------------------------------------------------

    def _params(self):
        params = [self.start_embedding]
        params.extend(self.embeddings)
        params.extend(self.cell.params())
        for head in self.heads:
            params.extend(head.params())
        return params

    def _grads(self):
        grads = [self._g_start]
        grads.extend(self._g_emb)
        grads.extend(self.cell.grads())
        for head in self.heads:
            grads.extend(head.grads())
        return grads

    # -- persistence ----------------------------------------------------------

    def _state_tensors(self):
        tensors = [("start_embedding", self.start_embedding)]
        tensors += [(f"embedding_{i}", e) for i, e in enumerate(self.embeddings)]
        tensors += [("lstm_w", self.cell.w), ("lstm_b", self.cell.b)]
        for i, head in enumerate(self.heads):
            tensors += [(f"head_w_{i}", head.w), (f"head_b_{i}", head.b)]
        for i, moment in enumerate(self.optimizer.moment_tensors()):
            tensors.append((f"adam_moment_{i}", moment))
        return tensors

    def _state_meta(self):
        return {
            "baseline": self.baseline,
            "optimizer": self.optimizer.state_dict(),
            "num_adam_moments": len(self.optimizer.moment_tensors()),
        }

    def _load_state(self, meta, tensors):
        n = self.space.num_decisions
        try:
            start = tensors["start_embedding"]
            embeddings = [tensors[f"embedding_{i}"] for i in range(n)]
            lstm_w = tensors["lstm_w"]
            lstm_b = tensors["lstm_b"]
            heads = [
                (tensors[f"head_w_{i}"], tensors[f"head_b_{i}"]) for i in range(n)
            ]
            moments = [
                tensors[f"adam_moment_{i}"] for i in range(meta["num_adam_moments"])
            ]
        except KeyError as exc:
            raise NasforgeError(f"controller checkpoint missing tensor {exc}") from exc
        self.start_embedding[:] = start
        for e, loaded in zip(self.embeddings, embeddings):
            e[:] = loaded
        self.cell.w[:] = lstm_w
        self.cell.b[:] = lstm_b
        for head, (w, b) in zip(self.heads, heads):
            head.w[:] = w
            head.b[:] = b
        self.optimizer.load_state_dict(meta["optimizer"])
        self.optimizer.load_moments(moments, self._params())
        self.baseline = meta["baseline"]
