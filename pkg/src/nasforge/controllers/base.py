"""Controller interface and shared best-seen bookkeeping.

Controllers sample rollouts in two modes: ``explore`` (stochastic, may
advance the controller's RNG) and ``derive`` (deterministic, touches no
state, safe on a frozen controller).  ``step`` consumes evaluated rollouts
and is the only other mutating entry point; explore/step must be serialized
by the caller (the trainers do).

Every controller keeps an archive of the best genotypes it has seen a
reward for; strategies without an intrinsic notion of "best" (random) derive
straight from it.  Before the first step() every strategy falls back to
uniform random sampling via a deterministic ephemeral stream, so deriving
twice without an intervening step yields identical output.
"""

import numpy as np

from ..errors import CheckpointError, NasforgeError
from ..nn.tensor_io import load_tensors, save_tensors
from ..rollouts import DiscreteRollout
from ..session import rng_state_from_json, rng_state_to_json

CHECKPOINT_VERSION = 1
ARCHIVE_CAPACITY = 50


class BestArchive:
    """Top genotypes by reward, deduplicated on canonical genotype."""

    def __init__(self, capacity=ARCHIVE_CAPACITY):
        self.capacity = capacity
        self._entries = {}  # canonical genotype -> reward

    def record(self, genotype, reward):
        prev = self._entries.get(genotype)
        if prev is None or reward > prev:
            self._entries[genotype] = reward
        if len(self._entries) > self.capacity:
            worst = min(self._entries, key=lambda g: (self._entries[g],))
            del self._entries[worst]

    def best(self, n):
        ranked = sorted(self._entries.items(), key=lambda kv: -kv[1])
        return [genotype for genotype, _ in ranked[:n]]

    def best_reward(self):
        return max(self._entries.values()) if self._entries else None

    def __len__(self):
        return len(self._entries)

    def to_json(self):
        return [[list(g), r] for g, r in self._entries.items()]

    @classmethod
    def from_json(cls, data, capacity=ARCHIVE_CAPACITY):
        archive = cls(capacity)
        for genotype, reward in data:
            archive._entries[tuple(genotype)] = reward
        return archive


class Controller:
    kind_name = None  # set by subclasses; written into checkpoints

    def __init__(self, space, rng):
        self.space = space
        self.rng = rng
        self.archive = BestArchive()
        self.step_count = 0

    # -- sampling ---------------------------------------------------------

    def sample(self, n, mode="explore"):
        if n < 1:
            raise NasforgeError("sample requires n >= 1")
        if mode == "explore":
            return self._sample_explore(n)
        if mode == "derive":
            return self._sample_derive(n)
        raise NasforgeError(f"unknown sample mode {mode!r}")

    def _sample_explore(self, n):
        raise NotImplementedError

    def _sample_derive(self, n):
        """Default: best-seen genotypes, padded with deterministic randoms."""
        genotypes = self.archive.best(n)
        if len(genotypes) < n:
            filler = self._ephemeral_rng()
            while len(genotypes) < n:
                genotypes.append(self.space.random_genotype(filler))
        return [DiscreteRollout(g) for g in genotypes]

    def _ephemeral_rng(self):
        """Deterministic stream keyed on current progress; never touches self.rng."""
        ss = np.random.SeedSequence([self.step_count, len(self.archive), 0x5EED])
        return np.random.Generator(np.random.PCG64(ss))

    # -- learning ---------------------------------------------------------

    def step(self, rollouts):
        for r in rollouts:
            if "reward" not in r.perf:
                raise NasforgeError("controller.step requires evaluated rollouts")
        stats = self._step(rollouts)
        for r in rollouts:
            self.archive.record(self.space.canonicalize(r.genotype), r.perf["reward"])
        self.step_count += len(rollouts)
        return stats or {}

    def _step(self, rollouts):
        raise NotImplementedError

    # -- persistence ------------------------------------------------------

    def _state_meta(self):
        """JSON-serializable strategy state (beyond tensors)."""
        return {}

    def _state_tensors(self):
        """Ordered (name, array) list of strategy tensors."""
        return []

    def _load_state(self, meta, tensors):
        raise NotImplementedError

    def save(self, path):
        meta = {
            "component": "controller",
            "kind": self.kind_name,
            "version": CHECKPOINT_VERSION,
            "step_count": self.step_count,
            "archive": self.archive.to_json(),
            "rng_state": rng_state_to_json(self.rng.bit_generator.state),
            "state": self._state_meta(),
        }
        save_tensors(path, self._state_tensors(), meta)

    def load(self, path):
        tensors, meta = load_tensors(path)
        if meta.get("component") != "controller":
            raise CheckpointError(f"{path}: not a controller checkpoint")
        if meta.get("kind") != self.kind_name:
            raise CheckpointError(
                f"{path}: checkpoint kind {meta.get('kind')!r} does not match "
                f"controller kind {self.kind_name!r}"
            )
        if meta.get("version") != CHECKPOINT_VERSION:
            raise CheckpointError(
                f"{path}: unsupported checkpoint version {meta.get('version')!r}"
            )
        # parse everything before mutating self so a bad file leaves us unchanged
        archive = BestArchive.from_json(meta["archive"])
        self._load_state(meta["state"], tensors)
        self.archive = archive
        self.step_count = meta["step_count"]
        self.rng.bit_generator.state = rng_state_from_json(meta["rng_state"])
