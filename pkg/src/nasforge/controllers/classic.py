"""Random sampling, simulated annealing, and aging evolution."""

import collections
import math

from ..config import Field
from ..errors import NasforgeError
from ..rollouts import DiscreteRollout
from .base import Controller


class RandomController(Controller):
    """Uniform sampling; derive returns the best seen so far."""

    kind_name = "random"
    CONFIG_FIELDS = ()

    @classmethod
    def from_config(cls, cfg, ctx):
        from ..registry import ComponentKind

        return cls(ctx.search_space, ctx.rng(ComponentKind.CONTROLLER))

    def _sample_explore(self, n):
        return [DiscreteRollout(self.space.random_genotype(self.rng)) for _ in range(n)]

    def _step(self, rollouts):
        return {}

    def _state_meta(self):
        return {}

    def _load_state(self, meta, tensors):
        pass


class SAController(Controller):
    """Single-chain simulated annealing over one-decision mutations.

    Proposals mutate the current genotype; acceptance follows the Metropolis
    rule on rewards (higher is better) and the temperature is multiplied by
    the cooling factor once per processed rollout, so it decreases strictly.
    """

    kind_name = "sa"
    CONFIG_FIELDS = (
        Field("initial_temperature", "float", 0.1, "T0, in reward units"),
        Field("cooling", "float", 0.98, "multiplicative cooling factor in (0,1)"),
    )

    def __init__(self, space, rng, initial_temperature=0.1, cooling=0.98):
        super().__init__(space, rng)
        if not 0.0 < cooling < 1.0:
            raise NasforgeError("cooling must lie in (0, 1)")
        if initial_temperature <= 0.0:
            raise NasforgeError("initial temperature must be positive")
        self.temperature = float(initial_temperature)
        self.cooling = float(cooling)
        self.current = None  # (genotype, reward)
        self.accept_count = 0

    @classmethod
    def from_config(cls, cfg, ctx):
        from ..registry import ComponentKind

        return cls(
            ctx.search_space,
            ctx.rng(ComponentKind.CONTROLLER),
            cfg["initial_temperature"],
            cfg["cooling"],
        )

    def _sample_explore(self, n):
        out = []
        for _ in range(n):
            if self.current is None:
                genotype = self.space.random_genotype(self.rng)
            else:
                genotype = self.space.mutate_genotype(self.current[0], self.rng)
            out.append(DiscreteRollout(genotype))
        return out

    def _step(self, rollouts):
        accepted = 0
        for r in rollouts:
            reward = r.perf["reward"]
            if self.current is None:
                self.current = (r.genotype, reward)
                accepted += 1
            else:
                delta = reward - self.current[1]
                if delta > 0 or self.rng.random() < math.exp(delta / self.temperature):
                    self.current = (r.genotype, reward)
                    accepted += 1
            self.temperature *= self.cooling
        self.accept_count += accepted
        return {"accepted": accepted, "temperature": self.temperature}

    def _state_meta(self):
        return {
            "temperature": self.temperature,
            "cooling": self.cooling,
            "accept_count": self.accept_count,
            "current": None
            if self.current is None
            else [list(self.current[0]), self.current[1]],
        }

    def _load_state(self, meta, tensors):
        self.temperature = meta["temperature"]
        self.cooling = meta["cooling"]
        self.accept_count = meta["accept_count"]
        self.current = (
            None
            if meta["current"] is None
            else (tuple(meta["current"][0]), meta["current"][1])
        )


class EvoController(Controller):
    """Aging evolution: tournament parent selection, one mutation, oldest-out."""

    kind_name = "evo"
    CONFIG_FIELDS = (
        Field("population_size", "int", 50, "population capacity"),
        Field("tournament_size", "int", 10, "tournament draw size"),
    )

    def __init__(self, space, rng, population_size=50, tournament_size=10):
        super().__init__(space, rng)
        if population_size < 1 or tournament_size < 1:
            raise NasforgeError("population and tournament sizes must be >= 1")
        self.population_size = population_size
        self.tournament_size = tournament_size
        self.population = collections.deque()  # (genotype, reward, birth_index)
        self.birth_index = 0

    @classmethod
    def from_config(cls, cfg, ctx):
        from ..registry import ComponentKind

        return cls(
            ctx.search_space,
            ctx.rng(ComponentKind.CONTROLLER),
            cfg["population_size"],
            cfg["tournament_size"],
        )

    def _sample_explore(self, n):
        out = []
        for _ in range(n):
            if not self.population:
                genotype = self.space.random_genotype(self.rng)
            else:
                k = min(self.tournament_size, len(self.population))
                idx = self.rng.choice(len(self.population), size=k, replace=False)
                parent = max((self.population[int(i)] for i in idx), key=lambda m: m[1])
                genotype = self.space.mutate_genotype(parent[0], self.rng)
            out.append(DiscreteRollout(genotype))
        return out

    def _step(self, rollouts):
        for r in rollouts:
            self.population.append((r.genotype, r.perf["reward"], self.birth_index))
            self.birth_index += 1
            while len(self.population) > self.population_size:
                self.population.popleft()  # aging: evict the oldest
        return {"population": len(self.population)}

    def _state_meta(self):
        return {
            "population": [[list(g), r, b] for g, r, b in self.population],
            "birth_index": self.birth_index,
            "population_size": self.population_size,
            "tournament_size": self.tournament_size,
        }

    def _load_state(self, meta, tensors):
        population = collections.deque(
            (tuple(g), r, b) for g, r, b in meta["population"]
        )
        self.population = population
        self.birth_index = meta["birth_index"]
        self.population_size = meta["population_size"]
        self.tournament_size = meta["tournament_size"]
