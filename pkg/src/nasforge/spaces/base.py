"""Search space interface: decision cardinalities, sampling, mutation, enumeration."""

import itertools

from ..errors import GenotypeError, NasforgeError
from ..rollouts import DiscreteRollout

ENUMERATION_LIMIT = 10**6


class SearchSpace:
    """A space is an ordered list of integer decisions with fixed cardinalities.

    Subclasses provide ``cardinalities`` and the genotype string grammar;
    sampling, mutation and validation are generic.  Spaces are immutable
    after construction and all methods are pure given the supplied rng.
    """

    name = "base"

    @property
    def cardinalities(self):
        raise NotImplementedError

    @property
    def num_decisions(self):
        return len(self.cardinalities)

    def validate(self, genotype):
        cards = self.cardinalities
        if len(genotype) != len(cards):
            raise GenotypeError(
                f"genotype length {len(genotype)} != decision count {len(cards)}"
            )
        for i, (v, c) in enumerate(zip(genotype, cards)):
            if not isinstance(v, int) or isinstance(v, bool) or not 0 <= v < c:
                raise GenotypeError(
                    f"decision {i} value {v!r} out of range [0, {c})"
                )

    def is_valid(self, genotype):
        try:
            self.validate(genotype)
        except GenotypeError:
            return False
        return True

    def random_genotype(self, rng):
        return tuple(int(rng.integers(0, c)) for c in self.cardinalities)

    def mutate_genotype(self, genotype, rng):
        """Resample exactly one uniformly chosen (non-degenerate) decision."""
        self.validate(genotype)
        cards = self.cardinalities
        positions = [i for i, c in enumerate(cards) if c > 1]
        if not positions:
            raise NasforgeError("space has no mutable decision")
        pos = positions[int(rng.integers(0, len(positions)))]
        old = genotype[pos]
        new = int(rng.integers(0, cards[pos] - 1))
        if new >= old:
            new += 1
        child = list(genotype)
        child[pos] = new
        return tuple(child)

    def canonicalize(self, genotype):
        """Collapse inert decision values; identity unless the space masks positions."""
        self.validate(genotype)
        return tuple(genotype)

    def size(self):
        n = 1
        for c in self.cardinalities:
            n *= c
        return n

    def enumerate_genotypes(self):
        """Yield every canonical genotype exactly once; refuses oversized spaces."""
        if self.size() > ENUMERATION_LIMIT:
            raise NasforgeError(
                f"refusing to enumerate {self.size()} genotypes (limit {ENUMERATION_LIMIT})"
            )
        yield from self._enumerate()

    def _enumerate(self):
        for combo in itertools.product(*(range(c) for c in self.cardinalities)):
            yield tuple(combo)

    def genotype_to_string(self, genotype):
        raise NotImplementedError

    def parse_genotype(self, text):
        raise NotImplementedError


def random_rollout(space, rng):
    return DiscreteRollout(space.random_genotype(rng))


def mutate(space, rollout, rng):
    return DiscreteRollout(space.mutate_genotype(rollout.genotype, rng))
