"""Assembling a search session from a validated config.

Every component kind gets its own RNG stream derived from the session seed
and the kind's position in the ComponentKind enum, so construction order
cannot change any stream.  Controller, weights manager and evaluator all
receive the one search-space instance.
"""

import numpy as np

from .errors import BuildError
from .registry import GLOBAL_REGISTRY, ComponentKind

_KIND_INDEX = {kind: i for i, kind in enumerate(ComponentKind)}


def kind_stream(seed, kind):
    """Independent Generator for (seed, kind)."""
    ss = np.random.SeedSequence([int(seed), _KIND_INDEX[kind]])
    return np.random.Generator(np.random.PCG64(ss))


def rng_state_to_json(state):
    """bit_generator.state dicts hold numpy ints/arrays; make them JSON-clean."""

    def conv(v):
        if isinstance(v, dict):
            return {k: conv(x) for k, x in v.items()}
        if isinstance(v, np.integer):
            return int(v)
        if isinstance(v, np.ndarray):
            return {"__ndarray__": v.tolist(), "dtype": str(v.dtype)}
        return v

    return conv(state)


def rng_state_from_json(state):
    def conv(v):
        if isinstance(v, dict):
            if "__ndarray__" in v:
                return np.array(v["__ndarray__"], dtype=v["dtype"])
            return {k: conv(x) for k, x in v.items()}
        return v

    return conv(state)


class BuildContext:
    """What component constructors may see while the session is assembled."""

    def __init__(self, config, seed):
        self.config = config
        self.seed = seed
        self._streams = {}
        self.search_space = None
        self.dataset = None
        self.objective = None
        self.weights_manager = None
        self.evaluator = None

    def rng(self, kind):
        if kind not in self._streams:
            self._streams[kind] = kind_stream(self.seed, kind)
        return self._streams[kind]

    @property
    def streams(self):
        return self._streams


_BUILD_ORDER = (
    ComponentKind.SEARCH_SPACE,
    ComponentKind.DATASET,
    ComponentKind.OBJECTIVE,
    ComponentKind.WEIGHTS_MANAGER,
    ComponentKind.EVALUATOR,
    ComponentKind.CONTROLLER,
    ComponentKind.TRAINER,
)

_CTX_ATTR = {
    ComponentKind.SEARCH_SPACE: "search_space",
    ComponentKind.DATASET: "dataset",
    ComponentKind.OBJECTIVE: "objective",
    ComponentKind.WEIGHTS_MANAGER: "weights_manager",
    ComponentKind.EVALUATOR: "evaluator",
}


class Session:
    """One constructed instance per component kind, sharing a search space."""

    def __init__(self, config, registry=None):
        registry = registry or GLOBAL_REGISTRY
        self.config = config
        self.seed = config.seed
        ctx = BuildContext(config, self.seed)
        self._ctx = ctx
        instances = {}
        for kind in _BUILD_ORDER:
            type_name, settings = config.component(kind)
            cls = registry.lookup(kind, type_name)
            try:
                instance = cls.from_config(settings, ctx)
            except Exception as exc:
                raise BuildError(f"{kind.value}: {exc}") from exc
            instances[kind] = instance
            if kind in _CTX_ATTR:
                setattr(ctx, _CTX_ATTR[kind], instance)
        self.search_space = instances[ComponentKind.SEARCH_SPACE]
        self.dataset = instances[ComponentKind.DATASET]
        self.objective = instances[ComponentKind.OBJECTIVE]
        self.weights_manager = instances[ComponentKind.WEIGHTS_MANAGER]
        self.evaluator = instances[ComponentKind.EVALUATOR]
        self.controller = instances[ComponentKind.CONTROLLER]
        self.trainer = instances[ComponentKind.TRAINER]

    def rng(self, kind):
        return self._ctx.rng(kind)

    def rng_states(self):
        """Serializable per-kind RNG states (only streams actually created)."""
        return {
            kind.value: self._ctx.streams[kind].bit_generator.state
            for kind in self._ctx.streams
        }

    def set_rng_states(self, states):
        for kind_name, state in states.items():
            kind = ComponentKind.from_string(kind_name)
            self._ctx.rng(kind).bit_generator.state = state


def assemble_session(config, registry=None):
    return Session(config, registry=registry)
