"""Component kinds and the (kind, name) -> constructor registry."""

import enum
import threading

from .errors import DuplicateComponentError, NasforgeError, UnknownComponentError


class ComponentKind(enum.Enum):
    DATASET = "dataset"
    OBJECTIVE = "objective"
    SEARCH_SPACE = "search_space"
    CONTROLLER = "controller"
    WEIGHTS_MANAGER = "weights_manager"
    EVALUATOR = "evaluator"
    TRAINER = "trainer"

    @classmethod
    def from_string(cls, s):
        for kind in cls:
            if kind.value == s:
                return kind
        raise NasforgeError(f"unknown component kind {s!r}")


KIND_NAMES = tuple(kind.value for kind in ComponentKind)


class ComponentRegistry:
    """Frozen-after-startup table of component constructors.

    Registration happens at import time; lookups afterwards are read-only
    and safe from any thread.
    """

    def __init__(self):
        self._entries = {}
        self._lock = threading.Lock()

    def register(self, kind, name, constructor):
        if not isinstance(kind, ComponentKind):
            raise NasforgeError(f"kind must be a ComponentKind, got {kind!r}")
        with self._lock:
            if (kind, name) in self._entries:
                raise DuplicateComponentError(
                    f"{kind.value} component {name!r} is already registered"
                )
            self._entries[(kind, name)] = constructor

    def lookup(self, kind, name):
        if not isinstance(kind, ComponentKind):
            raise NasforgeError(f"kind must be a ComponentKind, got {kind!r}")
        try:
            return self._entries[(kind, name)]
        except KeyError:
            known = self.names(kind)
            raise UnknownComponentError(
                f"unknown {kind.value} component {name!r}; registered: "
                f"{', '.join(known) if known else '(none)'}"
            ) from None

    def names(self, kind):
        return sorted(n for k, n in self._entries if k == kind)

    def items(self):
        return sorted(self._entries.items(), key=lambda kv: (kv[0][0].value, kv[0][1]))


GLOBAL_REGISTRY = ComponentRegistry()


def register(kind, name, constructor=None):
    """Register directly or use as a class decorator."""
    if constructor is not None:
        GLOBAL_REGISTRY.register(kind, name, constructor)
        return constructor

    def deco(cls):
        GLOBAL_REGISTRY.register(kind, name, cls)
        return cls

    return deco
