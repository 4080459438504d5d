"""Config files: a YAML subset (mappings, sequences, scalars) validated fail-closed.

The top level holds exactly one subtree per component kind plus an optional
integer ``seed`` (default 20).  Each subtree needs a ``type`` naming a
registered component; the component class declares its accepted fields via
``CONFIG_FIELDS``, and any unknown key or type mismatch is an error carrying
the dotted key path.
"""

from dataclasses import dataclass

import yaml

from .errors import ConfigError
from .registry import GLOBAL_REGISTRY, KIND_NAMES, ComponentKind

DEFAULT_SEED = 20


@dataclass(frozen=True)
class Field:
    """One accepted key in a component config subtree."""

    name: str
    type: str  # int | float | bool | str | int_list | float_list | str_list | float_map
    default: object
    help: str = ""
    choices: tuple = None


def _is_int(v):
    return isinstance(v, int) and not isinstance(v, bool)


def _is_real(v):
    return _is_int(v) or isinstance(v, float)


def check_value(field, value, path):
    t = field.type
    if t == "int":
        if not _is_int(value):
            raise ConfigError(f"expected an integer, got {value!r}", path=path)
    elif t == "float":
        if not _is_real(value):
            raise ConfigError(f"expected a number, got {value!r}", path=path)
    elif t == "bool":
        if not isinstance(value, bool):
            raise ConfigError(f"expected a boolean, got {value!r}", path=path)
    elif t == "str":
        if not isinstance(value, str):
            raise ConfigError(f"expected a string, got {value!r}", path=path)
        if field.choices and value not in field.choices:
            raise ConfigError(
                f"expected one of {list(field.choices)}, got {value!r}", path=path
            )
    elif t == "int_list":
        if not isinstance(value, list) or not all(_is_int(v) for v in value):
            raise ConfigError(f"expected a list of integers, got {value!r}", path=path)
    elif t == "float_list":
        if not isinstance(value, list) or not all(_is_real(v) for v in value):
            raise ConfigError(f"expected a list of numbers, got {value!r}", path=path)
    elif t == "str_list":
        if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
            raise ConfigError(f"expected a list of strings, got {value!r}", path=path)
    elif t == "float_map":
        ok = isinstance(value, dict) and all(
            isinstance(k, str) and _is_real(v) for k, v in value.items()
        )
        if not ok:
            raise ConfigError(
                f"expected a mapping of name to number, got {value!r}", path=path
            )
    else:  # pragma: no cover - schema author error
        raise ConfigError(f"unknown field type {t!r}", path=path)


def validate_component_tree(kind, tree, registry):
    """Validate one component subtree; returns (type_name, resolved_settings).

    resolved_settings has defaults applied and does not include 'type'.
    """
    path = kind.value
    if not isinstance(tree, dict):
        raise ConfigError("expected a mapping", path=path)
    if "type" not in tree:
        raise ConfigError("missing required key 'type'", path=path)
    type_name = tree["type"]
    if not isinstance(type_name, str):
        raise ConfigError(f"expected a string, got {type_name!r}", path=f"{path}.type")
    cls = registry.lookup(kind, type_name)  # raises UnknownComponentError
    fields = {f.name: f for f in getattr(cls, "CONFIG_FIELDS", ())}
    resolved = {}
    for key, value in tree.items():
        if key == "type":
            continue
        if key not in fields:
            raise ConfigError(
                f"unknown key (accepted: {sorted(fields) or '(none)'})",
                path=f"{path}.{key}",
            )
        check_value(fields[key], value, f"{path}.{key}")
        resolved[key] = value
    for name, field in fields.items():
        if name not in resolved:
            resolved[name] = field.default
    return type_name, resolved


class Config:
    """Validated config tree. Equality and serialization use the raw tree."""

    def __init__(self, tree, registry=None):
        self._registry = registry or GLOBAL_REGISTRY
        self.tree = tree
        self._validate()

    def _validate(self):
        tree = self.tree
        if not isinstance(tree, dict):
            raise ConfigError("config root must be a mapping")
        allowed = set(KIND_NAMES) | {"seed"}
        for key in tree:
            if key not in allowed:
                raise ConfigError(
                    f"unknown top-level key (accepted: {sorted(allowed)})", path=str(key)
                )
        for kind_name in KIND_NAMES:
            if kind_name not in tree:
                raise ConfigError(f"missing component subtree '{kind_name}'")
        if "seed" in tree and not _is_int(tree["seed"]):
            raise ConfigError(f"expected an integer, got {tree['seed']!r}", path="seed")
        self._resolved = {}
        for kind in ComponentKind:
            self._resolved[kind] = validate_component_tree(
                kind, tree[kind.value], self._registry
            )

    @property
    def seed(self):
        return self.tree.get("seed", DEFAULT_SEED)

    def component(self, kind):
        """(type_name, settings-with-defaults) for a component kind."""
        return self._resolved[kind]

    def component_class(self, kind):
        return self._registry.lookup(kind, self._resolved[kind][0])

    def to_yaml(self):
        return yaml.safe_dump(self.tree, sort_keys=False, default_flow_style=False)

    def __eq__(self, other):
        return isinstance(other, Config) and self.tree == other.tree


def parse_yaml(text, origin="<string>"):
    try:
        tree = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        where = f"{origin}:{mark.line + 1}" if mark is not None else origin
        raise ConfigError(f"parse error at {where}: {exc}") from exc
    return tree


def load_config_text(text, registry=None, origin="<string>"):
    tree = parse_yaml(text, origin)
    return Config(tree, registry=registry)


def load_config(path, registry=None):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return load_config_text(text, registry=registry, origin=str(path))


def save_config(config, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(config.to_yaml())
