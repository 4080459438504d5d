"""Commented sample configs for the search session and for final training."""

import yaml

from .registry import GLOBAL_REGISTRY, ComponentKind

# default component per kind for the generated sample
_SAMPLE_TYPES = {
    ComponentKind.DATASET: "synthetic_regression",
    ComponentKind.OBJECTIVE: "weighted_sum",
    ComponentKind.SEARCH_SPACE: "toy_mlp",
    ComponentKind.CONTROLLER: "evo",
    ComponentKind.WEIGHTS_MANAGER: "noop",
    ComponentKind.EVALUATOR: "tabular",
    ComponentKind.TRAINER: "simple",
}


def _fmt(value):
    # scalar documents end with a '...' marker line; keep only the value itself
    return yaml.safe_dump(value, default_flow_style=True, width=10**6).strip().splitlines()[0].strip()


def gen_sample_config(registry=None):
    """A complete default search config, one commented block per component."""
    registry = registry or GLOBAL_REGISTRY
    lines = [
        "# nasforge search configuration",
        "# One subtree per component kind; every subtree needs a 'type' that is",
        "# registered for that kind (see the 'registry' subcommand).",
        "seed: 20  # master seed; per-component streams derive from it",
    ]
    for kind in ComponentKind:
        type_name = _SAMPLE_TYPES[kind]
        cls = registry.lookup(kind, type_name)
        others = [n for n in registry.names(kind) if n != type_name]
        lines.append("")
        if others:
            lines.append(f"# {kind.value}: other types: {', '.join(others)}")
        lines.append(f"{kind.value}:")
        lines.append(f"  type: {type_name}")
        for field in getattr(cls, "CONFIG_FIELDS", ()):
            comment = f"  # {field.help}" if field.help else ""
            lines.append(f"  {field.name}: {_fmt(field.default)}{comment}")
    return "\n".join(lines) + "\n"


def gen_final_sample_config():
    """Default final-training config (dataset + search space + train settings)."""
    from .workflows import FINAL_TRAIN_FIELDS

    registry = GLOBAL_REGISTRY
    lines = [
        "# nasforge final-training configuration",
        "# Used by the 'train' and 'test' subcommands on a derived genotype.",
        "seed: 20",
    ]
    for kind in (ComponentKind.DATASET, ComponentKind.SEARCH_SPACE):
        type_name = _SAMPLE_TYPES[kind]
        cls = registry.lookup(kind, type_name)
        lines.append("")
        lines.append(f"{kind.value}:")
        lines.append(f"  type: {type_name}")
        for field in getattr(cls, "CONFIG_FIELDS", ()):
            comment = f"  # {field.help}" if field.help else ""
            lines.append(f"  {field.name}: {_fmt(field.default)}{comment}")
    lines.append("")
    lines.append("train:")
    for field in FINAL_TRAIN_FIELDS:
        comment = f"  # {field.help}" if field.help else ""
        lines.append(f"  {field.name}: {_fmt(field.default)}{comment}")
    return "\n".join(lines) + "\n"
