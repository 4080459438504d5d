"""Derive / eval-arch / final-train workflows and the genotype file format.

A genotype file is a YAML mapping with one key ``archs`` holding a list of
entries; each entry is either a genotype string or a mapping with ``arch``
and an optional ``note``.  Entries keep their source line numbers so
per-entry failures can cite them without aborting the rest.
"""

import numpy as np
import yaml

from .config import Field, check_value, parse_yaml, validate_component_tree
from .errors import ConfigError, NasforgeError
from .nn.core import MLP
from .nn.losses import mse
from .nn.optim import Adam
from .nn.tensor_io import load_tensors, save_tensors
from .registry import GLOBAL_REGISTRY, ComponentKind
from .rollouts import DiscreteRollout
from .spaces.toy_mlp import ToyMLPSpace


# -- derive -----------------------------------------------------------------


def derive(session, n, out_path=None):
    """Deterministically extract n genotypes, evaluate each once, sort by reward.

    Returns [(genotype_string, perf), ...] best first; optionally writes the
    genotype file.
    """
    if n < 1:
        raise NasforgeError("derive requires n >= 1")
    rollouts = session.controller.sample(n, mode="derive")
    records = []
    for rollout in rollouts:
        fresh = DiscreteRollout(rollout.genotype)
        session.weights_manager.assemble_candidate(fresh)
        session.evaluator.evaluate_rollout(fresh)
        records.append(
            (session.search_space.genotype_to_string(fresh.genotype), dict(fresh.perf))
        )
    records.sort(key=lambda item: -item[1]["reward"])
    if out_path:
        write_arch_file(
            out_path,
            [(arch, f"reward={perf['reward']:.12g}") for arch, perf in records],
        )
    return records


# -- genotype files -----------------------------------------------------------


def write_arch_file(path, entries):
    """entries: [(arch_string, note-or-None), ...]"""
    lines = ["archs:"]
    for arch, note in entries:
        lines.append(f"- arch: {arch}")
        if note:
            lines.append(f"  note: {note}")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def read_arch_file(path):
    """[(line_number, arch_string, note), ...]; malformed YAML raises ConfigError."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read genotype file {path}: {exc}") from exc
    try:
        root = yaml.compose(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        where = f"{path}:{mark.line + 1}" if mark is not None else path
        raise ConfigError(f"parse error at {where}: {exc}") from exc
    if not isinstance(root, yaml.MappingNode):
        raise ConfigError(f"{path}: expected a mapping with key 'archs'")
    seq = None
    for key_node, value_node in root.value:
        if key_node.value != "archs":
            raise ConfigError(f"{path}: unknown top-level key {key_node.value!r}")
        seq = value_node
    if seq is None or not isinstance(seq, yaml.SequenceNode):
        raise ConfigError(f"{path}: 'archs' must hold a list")
    entries = []
    for item in seq.value:
        line = item.start_mark.line + 1
        if isinstance(item, yaml.ScalarNode):
            entries.append((line, str(item.value), None))
        elif isinstance(item, yaml.MappingNode):
            fields = {}
            for k, v in item.value:
                if not isinstance(v, yaml.ScalarNode):
                    raise ConfigError(f"{path}:{line}: entry values must be scalars")
                fields[k.value] = str(v.value)
            if "arch" not in fields:
                raise ConfigError(f"{path}:{line}: entry is missing 'arch'")
            unknown = set(fields) - {"arch", "note"}
            if unknown:
                raise ConfigError(f"{path}:{line}: unknown entry keys {sorted(unknown)}")
            entries.append((line, fields["arch"], fields.get("note")))
        else:
            raise ConfigError(f"{path}:{line}: entries must be strings or mappings")
    return entries


def eval_arch(session, path):
    """Evaluate every genotype in a file; per-entry failures become error records."""
    results = []
    for line, arch, note in read_arch_file(path):
        record = {"line": line, "arch": arch}
        if note:
            record["note"] = note
        try:
            genotype = session.search_space.parse_genotype(arch)
            rollout = DiscreteRollout(genotype)
            session.weights_manager.assemble_candidate(rollout)
            session.evaluator.evaluate_rollout(rollout)
            record["perf"] = dict(rollout.perf)
        except NasforgeError as exc:
            record["error"] = str(exc)
        results.append(record)
    return results


# -- final training -----------------------------------------------------------

FINAL_TRAIN_FIELDS = (
    Field("steps", "int", 2000, "training steps"),
    Field("learning_rate", "float", 0.001, "Adam learning rate"),
)


def load_final_config(path, registry=None):
    """Final-training config: {seed?, dataset, search_space, train}."""
    registry = registry or GLOBAL_REGISTRY
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    tree = parse_yaml(text, str(path))
    if not isinstance(tree, dict):
        raise ConfigError(f"{path}: config root must be a mapping")
    allowed = {"seed", "dataset", "search_space", "train"}
    for key in tree:
        if key not in allowed:
            raise ConfigError(f"unknown top-level key (accepted: {sorted(allowed)})", path=str(key))
    resolved = {"seed": tree.get("seed", 20)}
    for kind in (ComponentKind.DATASET, ComponentKind.SEARCH_SPACE):
        if kind.value not in tree:
            raise ConfigError(f"missing subtree '{kind.value}'")
        resolved[kind.value] = validate_component_tree(kind, tree[kind.value], registry)
    train_tree = tree.get("train", {})
    if not isinstance(train_tree, dict):
        raise ConfigError("expected a mapping", path="train")
    fields = {f.name: f for f in FINAL_TRAIN_FIELDS}
    train = {}
    for key, value in train_tree.items():
        if key not in fields:
            raise ConfigError(f"unknown key (accepted: {sorted(fields)})", path=f"train.{key}")
        check_value(fields[key], value, f"train.{key}")
        train[key] = value
    for name, f in fields.items():
        train.setdefault(name, f.default)
    resolved["train"] = train
    return resolved


class _FinalContext:
    """Just enough BuildContext for dataset/search-space construction."""

    def __init__(self, seed):
        self.seed = seed
        self._streams = {}

    def rng(self, kind):
        from .session import kind_stream

        if kind not in self._streams:
            self._streams[kind] = kind_stream(self.seed, kind)
        return self._streams[kind]


def build_final_parts(final_cfg, registry=None):
    """(space, dataset) constructed from a final-training config."""
    registry = registry or GLOBAL_REGISTRY
    ctx = _FinalContext(final_cfg["seed"])
    space_type, space_settings = final_cfg["search_space"]
    space = registry.lookup(ComponentKind.SEARCH_SPACE, space_type).from_config(
        space_settings, ctx
    )
    ds_type, ds_settings = final_cfg["dataset"]
    dataset = registry.lookup(ComponentKind.DATASET, ds_type).from_config(
        ds_settings, ctx
    )
    ctx.search_space = space
    return space, dataset


def build_standalone_mlp(space, genotype, input_dim, output_dim, rng):
    """Fresh (non-shared) MLP realizing a toy-MLP genotype."""
    if not isinstance(space, ToyMLPSpace):
        raise NasforgeError("final training supports only toy_mlp genotypes")
    plan = space.layer_plan(genotype)
    sizes = [input_dim] + [w for w, _ in plan] + [output_dim]
    activations = [a for _, a in plan] + ["identity"]
    return MLP(sizes, activations, rng)


def final_train(genotype, space, dataset, steps=2000, learning_rate=0.001, seed=20):
    """Train a standalone network on the synthetic task; returns (model, metrics).

    The model gets fresh weights (nothing shared with any supernet) and is
    scored by held-out MSE on the dataset's fixed evaluation batch.
    """
    init_ss = np.random.SeedSequence([int(seed), 0xF17A])
    model = build_standalone_mlp(
        space,
        genotype,
        dataset.input_dim,
        dataset.output_dim,
        np.random.Generator(np.random.PCG64(init_ss)),
    )
    optimizer = Adam(learning_rate)
    x0, y0 = dataset.eval_batch()
    initial_mse, _ = mse(model.forward(x0), y0)
    last_loss = None
    for _ in range(steps):
        x, y = dataset.train_batch()
        pred = model.forward(x)
        last_loss, grad = mse(pred, y)
        model.backward(grad)
        optimizer.step(model.params(), model.grads())
    held_out, _ = mse(model.forward(x0), y0)
    metrics = {
        "initial_mse": initial_mse,
        "final_train_mse": last_loss,
        "held_out_mse": held_out,
        "steps": steps,
    }
    return model, metrics


def save_final_model(path, model, space, genotype, metrics):
    tensors = []
    for i, layer in enumerate(model.layers):
        tensors += [(f"layer_w_{i}", layer.w), (f"layer_b_{i}", layer.b)]
    meta = {
        "component": "final_model",
        "arch": space.genotype_to_string(genotype),
        "metrics": metrics,
    }
    save_tensors(path, tensors, meta)


def load_final_model(path, space, input_dim, output_dim):
    """(model, arch_string, metrics) from a saved final model."""
    tensors, meta = load_tensors(path)
    if meta.get("component") != "final_model":
        raise NasforgeError(f"{path}: not a final model checkpoint")
    genotype = space.parse_genotype(meta["arch"])
    rng = np.random.default_rng(0)
    model = build_standalone_mlp(space, genotype, input_dim, output_dim, rng)
    for i, layer in enumerate(model.layers):
        layer.w[:] = tensors[f"layer_w_{i}"]
        layer.b[:] = tensors[f"layer_b_{i}"]
    return model, meta["arch"], meta.get("metrics", {})


def test_final_model(path, final_cfg):
    """Held-out MSE of a saved final model under its dataset config."""
    space, dataset = build_final_parts(final_cfg)
    model, arch, _ = load_final_model(path, space, dataset.input_dim, dataset.output_dim)
    x, y = dataset.eval_batch()
    loss, _ = mse(model.forward(x), y)
    return {"arch": arch, "held_out_mse": loss}
