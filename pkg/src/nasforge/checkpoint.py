"""Session checkpoints: ckpt/epoch_<k>/{controller.bin, evaluator.bin, rng.json, meta.json}.

Resuming reconstructs the session from its config (replaying all
construction-time randomness), then overwrites controller state, evaluator
tensors, and every component RNG stream, so a resumed single-worker run is
bit-identical to an uninterrupted one.
"""

import json
import os
import re

from .errors import CheckpointError
from .nn.tensor_io import load_tensors, save_tensors
from .session import rng_state_from_json, rng_state_to_json

CKPT_DIRNAME = "ckpt"
_EPOCH_RE = re.compile(r"^epoch_(\d+)$")


def checkpoint_dir(train_dir, epoch):
    return os.path.join(train_dir, CKPT_DIRNAME, f"epoch_{epoch}")


def save_checkpoint(train_dir, epoch, session):
    path = checkpoint_dir(train_dir, epoch)
    os.makedirs(path, exist_ok=True)
    session.controller.save(os.path.join(path, "controller.bin"))
    save_tensors(
        os.path.join(path, "evaluator.bin"),
        session.evaluator.state_tensors(),
        {"component": "evaluator", "kind": type(session.evaluator).__name__},
    )
    with open(os.path.join(path, "rng.json"), "w", encoding="utf-8") as fh:
        json.dump(
            {k: rng_state_to_json(v) for k, v in session.rng_states().items()}, fh
        )
    with open(os.path.join(path, "meta.json"), "w", encoding="utf-8") as fh:
        json.dump({"epoch": epoch, "seed": session.seed}, fh)
    return path


def latest_checkpoint(train_dir):
    """(epoch, path) of the newest checkpoint under train_dir, or None."""
    root = os.path.join(train_dir, CKPT_DIRNAME)
    if not os.path.isdir(root):
        return None
    epochs = []
    for name in os.listdir(root):
        m = _EPOCH_RE.match(name)
        if m:
            epochs.append(int(m.group(1)))
    if not epochs:
        return None
    epoch = max(epochs)
    return epoch, checkpoint_dir(train_dir, epoch)


def load_checkpoint(session, path):
    """Restore a session in place from a checkpoint directory; returns its epoch."""
    meta_path = os.path.join(path, "meta.json")
    try:
        with open(meta_path, "r", encoding="utf-8") as fh:
            meta = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise CheckpointError(f"cannot read checkpoint meta {meta_path}: {exc}") from exc
    session.controller.load(os.path.join(path, "controller.bin"))
    tensors, ev_meta = load_tensors(os.path.join(path, "evaluator.bin"))
    if ev_meta.get("component") != "evaluator":
        raise CheckpointError(f"{path}: evaluator.bin is not an evaluator checkpoint")
    session.evaluator.load_state_tensors(tensors)
    rng_path = os.path.join(path, "rng.json")
    try:
        with open(rng_path, "r", encoding="utf-8") as fh:
            states = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise CheckpointError(f"cannot read rng state {rng_path}: {exc}") from exc
    session.set_rng_states({k: rng_state_from_json(v) for k, v in states.items()})
    return meta["epoch"]


def resume_search(session, train_dir, report=None):
    """Continue an interrupted run from its latest checkpoint to completion."""
    found = latest_checkpoint(train_dir)
    if found is None:
        raise CheckpointError(f"no checkpoint found under {train_dir}")
    epoch, path = found
    load_checkpoint(session, path)
    return session.trainer.run(
        session, train_dir=train_dir, start_epoch=epoch + 1, report=report
    )
