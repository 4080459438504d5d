"""Search trainers: the sequential loop and its thread-parallel variant.

One evaluation is always the same four calls in order: controller.sample ->
weights_manager.assemble_candidate -> evaluator.evaluate_rollout ->
controller.step.  The simple trainer runs them inline and additionally
trains the evaluator between epochs; the async trainer keeps a bounded set
of rollouts in flight across worker threads while the dispatcher thread
retains exclusive ownership of the controller (all step() calls happen on
it, in completion order).
"""

import json
import logging
import os
import time
from concurrent.futures import FIRST_COMPLETED, ThreadPoolExecutor, wait
from dataclasses import dataclass

from .config import Field
from .errors import NasforgeError
from .registry import ComponentKind, register

logger = logging.getLogger(__name__)


@dataclass
class TrainerConfig:
    epochs: int = 10
    controller_samples_per_epoch: int = 50
    evaluator_updates_per_epoch: int = 0
    derive_count: int = 5
    checkpoint_every: int = 0  # epochs; 0 disables periodic checkpoints

    def __post_init__(self):
        if self.epochs < 1:
            raise NasforgeError("epochs must be >= 1")
        for name in (
            "controller_samples_per_epoch",
            "evaluator_updates_per_epoch",
            "derive_count",
            "checkpoint_every",
        ):
            if getattr(self, name) < 0:
                raise NasforgeError(f"{name} must be >= 0")


@dataclass
class AsyncConfig:
    num_workers: int = 4
    max_inflight: int = 0  # 0 -> num_workers

    def __post_init__(self):
        if self.num_workers < 1:
            raise NasforgeError("num_workers must be >= 1")
        if self.max_inflight == 0:
            self.max_inflight = self.num_workers
        if self.max_inflight < 1:
            raise NasforgeError("max_inflight must be >= 1")


class SearchReport:
    """Evaluation records plus the running best; serializes to JSON lines."""

    def __init__(self):
        self.records = []
        self.best_genotype = None
        self.best_reward = None
        self.max_inflight_observed = 0
        self.failed = 0
        self.started = time.time()

    def add(self, epoch, step, genotype_str, reward, metrics, **extra):
        record = {
            "epoch": epoch,
            "step": step,
            "genotype": genotype_str,
            "reward": reward,
            "metrics": metrics,
        }
        record.update(extra)
        self.records.append(record)
        if reward is not None and (self.best_reward is None or reward > self.best_reward):
            self.best_reward = reward
            self.best_genotype = genotype_str

    def summary(self):
        return {
            "summary": True,
            "evaluations": len(self.records),
            "failed": self.failed,
            "best_genotype": self.best_genotype,
            "best_reward": self.best_reward,
            "wall_time_s": time.time() - self.started,
        }

    def write_jsonl(self, path):
        os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
        with open(path, "w", encoding="utf-8") as fh:
            for record in self.records:
                fh.write(json.dumps(record) + "\n")
            fh.write(json.dumps(self.summary()) + "\n")


def _evaluate_once(session, rollout):
    session.weights_manager.assemble_candidate(rollout)
    session.evaluator.evaluate_rollout(rollout)
    return rollout


_TRAINER_FIELDS = (
    Field("epochs", "int", 10, "search epochs"),
    Field("controller_samples_per_epoch", "int", 50, "evaluations per epoch"),
    Field("evaluator_updates_per_epoch", "int", 0, "evaluator update calls per epoch"),
    Field("derive_count", "int", 5, "genotypes emitted by derive"),
    Field("checkpoint_every", "int", 0, "checkpoint every k epochs (0 = off)"),
)


@register(ComponentKind.TRAINER, "simple")
class SimpleTrainer:
    CONFIG_FIELDS = _TRAINER_FIELDS

    def __init__(self, trainer_config):
        self.cfg = trainer_config

    @classmethod
    def from_config(cls, cfg, ctx):
        return cls(
            TrainerConfig(
                epochs=cfg["epochs"],
                controller_samples_per_epoch=cfg["controller_samples_per_epoch"],
                evaluator_updates_per_epoch=cfg["evaluator_updates_per_epoch"],
                derive_count=cfg["derive_count"],
                checkpoint_every=cfg["checkpoint_every"],
            )
        )

    def run(self, session, train_dir=None, stop_after_epoch=None, start_epoch=0, report=None):
        from .checkpoint import save_checkpoint

        cfg = self.cfg
        report = report or SearchReport()
        space = session.search_space
        for epoch in range(start_epoch, cfg.epochs):
            epoch_rewards = []
            for step in range(cfg.controller_samples_per_epoch):
                try:
                    rollout = session.controller.sample(1, mode="explore")[0]
                    _evaluate_once(session, rollout)
                    session.controller.step([rollout])
                except NasforgeError as exc:
                    raise NasforgeError(
                        f"search aborted at epoch {epoch} step {step}: {exc}"
                    ) from exc
                reward = rollout.perf["reward"]
                epoch_rewards.append(reward)
                report.add(
                    epoch,
                    step,
                    space.genotype_to_string(rollout.genotype),
                    reward,
                    {k: v for k, v in rollout.perf.items() if k != "reward"},
                )
            for k in range(cfg.evaluator_updates_per_epoch):
                try:
                    session.evaluator.update(session.controller)
                except NasforgeError as exc:
                    raise NasforgeError(
                        f"evaluator update failed at epoch {epoch} call {k}: {exc}"
                    ) from exc
            if epoch_rewards:
                logger.info(
                    "epoch %d: mean reward %.4f, best so far %.4f",
                    epoch,
                    sum(epoch_rewards) / len(epoch_rewards),
                    report.best_reward,
                )
            if (
                train_dir
                and cfg.checkpoint_every
                and (epoch + 1) % cfg.checkpoint_every == 0
            ):
                save_checkpoint(train_dir, epoch, session)
            if stop_after_epoch is not None and epoch >= stop_after_epoch:
                return report
        if train_dir:
            save_checkpoint(train_dir, cfg.epochs - 1, session)
            report.write_jsonl(os.path.join(train_dir, "search_log.jsonl"))
        return report


@register(ComponentKind.TRAINER, "async")
class AsyncTrainer:
    CONFIG_FIELDS = _TRAINER_FIELDS + (
        Field("num_workers", "int", 4, "worker threads"),
        Field("max_inflight", "int", 0, "outstanding rollout bound (0 = num_workers)"),
    )

    def __init__(self, trainer_config, async_config):
        self.cfg = trainer_config
        self.acfg = async_config

    @classmethod
    def from_config(cls, cfg, ctx):
        return cls(
            TrainerConfig(
                epochs=cfg["epochs"],
                controller_samples_per_epoch=cfg["controller_samples_per_epoch"],
                evaluator_updates_per_epoch=cfg["evaluator_updates_per_epoch"],
                derive_count=cfg["derive_count"],
                checkpoint_every=cfg["checkpoint_every"],
            ),
            AsyncConfig(num_workers=cfg["num_workers"], max_inflight=cfg["max_inflight"]),
        )

    def run(self, session, train_dir=None, stop_after_epoch=None, start_epoch=0, report=None):
        from .checkpoint import save_checkpoint

        cfg = self.cfg
        acfg = self.acfg
        if not getattr(session.evaluator, "supports_concurrent_evaluation", True):
            raise NasforgeError(
                "async search requires an evaluator that is safe for concurrent "
                "evaluation (the supernet evaluator is not)"
            )
        if cfg.evaluator_updates_per_epoch:
            raise NasforgeError("async search does not run evaluator updates")
        report = report or SearchReport()
        space = session.search_space
        budget = cfg.epochs * cfg.controller_samples_per_epoch
        samples_per_epoch = max(1, cfg.controller_samples_per_epoch)
        completed = 0
        dispatched = 0
        pending = {}  # future -> (rollout, attempt, version_at_dispatch)

        with ThreadPoolExecutor(max_workers=acfg.num_workers) as pool:
            while completed < budget:
                while dispatched < budget and len(pending) < acfg.max_inflight:
                    rollout = session.controller.sample(1, mode="explore")[0]
                    session.weights_manager.assemble_candidate(rollout)
                    future = pool.submit(session.evaluator.evaluate_rollout, rollout)
                    pending[future] = (rollout, 0, completed)
                    dispatched += 1
                    report.max_inflight_observed = max(
                        report.max_inflight_observed, len(pending)
                    )
                done, _ = wait(pending, return_when=FIRST_COMPLETED)
                for future in done:
                    rollout, attempt, version = pending.pop(future)
                    error = future.exception()
                    if error is not None:
                        if attempt == 0:  # retry once
                            fresh = rollout.copy_unevaluated()
                            retry = pool.submit(session.evaluator.evaluate_rollout, fresh)
                            pending[retry] = (fresh, 1, version)
                            continue
                        epoch, step = divmod(completed, samples_per_epoch)
                        report.failed += 1
                        report.add(
                            epoch,
                            step,
                            space.genotype_to_string(rollout.genotype),
                            None,
                            {},
                            failed=str(error),
                            staleness=completed - version,
                        )
                        completed += 1
                        continue
                    session.controller.step([rollout])
                    epoch, step = divmod(completed, samples_per_epoch)
                    report.add(
                        epoch,
                        step,
                        space.genotype_to_string(rollout.genotype),
                        rollout.perf["reward"],
                        {k: v for k, v in rollout.perf.items() if k != "reward"},
                        staleness=completed - version,
                        inflight=len(pending),
                    )
                    completed += 1
        if train_dir:
            save_checkpoint(train_dir, cfg.epochs - 1, session)
            report.write_jsonl(os.path.join(train_dir, "search_log.jsonl"))
        return report
