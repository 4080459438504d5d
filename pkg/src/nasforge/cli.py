"""The ``nasforge`` command-line tool.

Exit codes: 0 success, 1 usage error, 2 config/validation error, 3 runtime
failure.  Checkpoints and derived files default into --train-dir; when no
directory is given, NASFORGE_HOME (default ~/.nasforge) is used.
"""

import argparse
import logging
import os
import sys

from .checkpoint import latest_checkpoint, load_checkpoint, resume_search
from .config import load_config
from .errors import (
    BuildError,
    ConfigError,
    GenotypeError,
    NasforgeError,
    UsageError,
)
from .registry import GLOBAL_REGISTRY, ComponentKind
from .sampleconfig import gen_final_sample_config, gen_sample_config
from .session import assemble_session, kind_stream
from .trainer import AsyncConfig, AsyncTrainer
from .workflows import (
    build_final_parts,
    derive,
    eval_arch,
    final_train,
    load_final_config,
    read_arch_file,
    save_final_model,
    test_final_model,
)

logger = logging.getLogger(__name__)


def default_home():
    return os.environ.get("NASFORGE_HOME", os.path.expanduser("~/.nasforge"))


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def build_parser():
    parser = _Parser(prog="nasforge", description=__doc__)
    sub = parser.add_subparsers(dest="command", metavar="SUBCOMMAND")
    sub.required = True

    def add(name, help_text, func):
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(func=func)
        return p

    p = add("search", "search for architectures", cmd_search)
    p.add_argument("--config", required=True, help="search config file")
    p.add_argument("--train-dir", default=None, help="checkpoint/log directory")
    p.add_argument("--epochs", type=int, default=None, help="override config epochs")
    p.add_argument("--resume", action="store_true", help="resume from latest checkpoint")

    p = add("mpsearch", "search with parallel evaluation workers", cmd_mpsearch)
    p.add_argument("--config", required=True)
    p.add_argument("--train-dir", default=None)
    p.add_argument("--epochs", type=int, default=None)
    p.add_argument("--workers", type=int, default=None, help="worker threads")
    p.add_argument("--max-inflight", type=int, default=None, help="outstanding rollout bound")

    p = add("random-sample", "sample architectures uniformly at random", cmd_random_sample)
    p.add_argument("--config", required=True)
    p.add_argument("-n", type=int, default=1, help="number of samples")

    p = add("sample", "sample architectures with the configured controller", cmd_sample)
    p.add_argument("--config", required=True)
    p.add_argument("-n", type=int, default=1)
    p.add_argument("--train-dir", default=None, help="load controller state from here")

    p = add("derive", "derive the best architectures from trained components", cmd_derive)
    p.add_argument("--config", required=True)
    p.add_argument("-n", type=int, default=None, help="count (default: trainer derive_count)")
    p.add_argument("--train-dir", default=None, help="load controller state from here")
    p.add_argument("--out", default=None, help="write a genotype file here")

    p = add("eval-arch", "evaluate every architecture in a genotype file", cmd_eval_arch)
    p.add_argument("--config", required=True)
    p.add_argument("--archs", required=True, help="genotype file (YAML, key 'archs')")

    p = add("train", "train a derived architecture from scratch", cmd_train)
    p.add_argument("--config", required=True, help="final-training config file")
    p.add_argument("--arch", default=None, help="genotype string")
    p.add_argument("--arch-file", default=None, help="genotype file; takes the first entry")
    p.add_argument("--out", default=None, help="save the trained model here")

    p = add("test", "evaluate a final-trained model", cmd_test)
    p.add_argument("--config", required=True, help="final-training config file")
    p.add_argument("--model", required=True, help="model file from 'train --out'")

    add("gen-sample-config", "print a commented default search config", cmd_gen_sample)
    add(
        "gen-final-sample-config",
        "print a commented default final-training config",
        cmd_gen_final_sample,
    )
    add("registry", "print all registered components", cmd_registry)
    return parser


def _session_from_args(args):
    config = load_config(args.config)
    session = assemble_session(config)
    if getattr(args, "epochs", None):
        session.trainer.cfg.epochs = args.epochs
    return session


def _maybe_load_checkpoint(session, train_dir):
    if not train_dir:
        return False
    found = latest_checkpoint(train_dir)
    if found is None:
        return False
    load_checkpoint(session, found[1])
    return True


def _print_report(report):
    summary = report.summary()
    print(f"evaluations: {summary['evaluations']}  failed: {summary['failed']}")
    print(f"best: {summary['best_genotype']}  reward={summary['best_reward']:.6g}")


def cmd_search(args):
    session = _session_from_args(args)
    train_dir = args.train_dir or os.path.join(default_home(), "run")
    if args.resume:
        report = resume_search(session, train_dir)
    else:
        report = session.trainer.run(session, train_dir=train_dir)
    _print_report(report)
    return 0


def cmd_mpsearch(args):
    session = _session_from_args(args)
    trainer = session.trainer
    if not isinstance(trainer, AsyncTrainer):
        trainer = AsyncTrainer(trainer.cfg, AsyncConfig())
    if args.workers:
        trainer.acfg = AsyncConfig(
            num_workers=args.workers, max_inflight=args.max_inflight or 0
        )
    elif args.max_inflight:
        trainer.acfg = AsyncConfig(
            num_workers=trainer.acfg.num_workers, max_inflight=args.max_inflight
        )
    train_dir = args.train_dir or os.path.join(default_home(), "run")
    report = trainer.run(session, train_dir=train_dir)
    _print_report(report)
    return 0


def cmd_random_sample(args):
    session = _session_from_args(args)
    if args.n < 1:
        raise UsageError("-n must be >= 1")
    rng = kind_stream(session.seed, ComponentKind.SEARCH_SPACE)
    for _ in range(args.n):
        genotype = session.search_space.random_genotype(rng)
        print(session.search_space.genotype_to_string(genotype))
    return 0


def cmd_sample(args):
    session = _session_from_args(args)
    if args.n < 1:
        raise UsageError("-n must be >= 1")
    _maybe_load_checkpoint(session, args.train_dir)
    for rollout in session.controller.sample(args.n, mode="explore"):
        print(session.search_space.genotype_to_string(rollout.genotype))
    return 0


def cmd_derive(args):
    session = _session_from_args(args)
    n = args.n if args.n is not None else session.trainer.cfg.derive_count
    if n < 1:
        raise UsageError("-n must be >= 1")
    _maybe_load_checkpoint(session, args.train_dir)
    records = derive(session, n, out_path=args.out)
    for arch, perf in records:
        print(f"{arch}  reward={perf['reward']:.6g}")
    return 0


def cmd_eval_arch(args):
    session = _session_from_args(args)
    failures = 0
    for record in eval_arch(session, args.archs):
        if "error" in record:
            failures += 1
            print(f"line {record['line']}: {record['arch']}  error: {record['error']}")
        else:
            perf = record["perf"]
            metrics = "  ".join(f"{k}={v:.6g}" for k, v in sorted(perf.items()))
            print(f"line {record['line']}: {record['arch']}  {metrics}")
    logger.info("eval-arch finished with %d failing entries", failures)
    return 0


def _genotype_from_args(args, space):
    if bool(args.arch) == bool(args.arch_file):
        raise UsageError("provide exactly one of --arch or --arch-file")
    if args.arch:
        return space.parse_genotype(args.arch)
    entries = read_arch_file(args.arch_file)
    if not entries:
        raise ConfigError(f"{args.arch_file}: no entries")
    return space.parse_genotype(entries[0][1])


def cmd_train(args):
    final_cfg = load_final_config(args.config)
    space, dataset = build_final_parts(final_cfg)
    genotype = _genotype_from_args(args, space)
    model, metrics = final_train(
        genotype,
        space,
        dataset,
        steps=final_cfg["train"]["steps"],
        learning_rate=final_cfg["train"]["learning_rate"],
        seed=final_cfg["seed"],
    )
    arch = space.genotype_to_string(genotype)
    print(f"{arch}  held_out_mse={metrics['held_out_mse']:.6g}")
    if args.out:
        save_final_model(args.out, model, space, genotype, metrics)
        print(f"model saved to {args.out}")
    return 0


def cmd_test(args):
    final_cfg = load_final_config(args.config)
    result = test_final_model(args.model, final_cfg)
    print(f"{result['arch']}  held_out_mse={result['held_out_mse']:.6g}")
    return 0


def cmd_gen_sample(args):
    sys.stdout.write(gen_sample_config())
    return 0


def cmd_gen_final_sample(args):
    sys.stdout.write(gen_final_sample_config())
    return 0


def cmd_registry(args):
    print(f"{'kind':<16} {'name'}")
    for (kind, name), _cls in GLOBAL_REGISTRY.items():
        print(f"{kind.value:<16} {name}")
    return 0


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(str(exc), file=sys.stderr)
        return 1
    except SystemExit as exc:  # argparse --help exits 0
        return int(exc.code or 0)
    try:
        rc = args.func(args)
        return 0 if rc is None else rc
    except UsageError as exc:
        print(str(exc), file=sys.stderr)
        return 1
    except (ConfigError, GenotypeError, BuildError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except NasforgeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except Exception as exc:  # pragma: no cover - last-resort mapping
        print(f"unexpected error: {exc}", file=sys.stderr)
        return 3


def entry():
    logging.basicConfig(level=os.environ.get("NASFORGE_LOGLEVEL", "WARNING"))
    sys.exit(main())


if __name__ == "__main__":
    entry()
