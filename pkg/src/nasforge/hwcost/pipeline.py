"""End-to-end cost modeling: sample genotypes, fit models, compare rMSE.

rMSE here is the root-mean-squared error between predicted and true network
cost, in the device's native units.  The report lists each model with its
improvement ratio over naive addition (rmse_sum / rmse_model).
"""

import csv
import os
from dataclasses import dataclass, field

import numpy as np

from ..errors import NasforgeError
from ..spaces.blockwise import BlockwiseSpace
from .models import make_model
from .profiling import profile_primitives
from .simulator import DeviceSimulator

DEFAULT_MODELS = ("sum", "linear1", "linear2", "mlp", "lstm")


@dataclass
class CostSample:
    genotype: tuple
    features: list
    true_cost: float


@dataclass
class CostDataset:
    samples: list
    train_idx: list
    test_idx: list

    def split(self, which):
        idx = self.train_idx if which == "train" else self.test_idx
        feats = [self.samples[i].features for i in idx]
        targets = np.asarray([self.samples[i].true_cost for i in idx])
        return feats, targets


def build_cost_dataset(space, device, table, n_train, n_test, rng):
    """Sample n_train + n_test distinct genotypes with features and true costs."""
    if n_train < 1 or n_test < 1:
        raise NasforgeError("n_train and n_test must be >= 1")
    total = n_train + n_test
    if space.size() < total:
        raise NasforgeError(
            f"space holds {space.size()} programs, cannot draw {total} distinct"
        )
    seen = set()
    samples = []
    while len(samples) < total:
        genotype = space.canonicalize(space.random_genotype(rng))
        if genotype in seen:
            continue
        seen.add(genotype)
        features = space.block_features(genotype, table)
        true_cost = device.network_cost([f.cost for f in features])
        samples.append(CostSample(genotype, features, true_cost))
    return CostDataset(
        samples=samples,
        train_idx=list(range(n_train)),
        test_idx=list(range(n_train, total)),
    )


def evaluate_rmse(model, features_list, targets):
    targets = np.asarray(targets, dtype=np.float64)
    if targets.size == 0:
        raise NasforgeError("rmse of an empty split")
    pred = model.predict(features_list)
    return float(np.sqrt(np.mean((pred - targets) ** 2)))


@dataclass
class CostReport:
    device_name: str
    metric: str
    rows: list = field(default_factory=list)  # (model, rmse, improvement_vs_sum)
    scatter: dict = field(default_factory=dict)  # model -> (pred, truth) arrays
    fit_stats: dict = field(default_factory=dict)

    def rmse(self, model_kind):
        for name, rmse, _ in self.rows:
            if name == model_kind:
                return rmse
        raise KeyError(model_kind)

    def improvement(self, model_kind):
        for name, _, ratio in self.rows:
            if name == model_kind:
                return ratio
        raise KeyError(model_kind)

    def to_text(self):
        lines = [
            f"device: {self.device_name}  metric: {self.metric}",
            f"{'model':<10}{'rmse':>12}{'vs naive sum':>16}",
        ]
        for name, rmse, ratio in self.rows:
            lines.append(f"{name:<10}{rmse:>12.4f}{ratio:>15.2f}x")
        return "\n".join(lines)

    def write_files(self, out_dir):
        os.makedirs(out_dir, exist_ok=True)
        with open(os.path.join(out_dir, "report.csv"), "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["model", "rmse", "improvement_vs_sum"])
            for name, rmse, ratio in self.rows:
                writer.writerow([name, repr(rmse), repr(ratio)])
        with open(os.path.join(out_dir, "report.txt"), "w") as fh:
            fh.write(self.to_text() + "\n")
        for name, (pred, truth) in self.scatter.items():
            with open(os.path.join(out_dir, f"scatter_{name}.csv"), "w", newline="") as fh:
                writer = csv.writer(fh)
                writer.writerow(["pred", "truth"])
                for p, t in zip(pred, truth):
                    writer.writerow([repr(float(p)), repr(float(t))])


def compare_report(models, dataset, device_name="", metric=""):
    """Evaluate fitted models on the test split; rows sorted as given."""
    feats, targets = dataset.split("test")
    rows = []
    scatter = {}
    rmse_by_name = {}
    for name, model in models.items():
        rmse_by_name[name] = evaluate_rmse(model, feats, targets)
        scatter[name] = (model.predict(feats), targets)
    sum_rmse = rmse_by_name.get("sum")
    for name in models:
        rmse = rmse_by_name[name]
        ratio = (sum_rmse / rmse) if (sum_rmse and rmse > 0) else float("inf")
        rows.append((name, rmse, ratio))
    return CostReport(device_name=device_name, metric=metric, rows=rows, scatter=scatter)


def run_cost_pipeline(
    device_kind,
    seed=0,
    space=None,
    n_train=2000,
    n_test=1000,
    model_kinds=DEFAULT_MODELS,
    epochs=None,
    noise_sigma=0.01,
):
    """profile -> dataset -> fit -> report, fully determined by the seed."""
    space = space or BlockwiseSpace()
    device = DeviceSimulator(device_kind, noise_sigma=noise_sigma, seed=seed)
    table = profile_primitives(space, device)
    root = np.random.SeedSequence([seed, 0xC057])
    sample_ss, *model_ss = root.spawn(1 + 2 * len(model_kinds))
    sample_rng = np.random.Generator(np.random.PCG64(sample_ss))
    dataset = build_cost_dataset(space, device, table, n_train, n_test, sample_rng)
    train_feats, train_targets = dataset.split("train")
    models = {}
    fit_stats = {}
    for i, kind in enumerate(model_kinds):
        init_rng = np.random.Generator(np.random.PCG64(model_ss[2 * i]))
        fit_rng = np.random.Generator(np.random.PCG64(model_ss[2 * i + 1]))
        model = make_model(kind, init_rng, epochs=epochs)
        fit_stats[kind] = model.fit(train_feats, train_targets, rng=fit_rng)
        models[kind] = model
    report = compare_report(models, dataset, device_name=device.name, metric=device.metric)
    report.fit_stats = fit_stats
    return report
