"""Network-cost prediction models: naive sum, linear (1/2-variant), MLP, LSTM.

All models consume a list of per-block features (see BlockFeature) and
predict one scalar network cost.  The linear models solve their normal
equations exactly; the MLP takes the zero-padded per-block cost vector and
the LSTM consumes the 9-feature vector of every block in execution order,
feeding its final hidden state through a dense head.  Learned models
z-score inputs and targets with statistics from the training split only.
"""

import numpy as np

from ..errors import FitError, NasforgeError
from ..nn.core import DenseLayer, LSTMCell, MLP
from ..nn.losses import mse
from ..nn.optim import Adam

LSTM_FEATURES = 9  # cost, in C/H/W, out C/H/W, kernel, stride


class Normalizer:
    """Per-column z-scoring; zero-variance columns pass through unscaled."""

    def __init__(self):
        self.mean = None
        self.std = None

    def fit(self, x):
        x = np.asarray(x, dtype=np.float64)
        self.mean = x.mean(axis=0)
        std = x.std(axis=0)
        std[std == 0.0] = 1.0
        self.std = std
        return self

    def transform(self, x):
        return (np.asarray(x, dtype=np.float64) - self.mean) / self.std

    def inverse(self, z):
        return np.asarray(z, dtype=np.float64) * self.std + self.mean


def _sums(features_list):
    return np.asarray([sum(f.cost for f in feats) for feats in features_list])


def _counts(features_list):
    return np.asarray([float(len(feats)) for feats in features_list])


class CostModel:
    kind = None

    def fit(self, features_list, targets, rng=None):
        raise NotImplementedError

    def predict_one(self, features):
        raise NotImplementedError

    def predict(self, features_list):
        return np.asarray([self.predict_one(f) for f in features_list])


class SumModel(CostModel):
    """Naive addition of block costs; no learned parameters."""

    kind = "sum"

    def fit(self, features_list, targets, rng=None):
        return {}

    def predict_one(self, features):
        if not features:
            raise NasforgeError("prediction on an empty block list")
        return float(sum(f.cost for f in features))


class LinearModel(CostModel):
    """Least squares on (S) or (S, n) via the normal equations."""

    def __init__(self, variant=1):
        if variant not in (1, 2):
            raise NasforgeError("linear variant must be 1 or 2")
        self.variant = variant
        self.kind = f"linear{variant}"
        self.coef = None

    def _design(self, features_list):
        s = _sums(features_list)
        cols = [s]
        if self.variant == 2:
            cols.append(_counts(features_list))
        cols.append(np.ones_like(s))
        return np.stack(cols, axis=1)

    def fit(self, features_list, targets, rng=None):
        x = self._design(features_list)
        y = np.asarray(targets, dtype=np.float64)
        xtx = x.T @ x
        xty = x.T @ y
        try:
            coef = np.linalg.solve(xtx, xty)
        except np.linalg.LinAlgError as exc:
            raise FitError(f"singular normal equations for {self.kind}: {exc}") from exc
        if not np.all(np.isfinite(coef)):
            raise FitError(f"non-finite solution for {self.kind}")
        self.coef = coef
        resid = x @ coef - y
        return {"train_mse": float(np.mean(resid**2))}

    def predict_one(self, features):
        if self.coef is None:
            raise NasforgeError(f"{self.kind} model is not fitted")
        if not features:
            raise NasforgeError("prediction on an empty block list")
        s = sum(f.cost for f in features)
        if self.variant == 1:
            return float(self.coef[0] * s + self.coef[1])
        return float(self.coef[0] * s + self.coef[1] * len(features) + self.coef[2])


class MLPCostModel(CostModel):
    """MLP over the zero-padded per-block cost vector."""

    kind = "mlp"

    def __init__(self, rng, pad_len=20, hidden=(64, 64), learning_rate=0.001, epochs=200, batch_size=64):
        self.pad_len = pad_len
        self.epochs = epochs
        self.batch_size = batch_size
        sizes = [pad_len] + list(hidden) + [1]
        activations = ["relu"] * len(hidden) + ["identity"]
        self.net = MLP(sizes, activations, rng)
        self.optimizer = Adam(learning_rate)
        self.x_norm = None
        self.y_norm = None

    def _pad(self, features):
        if len(features) > self.pad_len:
            raise NasforgeError(
                f"block count {len(features)} exceeds mlp padding length {self.pad_len}"
            )
        row = np.zeros(self.pad_len)
        for i, f in enumerate(features):
            row[i] = f.cost
        return row

    def fit(self, features_list, targets, rng=None):
        if rng is None:
            rng = np.random.default_rng(0)
        x_raw = np.stack([self._pad(f) for f in features_list])
        y_raw = np.asarray(targets, dtype=np.float64).reshape(-1, 1)
        self.x_norm = Normalizer().fit(x_raw)
        self.y_norm = Normalizer().fit(y_raw)
        x = self.x_norm.transform(x_raw)
        y = self.y_norm.transform(y_raw)
        initial_mse, _ = mse(self.predict(features_list), np.asarray(targets))
        n = x.shape[0]
        for _ in range(self.epochs):
            order = rng.permutation(n)
            for start in range(0, n, self.batch_size):
                idx = order[start : start + self.batch_size]
                pred = self.net.forward(x[idx])
                _, grad = mse(pred, y[idx])
                self.net.backward(grad)
                self.optimizer.step(self.net.params(), self.net.grads())
        final_mse, _ = mse(self.predict(features_list), np.asarray(targets))
        return {"initial_mse": initial_mse, "final_mse": final_mse}

    def predict_one(self, features):
        if self.x_norm is None:
            raise NasforgeError("mlp cost model is not fitted")
        if not features:
            raise NasforgeError("prediction on an empty block list")
        x = self.x_norm.transform(self._pad(features).reshape(1, -1))
        out = self.net.forward(x)
        return float(self.y_norm.inverse(out)[0, 0])


class LSTMCostModel(CostModel):
    """LSTM over per-block 9-feature vectors; final hidden state -> dense -> cost."""

    kind = "lstm"

    def __init__(self, rng, hidden_size=32, learning_rate=0.001, epochs=200, batch_size=64):
        self.hidden_size = hidden_size
        self.epochs = epochs
        self.batch_size = batch_size
        self.cell = LSTMCell(LSTM_FEATURES, hidden_size, rng)
        self.head = DenseLayer(hidden_size, 1, "identity", rng)
        self.optimizer = Adam(learning_rate)
        self.x_norm = None
        self.y_norm = None

    @staticmethod
    def _sequence(features):
        return np.asarray([f.vector() for f in features])

    def _params(self):
        return self.cell.params() + self.head.params()

    def _grads(self):
        return self.cell.grads() + self.head.grads()

    def _forward_batch(self, batch_x):
        """batch_x: (m, T, F) normalized, equal length. Returns (pred, caches)."""
        m = batch_x.shape[0]
        h, c = self.cell.zero_state(m)
        caches = []
        for t in range(batch_x.shape[1]):
            h, c, cache = self.cell.step(batch_x[:, t, :], h, c)
            caches.append(cache)
        pred = self.head.forward(h)
        return pred, caches

    def _backward_batch(self, caches, grad_pred):
        grad_h = self.head.backward(grad_pred)
        m = grad_h.shape[0]
        grad_c = np.zeros((m, self.hidden_size))
        self.cell.zero_grads()
        for cache in reversed(caches):
            _, grad_h, grad_c = self.cell.backward_step(cache, grad_h, grad_c)

    def fit(self, features_list, targets, rng=None):
        if rng is None:
            rng = np.random.default_rng(0)
        all_blocks = np.concatenate([self._sequence(f) for f in features_list])
        self.x_norm = Normalizer().fit(all_blocks)
        y_raw = np.asarray(targets, dtype=np.float64).reshape(-1, 1)
        self.y_norm = Normalizer().fit(y_raw)
        sequences = [self.x_norm.transform(self._sequence(f)) for f in features_list]
        y = self.y_norm.transform(y_raw)
        initial_mse, _ = mse(self.predict(features_list), np.asarray(targets))
        # bucket by sequence length so batches stack into one array
        by_length = {}
        for i, seq in enumerate(sequences):
            by_length.setdefault(seq.shape[0], []).append(i)
        stacked = {
            length: np.stack([sequences[i] for i in idx])
            for length, idx in by_length.items()
        }
        for _ in range(self.epochs):
            for length in sorted(by_length):
                idx = np.asarray(by_length[length])
                order = rng.permutation(len(idx))
                xs = stacked[length]
                for start in range(0, len(idx), self.batch_size):
                    sel = order[start : start + self.batch_size]
                    pred, caches = self._forward_batch(xs[sel])
                    _, grad = mse(pred, y[idx[sel]])
                    self._backward_batch(caches, grad)
                    self.optimizer.step(self._params(), self._grads())
        final_mse, _ = mse(self.predict(features_list), np.asarray(targets))
        return {"initial_mse": initial_mse, "final_mse": final_mse}

    def predict_one(self, features):
        if self.x_norm is None:
            raise NasforgeError("lstm cost model is not fitted")
        if not features:
            raise NasforgeError("prediction on an empty block list")
        x = self.x_norm.transform(self._sequence(features))[None, :, :]
        pred, _ = self._forward_batch(x)
        return float(self.y_norm.inverse(pred)[0, 0])


def make_model(kind, rng, epochs=None):
    """Factory used by the pipeline; epochs overrides the training budget."""
    if kind == "sum":
        return SumModel()
    if kind == "linear1":
        return LinearModel(1)
    if kind == "linear2":
        return LinearModel(2)
    if kind == "mlp":
        model = MLPCostModel(rng)
    elif kind == "lstm":
        model = LSTMCostModel(rng)
    else:
        raise NasforgeError(f"unknown cost model kind {kind!r}")
    if epochs is not None:
        model.epochs = epochs
    return model
