"""Scalar losses with analytic gradients."""

import numpy as np

from ..errors import NasforgeError


def mse(pred, target):
    """Mean of squared differences over all entries. Returns (loss, grad_pred)."""
    pred = np.asarray(pred, dtype=np.float64)
    target = np.asarray(target, dtype=np.float64)
    if pred.size == 0:
        raise NasforgeError("mse of empty input")
    if pred.shape != target.shape:
        raise NasforgeError(f"mse shape mismatch {pred.shape} vs {target.shape}")
    diff = pred - target
    loss = float(np.mean(diff * diff))
    grad = 2.0 * diff / diff.size
    return loss, grad


def softmax(logits):
    """Row-wise stabilized softmax (max subtraction)."""
    logits = np.asarray(logits, dtype=np.float64)
    squeeze = logits.ndim == 1
    if squeeze:
        logits = logits.reshape(1, -1)
    shifted = logits - logits.max(axis=1, keepdims=True)
    e = np.exp(shifted)
    p = e / e.sum(axis=1, keepdims=True)
    return p[0] if squeeze else p


def softmax_cross_entropy(logits, labels):
    """Mean cross-entropy of integer labels under softmax(logits).

    logits: (B, K) or (K,); labels: (B,) ints or a single int.
    Returns (loss, grad_logits).
    """
    logits = np.asarray(logits, dtype=np.float64)
    squeeze = logits.ndim == 1
    if squeeze:
        logits = logits.reshape(1, -1)
        labels = np.asarray([labels], dtype=np.int64)
    else:
        labels = np.asarray(labels, dtype=np.int64)
    if logits.size == 0:
        raise NasforgeError("cross-entropy of empty input")
    batch, k = logits.shape
    if labels.shape != (batch,):
        raise NasforgeError("labels must be one int per row")
    if np.any(labels < 0) or np.any(labels >= k):
        raise NasforgeError("label out of range")
    shifted = logits - logits.max(axis=1, keepdims=True)
    log_z = np.log(np.exp(shifted).sum(axis=1))
    log_p = shifted[np.arange(batch), labels] - log_z
    loss = float(-log_p.mean())
    grad = softmax(logits)
    grad[np.arange(batch), labels] -= 1.0
    grad /= batch
    return loss, (grad[0] if squeeze else grad)
