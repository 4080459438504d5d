"""Central finite-difference gradient checking."""

import numpy as np


def numeric_gradient(f, x, h=1e-5):
    """Central-difference gradient of scalar-valued f at array x."""
    x = np.asarray(x, dtype=np.float64)
    grad = np.zeros_like(x)
    flat = x.reshape(-1)
    gflat = grad.reshape(-1)
    for k in range(flat.size):
        orig = flat[k]
        flat[k] = orig + h
        fp = f(x)
        flat[k] = orig - h
        fm = f(x)
        flat[k] = orig
        gflat[k] = (fp - fm) / (2.0 * h)
    return grad


def max_relative_error(a, b, floor=1e-8):
    """max |a-b| / max(|a|, |b|) elementwise, treating both-tiny entries as exact."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    denom = np.maximum(np.abs(a), np.abs(b))
    err = np.abs(a - b)
    safe = denom > floor
    rel = np.zeros_like(err)
    rel[safe] = err[safe] / denom[safe]
    return float(rel.max()) if rel.size else 0.0


def check_gradient(f, x, analytic, h=1e-5, floor=1e-8):
    """Compare analytic grad of scalar f at x against central differences."""
    numeric = numeric_gradient(f, x, h=h)
    return max_relative_error(analytic, numeric, floor=floor)
