"""Reference implementations of the hot numeric kernels.

Every function here is written in the numba-compilable subset of numpy
(2-D float64 arrays, explicit loops for the elementwise parts, np.dot for
the matmuls) so the exact same source serves as the pure-numpy fallback
and as the body handed to ``numba.njit``.  Keep new code in that subset.

Activation codes: 0 identity, 1 relu, 2 tanh, 3 sigmoid.
"""

import numpy as np

ACT_IDENTITY = 0
ACT_RELU = 1
ACT_TANH = 2
ACT_SIGMOID = 3


def dense_forward(x, w, b, act):
    """act(x @ w.T + b) for x (B,I), w (O,I), b (O,). Returns post-activation (B,O)."""
    z = np.dot(x, w.T)
    out = np.empty_like(z)
    for i in range(z.shape[0]):
        for j in range(z.shape[1]):
            v = z[i, j] + b[j]
            if act == 1:
                out[i, j] = v if v > 0.0 else 0.0
            elif act == 2:
                out[i, j] = np.tanh(v)
            elif act == 3:
                out[i, j] = 1.0 / (1.0 + np.exp(-v))
            else:
                out[i, j] = v
    return out


def dense_backward(x, w, y, grad_y, act):
    """Gradients of a dense_forward call.

    ``y`` is the cached post-activation output; all activation derivatives
    are expressible from it.  Returns (grad_x, grad_w, grad_b).
    """
    gz = np.empty_like(grad_y)
    for i in range(grad_y.shape[0]):
        for j in range(grad_y.shape[1]):
            g = grad_y[i, j]
            if act == 1:
                gz[i, j] = g if y[i, j] > 0.0 else 0.0
            elif act == 2:
                gz[i, j] = g * (1.0 - y[i, j] * y[i, j])
            elif act == 3:
                gz[i, j] = g * y[i, j] * (1.0 - y[i, j])
            else:
                gz[i, j] = g
    grad_x = np.dot(gz, w)
    grad_w = np.dot(gz.T, x)
    grad_b = np.sum(gz, axis=0)
    return grad_x, grad_w, grad_b


def lstm_forward(xh, c_prev, w, b):
    """One LSTM cell step on a batch.

    xh (B, I+H) is the concatenated [input, h_prev]; w (4H, I+H) stacks the
    input/forget/candidate/output gate blocks row-wise; b (4H,).
    Returns (h, c, i, f, g, o, tc) where tc = tanh(c) is cached for backward.
    """
    hidden = w.shape[0] // 4
    z = np.dot(xh, w.T)
    batch = xh.shape[0]
    i_g = np.empty((batch, hidden))
    f_g = np.empty((batch, hidden))
    g_g = np.empty((batch, hidden))
    o_g = np.empty((batch, hidden))
    c = np.empty((batch, hidden))
    tc = np.empty((batch, hidden))
    h = np.empty((batch, hidden))
    for r in range(batch):
        for j in range(hidden):
            iv = 1.0 / (1.0 + np.exp(-(z[r, j] + b[j])))
            fv = 1.0 / (1.0 + np.exp(-(z[r, hidden + j] + b[hidden + j])))
            gv = np.tanh(z[r, 2 * hidden + j] + b[2 * hidden + j])
            ov = 1.0 / (1.0 + np.exp(-(z[r, 3 * hidden + j] + b[3 * hidden + j])))
            cv = fv * c_prev[r, j] + iv * gv
            tv = np.tanh(cv)
            i_g[r, j] = iv
            f_g[r, j] = fv
            g_g[r, j] = gv
            o_g[r, j] = ov
            c[r, j] = cv
            tc[r, j] = tv
            h[r, j] = ov * tv
    return h, c, i_g, f_g, g_g, o_g, tc


def lstm_backward(xh, c_prev, w, i_g, f_g, g_g, o_g, tc, grad_h, grad_c):
    """Backward of one LSTM cell step.

    Returns (grad_xh, grad_c_prev, grad_w, grad_b).
    """
    hidden = w.shape[0] // 4
    batch = xh.shape[0]
    dz = np.empty((batch, 4 * hidden))
    grad_c_prev = np.empty((batch, hidden))
    for r in range(batch):
        for j in range(hidden):
            do = grad_h[r, j] * tc[r, j]
            dc = grad_c[r, j] + grad_h[r, j] * o_g[r, j] * (1.0 - tc[r, j] * tc[r, j])
            di = dc * g_g[r, j]
            df = dc * c_prev[r, j]
            dg = dc * i_g[r, j]
            grad_c_prev[r, j] = dc * f_g[r, j]
            dz[r, j] = di * i_g[r, j] * (1.0 - i_g[r, j])
            dz[r, hidden + j] = df * f_g[r, j] * (1.0 - f_g[r, j])
            dz[r, 2 * hidden + j] = dg * (1.0 - g_g[r, j] * g_g[r, j])
            dz[r, 3 * hidden + j] = do * o_g[r, j] * (1.0 - o_g[r, j])
    grad_xh = np.dot(dz, w)
    grad_w = np.dot(dz.T, xh)
    grad_b = np.sum(dz, axis=0)
    return grad_xh, grad_c_prev, grad_w, grad_b


def adam_update(p, g, m, v, lr, beta1, beta2, eps, t):
    """In-place Adam step on flat float64 arrays; t is the 1-based step count."""
    bc1 = 1.0 - beta1 ** t
    bc2 = 1.0 - beta2 ** t
    for k in range(p.shape[0]):
        m[k] = beta1 * m[k] + (1.0 - beta1) * g[k]
        v[k] = beta2 * v[k] + (1.0 - beta2) * g[k] * g[k]
        p[k] -= lr * (m[k] / bc1) / (np.sqrt(v[k] / bc2) + eps)


KERNEL_NAMES = (
    "dense_forward",
    "dense_backward",
    "lstm_forward",
    "lstm_backward",
    "adam_update",
)
