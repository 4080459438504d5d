"""Dense layers, a small MLP container, and an LSTM cell with manual backprop.

Everything is float64.  Layers cache what their backward pass needs; a
``forward`` must precede each ``backward`` on the same instance.  The
parameter/gradient lists returned by ``params()`` / ``grads()`` are aligned
so they can be handed straight to an optimizer.
"""

import numpy as np

from ..errors import NasforgeError
from . import kernels
from .kernels import ACTIVATION_CODES

ACTIVATIONS = tuple(ACTIVATION_CODES)


def init_weight(rng, out_size, in_size):
    """uniform(-1/sqrt(fan_in), +1/sqrt(fan_in))"""
    limit = 1.0 / np.sqrt(in_size)
    return rng.uniform(-limit, limit, size=(out_size, in_size))


def _as2d(x):
    x = np.asarray(x, dtype=np.float64)
    if x.ndim == 1:
        x = x.reshape(1, -1)
    if x.ndim != 2:
        raise NasforgeError(f"expected a 1-D or 2-D array, got ndim={x.ndim}")
    return x


class DenseLayer:
    """y = act(x @ W.T + b) with W (out, in)."""

    def __init__(self, in_size, out_size, activation="identity", rng=None):
        if activation not in ACTIVATION_CODES:
            raise NasforgeError(f"unknown activation {activation!r}")
        self.in_size = in_size
        self.out_size = out_size
        self.activation = activation
        self._act = ACTIVATION_CODES[activation]
        if rng is None:
            self.w = np.zeros((out_size, in_size))
        else:
            self.w = init_weight(rng, out_size, in_size)
        self.b = np.zeros(out_size)
        self.gw = np.zeros_like(self.w)
        self.gb = np.zeros_like(self.b)
        self._x = None
        self._y = None

    def forward(self, x):
        x = _as2d(x)
        if x.shape[1] != self.in_size:
            raise NasforgeError(
                f"dense layer expects {self.in_size} inputs, got {x.shape[1]}"
            )
        y = kernels.dense_forward(
            np.ascontiguousarray(x), np.ascontiguousarray(self.w), self.b, self._act
        )
        self._x = x
        self._y = y
        return y

    def backward(self, grad_y, accumulate=False):
        if self._y is None:
            raise NasforgeError("backward called before forward")
        grad_y = _as2d(grad_y)
        if grad_y.shape != self._y.shape:
            raise NasforgeError(
                f"grad shape {grad_y.shape} does not match output {self._y.shape}"
            )
        gx, gw, gb = kernels.dense_backward(
            np.ascontiguousarray(self._x),
            np.ascontiguousarray(self.w),
            self._y,
            np.ascontiguousarray(grad_y),
            self._act,
        )
        if accumulate:
            self.gw += gw
            self.gb += gb
        else:
            self.gw = gw
            self.gb = gb
        return gx

    def params(self):
        return [self.w, self.b]

    def grads(self):
        return [self.gw, self.gb]


class MLP:
    """A stack of dense layers."""

    def __init__(self, sizes, activations, rng):
        if len(sizes) < 2 or len(activations) != len(sizes) - 1:
            raise NasforgeError("sizes/activations mismatch")
        self.layers = [
            DenseLayer(sizes[i], sizes[i + 1], activations[i], rng)
            for i in range(len(sizes) - 1)
        ]

    def forward(self, x):
        for layer in self.layers:
            x = layer.forward(x)
        return x

    def backward(self, grad_y):
        for layer in reversed(self.layers):
            grad_y = layer.backward(grad_y)
        return grad_y

    def params(self):
        return [p for layer in self.layers for p in layer.params()]

    def grads(self):
        return [g for layer in self.layers for g in layer.grads()]


class LSTMCell:
    """Standard LSTM cell.

    Gate weights are stored stacked as w (4H, I+H) in i/f/g/o order; the
    per-gate blocks are exposed as views (w_i, w_f, w_g, w_o).  The forget
    gate bias starts at 1.0.  ``step`` returns a cache object that
    ``backward_step`` consumes, so arbitrarily long sequences can be
    backpropagated by replaying caches in reverse.
    """

    def __init__(self, input_size, hidden_size, rng):
        self.input_size = input_size
        self.hidden_size = hidden_size
        self.w = init_weight(rng, 4 * hidden_size, input_size + hidden_size)
        self.b = np.zeros(4 * hidden_size)
        self.b[hidden_size : 2 * hidden_size] = 1.0
        self.gw = np.zeros_like(self.w)
        self.gb = np.zeros_like(self.b)

    @property
    def w_i(self):
        return self.w[: self.hidden_size]

    @property
    def w_f(self):
        return self.w[self.hidden_size : 2 * self.hidden_size]

    @property
    def w_g(self):
        return self.w[2 * self.hidden_size : 3 * self.hidden_size]

    @property
    def w_o(self):
        return self.w[3 * self.hidden_size :]

    def zero_state(self, batch):
        return np.zeros((batch, self.hidden_size)), np.zeros((batch, self.hidden_size))

    def step(self, x, h_prev, c_prev):
        x = _as2d(x)
        if x.shape[1] != self.input_size:
            raise NasforgeError(
                f"lstm cell expects {self.input_size} inputs, got {x.shape[1]}"
            )
        if h_prev.shape != c_prev.shape or h_prev.shape[1] != self.hidden_size:
            raise NasforgeError("lstm state shape mismatch")
        xh = np.ascontiguousarray(np.concatenate((x, h_prev), axis=1))
        h, c, i_g, f_g, g_g, o_g, tc = kernels.lstm_forward(
            xh, np.ascontiguousarray(c_prev), np.ascontiguousarray(self.w), self.b
        )
        cache = (xh, c_prev, i_g, f_g, g_g, o_g, tc)
        return h, c, cache

    def backward_step(self, cache, grad_h, grad_c, accumulate=True):
        xh, c_prev, i_g, f_g, g_g, o_g, tc = cache
        grad_xh, grad_c_prev, gw, gb = kernels.lstm_backward(
            xh,
            np.ascontiguousarray(c_prev),
            np.ascontiguousarray(self.w),
            i_g,
            f_g,
            g_g,
            o_g,
            tc,
            np.ascontiguousarray(_as2d(grad_h)),
            np.ascontiguousarray(_as2d(grad_c)),
        )
        if accumulate:
            self.gw += gw
            self.gb += gb
        else:
            self.gw = gw
            self.gb = gb
        grad_x = grad_xh[:, : self.input_size]
        grad_h_prev = grad_xh[:, self.input_size :]
        return grad_x, grad_h_prev, grad_c_prev

    def zero_grads(self):
        self.gw[:] = 0.0
        self.gb[:] = 0.0

    def params(self):
        return [self.w, self.b]

    def grads(self):
        return [self.gw, self.gb]
