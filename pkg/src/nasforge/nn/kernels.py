"""Module-level binding of the selected kernel backend.

Importing this module resolves the backend once (see backend.py); the rest
of the package calls ``kernels.dense_forward`` etc. without caring which
path is active.
"""

from ._kernel_impl import ACT_IDENTITY, ACT_RELU, ACT_SIGMOID, ACT_TANH
from .backend import active_backend_name, load_kernels

_K = load_kernels()

BACKEND = active_backend_name()

dense_forward = _K.dense_forward
dense_backward = _K.dense_backward
lstm_forward = _K.lstm_forward
lstm_backward = _K.lstm_backward
adam_update = _K.adam_update

ACTIVATION_CODES = {
    "identity": ACT_IDENTITY,
    "relu": ACT_RELU,
    "tanh": ACT_TANH,
    "sigmoid": ACT_SIGMOID,
}
