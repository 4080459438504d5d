from .core import LSTMCell, MLP, DenseLayer, init_weight
from .gradcheck import check_gradient, max_relative_error, numeric_gradient
from .losses import mse, softmax, softmax_cross_entropy
from .optim import SGD, Adam
from .tensor_io import load_tensors, save_tensors

__all__ = [
    "Adam",
    "DenseLayer",
    "LSTMCell",
    "MLP",
    "SGD",
    "check_gradient",
    "init_weight",
    "load_tensors",
    "max_relative_error",
    "mse",
    "numeric_gradient",
    "save_tensors",
    "softmax",
    "softmax_cross_entropy",
]
