"""SGD and Adam, updating parameter arrays in place."""

import numpy as np

from ..errors import NasforgeError
from . import kernels


def _check_finite(grads):
    for g in grads:
        if not np.all(np.isfinite(g)):
            raise NasforgeError("non-finite gradient")


class SGD:
    def __init__(self, learning_rate):
        self.learning_rate = learning_rate
        self.step_count = 0

    def step(self, params, grads):
        if len(params) != len(grads):
            raise NasforgeError("params/grads length mismatch")
        _check_finite(grads)
        self.step_count += 1
        for p, g in zip(params, grads):
            if p.shape != g.shape:
                raise NasforgeError("param/grad shape mismatch")
            p -= self.learning_rate * g
        return params

    def state_dict(self):
        return {"kind": "sgd", "learning_rate": self.learning_rate, "step_count": self.step_count}

    def load_state_dict(self, state):
        self.learning_rate = state["learning_rate"]
        self.step_count = state["step_count"]


class Adam:
    """Adam with bias correction (beta1=0.9, beta2=0.999, eps=1e-8)."""

    def __init__(self, learning_rate, beta1=0.9, beta2=0.999, eps=1e-8):
        self.learning_rate = learning_rate
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self.step_count = 0
        self._m = None
        self._v = None

    def _init_moments(self, params):
        self._m = [np.zeros_like(p) for p in params]
        self._v = [np.zeros_like(p) for p in params]

    def step(self, params, grads):
        if len(params) != len(grads):
            raise NasforgeError("params/grads length mismatch")
        _check_finite(grads)
        if self._m is None:
            self._init_moments(params)
        if len(self._m) != len(params):
            raise NasforgeError("optimizer bound to a different parameter set")
        self.step_count += 1
        for p, g, m, v in zip(params, grads, self._m, self._v):
            if p.shape != g.shape:
                raise NasforgeError("param/grad shape mismatch")
            if not p.flags["C_CONTIGUOUS"]:
                # reshape(-1) would copy and the update would be lost
                raise NasforgeError("adam requires contiguous parameter arrays")
            kernels.adam_update(
                p.reshape(-1),
                np.ascontiguousarray(g.reshape(-1)),
                m.reshape(-1),
                v.reshape(-1),
                self.learning_rate,
                self.beta1,
                self.beta2,
                self.eps,
                self.step_count,
            )
        return params

    def moment_tensors(self):
        """Flat list [m0, v0, m1, v1, ...] for checkpointing; empty before the first step."""
        if self._m is None:
            return []
        out = []
        for m, v in zip(self._m, self._v):
            out.append(m)
            out.append(v)
        return out

    def load_moments(self, tensors, params):
        if not tensors:
            self._m = None
            self._v = None
            return
        if len(tensors) != 2 * len(params):
            raise NasforgeError("adam moment count mismatch")
        self._m = [np.array(tensors[2 * i]) for i in range(len(params))]
        self._v = [np.array(tensors[2 * i + 1]) for i in range(len(params))]

    def state_dict(self):
        return {
            "kind": "adam",
            "learning_rate": self.learning_rate,
            "beta1": self.beta1,
            "beta2": self.beta2,
            "eps": self.eps,
            "step_count": self.step_count,
        }

    def load_state_dict(self, state):
        self.learning_rate = state["learning_rate"]
        self.beta1 = state["beta1"]
        self.beta2 = state["beta2"]
        self.eps = state["eps"]
        self.step_count = state["step_count"]
