"""Synthetic device simulator standing in for real profiling hardware.

Primitive cost is proportional to the block's multiply-accumulate count
(scaled to O(1) units), with a deterministic per-primitive jitter of +/-10%
keyed on (seed, primitive key).  Whole-network cost is deliberately
non-additive:

    gpu_like  latency: T = c0 + c1*S + c2*sqrt(sum(l_i^2)) + c3*n
    fpga_like energy:  E = c0 + c1*S + c2*S^0.85

with S = sum(l_i), n = block count, then multiplied by (1 + sigma*eps)
where eps is a standard normal drawn deterministically from (seed, the
block costs).  Everything is a pure function of seed + inputs, so repeated
calls and parallel callers agree bit-for-bit.
"""

import hashlib

import numpy as np

from ..errors import NasforgeError

GPU_LIKE_COEFFS = (0.5, 0.7, 0.4, 0.02)
FPGA_LIKE_COEFFS = (1.0, 0.6, 0.8)

# cost units per million MACs
_MAC_SCALE = {"gpu_like": 1.0, "fpga_like": 1.2}
_METRIC = {"gpu_like": "latency_ms", "fpga_like": "energy_mj"}


def _hash_rng(*parts):
    h = hashlib.sha256()
    for part in parts:
        h.update(str(part).encode("utf-8"))
        h.update(b"\x00")
    seed = int.from_bytes(h.digest()[:8], "little")
    return np.random.Generator(np.random.PCG64(seed))


class DeviceSimulator:
    def __init__(self, kind, coefficients=None, noise_sigma=0.01, seed=0):
        if kind not in _METRIC:
            raise NasforgeError(f"unknown device kind {kind!r}")
        self.kind = kind
        if coefficients is None:
            coefficients = GPU_LIKE_COEFFS if kind == "gpu_like" else FPGA_LIKE_COEFFS
        self.coefficients = tuple(float(c) for c in coefficients)
        expected = 4 if kind == "gpu_like" else 3
        if len(self.coefficients) != expected:
            raise NasforgeError(
                f"{kind} expects {expected} coefficients, got {len(self.coefficients)}"
            )
        self.noise_sigma = float(noise_sigma)
        self.seed = int(seed)

    @property
    def metric(self):
        return _METRIC[self.kind]

    @property
    def name(self):
        return f"{self.kind}_seed{self.seed}"

    def primitive_cost(self, block):
        """Deterministic positive cost of one block."""
        base = block.macs() / 1e6 * _MAC_SCALE[self.kind]
        jitter = 0.9 + 0.2 * _hash_rng(self.seed, "prim", block.key()).random()
        return base * jitter

    def network_cost(self, block_costs):
        """Non-additive whole-network cost from per-block costs."""
        costs = np.asarray(list(block_costs), dtype=np.float64)
        if costs.size == 0:
            raise NasforgeError("network cost of an empty block list")
        s = float(costs.sum())
        n = costs.size
        if self.kind == "gpu_like":
            c0, c1, c2, c3 = self.coefficients
            value = c0 + c1 * s + c2 * float(np.sqrt((costs**2).sum())) + c3 * n
        else:
            c0, c1, c2 = self.coefficients
            value = c0 + c1 * s + c2 * s**0.85
        if self.noise_sigma:
            eps = _hash_rng(self.seed, "net", costs.tobytes().hex()).standard_normal()
            value *= 1.0 + self.noise_sigma * eps
        return float(value)
