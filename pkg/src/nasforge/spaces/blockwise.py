"""Blockwise space of inverted-bottleneck stages.

Per stage the genotype holds one depth decision followed by max-depth
(expansion, kernel) pairs; pairs past the chosen depth are inert and are
rewritten to choice 0 by canonicalization, so equal programs compare equal
regardless of the inert values.  The first block of a stage applies the
stage stride and channel change; later blocks are stride-1 with equal
in/out channels.  Output H,W follow ceil(in / stride).

String form lists only active blocks:
``stage1:d3[e4k5,e3k3,e6k7];stage2:d2[e3k3,e6k5];...``
"""

import math
from dataclasses import dataclass

from ..config import Field
from ..errors import EvaluationError, GenotypeError
from .base import SearchSpace


@dataclass(frozen=True)
class BlockConfig:
    """Structural identity of one inverted-bottleneck block (the profiling key)."""

    in_shape: tuple  # (C, H, W)
    out_channels: int
    kernel: int
    stride: int
    expansion: int
    op = "ib"

    def key(self):
        c, h, w = self.in_shape
        return (
            f"{self.op}_c{c}x{h}x{w}_o{self.out_channels}"
            f"_k{self.kernel}_s{self.stride}_e{self.expansion}"
        )

    @property
    def out_shape(self):
        c, h, w = self.in_shape
        return (
            self.out_channels,
            math.ceil(h / self.stride),
            math.ceil(w / self.stride),
        )

    def macs(self):
        """Multiply-accumulates: 1x1 expand, kxk depthwise, 1x1 project."""
        c_in, h, w = self.in_shape
        mid = self.expansion * c_in
        _, h_out, w_out = self.out_shape
        expand = h * w * c_in * mid
        depthwise = h_out * w_out * mid * self.kernel * self.kernel
        project = h_out * w_out * mid * self.out_channels
        return expand + depthwise + project


@dataclass
class BlockFeature:
    """Cost plus the configuration vector fed to the cost models."""

    cost: float
    in_shape: tuple
    out_shape: tuple
    kernel: int
    stride: int

    def vector(self):
        """9 features: cost, in C/H/W, out C/H/W, kernel, stride."""
        return [
            self.cost,
            *(float(v) for v in self.in_shape),
            *(float(v) for v in self.out_shape),
            float(self.kernel),
            float(self.stride),
        ]


class BlockwiseSpace(SearchSpace):
    name = "blockwise"

    CONFIG_FIELDS = (
        Field("num_stages", "int", 5, "number of stages"),
        Field("depth_choices", "int_list", [2, 3, 4], "blocks per stage choices"),
        Field("expansion_choices", "int_list", [3, 4, 6], "expansion ratio choices"),
        Field("kernel_choices", "int_list", [3, 5, 7], "depthwise kernel size choices"),
        Field("strides", "int_list", [2, 2, 2, 1, 2], "first-block stride per stage"),
        Field("channels", "int_list", [16, 24, 40, 80, 160], "output channels per stage"),
        Field("stem_channels", "int", 16, "channels entering the first stage"),
        Field("input_size", "int", 32, "input H=W resolution"),
    )

    def __init__(
        self,
        num_stages=5,
        depth_choices=(2, 3, 4),
        expansion_choices=(3, 4, 6),
        kernel_choices=(3, 5, 7),
        strides=(2, 2, 2, 1, 2),
        channels=(16, 24, 40, 80, 160),
        stem_channels=16,
        input_size=32,
    ):
        if num_stages < 1:
            raise GenotypeError("num_stages must be >= 1")
        for name, choices in (
            ("depth_choices", depth_choices),
            ("expansion_choices", expansion_choices),
            ("kernel_choices", kernel_choices),
        ):
            if not choices or len(set(choices)) != len(choices):
                raise GenotypeError(f"{name} must be non-empty and unique")
        if min(depth_choices) < 1:
            raise GenotypeError("depths must be >= 1")
        strides = tuple(strides)[:num_stages]
        channels = tuple(channels)[:num_stages]
        if len(strides) != num_stages or len(channels) != num_stages:
            raise GenotypeError("strides/channels must cover every stage")
        self.num_stages = num_stages
        self.depth_choices = tuple(depth_choices)
        self.expansion_choices = tuple(expansion_choices)
        self.kernel_choices = tuple(kernel_choices)
        self.strides = strides
        self.channels = channels
        self.stem_channels = stem_channels
        self.input_size = input_size
        self.max_depth = max(self.depth_choices)
        self.stage_width = 1 + 2 * self.max_depth  # decisions per stage
        per_stage = [len(self.depth_choices)]
        per_stage += [len(self.expansion_choices), len(self.kernel_choices)] * self.max_depth
        self._cards = tuple(per_stage * num_stages)
        self._stage_geometry = self._compute_geometry()

    @classmethod
    def from_config(cls, cfg, ctx):
        return cls(
            cfg["num_stages"],
            cfg["depth_choices"],
            cfg["expansion_choices"],
            cfg["kernel_choices"],
            cfg["strides"],
            cfg["channels"],
            cfg["stem_channels"],
            cfg["input_size"],
        )

    def _compute_geometry(self):
        """Per stage: (in_channels, in_hw, out_hw)."""
        geometry = []
        c_in = self.stem_channels
        hw = self.input_size
        for s in range(self.num_stages):
            out_hw = math.ceil(hw / self.strides[s])
            geometry.append((c_in, hw, out_hw))
            c_in = self.channels[s]
            hw = out_hw
        return tuple(geometry)

    @property
    def cardinalities(self):
        return self._cards

    def stage_slice(self, stage):
        start = stage * self.stage_width
        return slice(start, start + self.stage_width)

    def stage_depth(self, genotype, stage):
        return self.depth_choices[genotype[stage * self.stage_width]]

    def canonicalize(self, genotype):
        self.validate(genotype)
        canon = list(genotype)
        for s in range(self.num_stages):
            depth = self.stage_depth(genotype, s)
            base = s * self.stage_width
            for j in range(depth, self.max_depth):
                canon[base + 1 + 2 * j] = 0
                canon[base + 2 + 2 * j] = 0
        return tuple(canon)

    def active_blocks(self, genotype):
        """BlockConfig per active block, in execution order."""
        self.validate(genotype)
        blocks = []
        for s in range(self.num_stages):
            c_in, hw_in, hw_out = self._stage_geometry[s]
            depth = self.stage_depth(genotype, s)
            base = s * self.stage_width
            for j in range(depth):
                e = self.expansion_choices[genotype[base + 1 + 2 * j]]
                k = self.kernel_choices[genotype[base + 2 + 2 * j]]
                if j == 0:
                    block = BlockConfig((c_in, hw_in, hw_in), self.channels[s], k, self.strides[s], e)
                else:
                    block = BlockConfig(
                        (self.channels[s], hw_out, hw_out), self.channels[s], k, 1, e
                    )
                blocks.append(block)
        return blocks

    def reachable_blocks(self):
        """Every primitive any genotype can instantiate, deduplicated, in key order."""
        seen = {}
        for s in range(self.num_stages):
            c_in, hw_in, hw_out = self._stage_geometry[s]
            for j in range(self.max_depth):
                for e in self.expansion_choices:
                    for k in self.kernel_choices:
                        if j == 0:
                            block = BlockConfig(
                                (c_in, hw_in, hw_in), self.channels[s], k, self.strides[s], e
                            )
                        else:
                            block = BlockConfig(
                                (self.channels[s], hw_out, hw_out), self.channels[s], k, 1, e
                            )
                        seen.setdefault(block.key(), block)
        return [seen[key] for key in sorted(seen)]

    def block_features(self, genotype, table):
        """One BlockFeature per active block with cost read from a profiling table."""
        features = []
        for block in self.active_blocks(genotype):
            key = block.key()
            if key not in table.entries:
                raise EvaluationError(f"profiling table has no entry for {key}")
            features.append(
                BlockFeature(
                    cost=table.entries[key],
                    in_shape=block.in_shape,
                    out_shape=block.out_shape,
                    kernel=block.kernel,
                    stride=block.stride,
                )
            )
        return features

    def _stage_program_count(self):
        pairs = len(self.expansion_choices) * len(self.kernel_choices)
        return sum(pairs**d for d in self.depth_choices)

    def size(self):
        return self._stage_program_count() ** self.num_stages

    def _enumerate(self):
        yield from self._enumerate_stages(0, [])

    def _enumerate_stages(self, stage, prefix):
        if stage == self.num_stages:
            yield tuple(prefix)
            return
        for d_idx, depth in enumerate(self.depth_choices):
            for pairs in self._enumerate_pairs(depth):
                part = [d_idx] + pairs + [0, 0] * (self.max_depth - depth)
                yield from self._enumerate_stages(stage + 1, prefix + part)

    def _enumerate_pairs(self, depth):
        if depth == 0:
            yield []
            return
        for rest in self._enumerate_pairs(depth - 1):
            for e_idx in range(len(self.expansion_choices)):
                for k_idx in range(len(self.kernel_choices)):
                    yield rest + [e_idx, k_idx]

    def genotype_to_string(self, genotype):
        canon = self.canonicalize(genotype)
        parts = []
        for s in range(self.num_stages):
            depth = self.stage_depth(canon, s)
            base = s * self.stage_width
            blocks = []
            for j in range(depth):
                e = self.expansion_choices[canon[base + 1 + 2 * j]]
                k = self.kernel_choices[canon[base + 2 + 2 * j]]
                blocks.append(f"e{e}k{k}")
            parts.append(f"stage{s + 1}:d{depth}[" + ",".join(blocks) + "]")
        return ";".join(parts)

    def parse_genotype(self, text):
        s = "".join(text.split())
        stages = s.split(";") if s else []
        if len(stages) != self.num_stages:
            raise GenotypeError(
                f"expected {self.num_stages} stages, got {len(stages)} in {text!r}"
            )
        genotype = []
        for idx, part in enumerate(stages):
            prefix = f"stage{idx + 1}:d"
            if not part.startswith(prefix):
                raise GenotypeError(f"stage {idx + 1}: expected prefix {prefix!r} in {part!r}")
            rest = part[len(prefix) :]
            if "[" not in rest or not rest.endswith("]"):
                raise GenotypeError(f"stage {idx + 1}: malformed block list in {part!r}")
            d_tok, blocks_str = rest[:-1].split("[", 1)
            try:
                depth = int(d_tok)
            except ValueError:
                raise GenotypeError(f"stage {idx + 1}: bad depth token {d_tok!r}") from None
            if depth not in self.depth_choices:
                raise GenotypeError(
                    f"stage {idx + 1}: depth token {d_tok!r} not in {list(self.depth_choices)}"
                )
            blocks = blocks_str.split(",") if blocks_str else []
            if len(blocks) != depth:
                raise GenotypeError(
                    f"stage {idx + 1}: expected {depth} blocks, got {len(blocks)}"
                )
            genotype.append(self.depth_choices.index(depth))
            pairs = []
            for j, tok in enumerate(blocks):
                if not tok.startswith("e") or "k" not in tok:
                    raise GenotypeError(f"stage {idx + 1} block {j}: malformed token {tok!r}")
                e_tok, k_tok = tok[1:].split("k", 1)
                try:
                    e = int(e_tok)
                    k = int(k_tok)
                except ValueError:
                    raise GenotypeError(
                        f"stage {idx + 1} block {j}: bad token {tok!r}"
                    ) from None
                if e not in self.expansion_choices:
                    raise GenotypeError(
                        f"stage {idx + 1} block {j}: expansion token {e_tok!r} not in "
                        f"{list(self.expansion_choices)}"
                    )
                if k not in self.kernel_choices:
                    raise GenotypeError(
                        f"stage {idx + 1} block {j}: kernel token {k_tok!r} not in "
                        f"{list(self.kernel_choices)}"
                    )
                pairs.extend([self.expansion_choices.index(e), self.kernel_choices.index(k)])
            pairs.extend([0, 0] * (self.max_depth - depth))
            genotype.extend(pairs)
        return tuple(genotype)
