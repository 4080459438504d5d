"""Toy MLP space: per layer, a width choice and an activation choice.

Genotype layout is layer-major: [w0, a0, w1, a1, ...].  String form names
the actual values, e.g. ``mlp(32-relu,16-tanh,8-relu)``.
"""

from ..config import Field
from ..errors import GenotypeError
from .base import SearchSpace


class ToyMLPSpace(SearchSpace):
    name = "toy_mlp"

    CONFIG_FIELDS = (
        Field("num_layers", "int", 3, "number of searched hidden layers"),
        Field("width_choices", "int_list", [8, 16, 32], "allowed layer widths"),
        Field(
            "activation_choices",
            "str_list",
            ["relu", "tanh"],
            "allowed layer activations",
        ),
    )

    def __init__(self, num_layers=3, width_choices=(8, 16, 32), activation_choices=("relu", "tanh")):
        if num_layers < 1:
            raise GenotypeError("num_layers must be >= 1")
        if not width_choices or not activation_choices:
            raise GenotypeError("choice lists must be non-empty")
        self.num_layers = num_layers
        self.width_choices = tuple(int(w) for w in width_choices)
        self.activation_choices = tuple(activation_choices)
        self._cards = tuple(
            [len(self.width_choices), len(self.activation_choices)] * num_layers
        )

    @classmethod
    def from_config(cls, cfg, ctx):
        return cls(cfg["num_layers"], cfg["width_choices"], cfg["activation_choices"])

    @property
    def cardinalities(self):
        return self._cards

    def layer_plan(self, genotype):
        """[(width, activation), ...] for each layer."""
        self.validate(genotype)
        plan = []
        for layer in range(self.num_layers):
            w = self.width_choices[genotype[2 * layer]]
            a = self.activation_choices[genotype[2 * layer + 1]]
            plan.append((w, a))
        return plan

    def max_width_genotype(self):
        widest = max(range(len(self.width_choices)), key=lambda i: self.width_choices[i])
        return tuple([widest, 0] * self.num_layers)

    def genotype_to_string(self, genotype):
        parts = [f"{w}-{a}" for w, a in self.layer_plan(genotype)]
        return "mlp(" + ",".join(parts) + ")"

    def parse_genotype(self, text):
        s = "".join(text.split())
        if not s.startswith("mlp(") or not s.endswith(")"):
            raise GenotypeError(f"not an mlp genotype string: {text!r}")
        body = s[len("mlp(") : -1]
        parts = body.split(",") if body else []
        if len(parts) != self.num_layers:
            raise GenotypeError(
                f"expected {self.num_layers} layers, got {len(parts)} in {text!r}"
            )
        genotype = []
        for idx, part in enumerate(parts):
            if "-" not in part:
                raise GenotypeError(f"layer {idx}: malformed token {part!r}")
            w_tok, a_tok = part.split("-", 1)
            try:
                width = int(w_tok)
            except ValueError:
                raise GenotypeError(f"layer {idx}: bad width token {w_tok!r}") from None
            if width not in self.width_choices:
                raise GenotypeError(
                    f"layer {idx}: width token {w_tok!r} not in {list(self.width_choices)}"
                )
            if a_tok not in self.activation_choices:
                raise GenotypeError(
                    f"layer {idx}: activation token {a_tok!r} not in "
                    f"{list(self.activation_choices)}"
                )
            genotype.append(self.width_choices.index(width))
            genotype.append(self.activation_choices.index(a_tok))
        return tuple(genotype)
