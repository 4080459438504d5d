"""Cell space: each intermediate node picks two (predecessor, op) edges.

Nodes 0 and 1 are inputs.  Node i (i = 2..N+1) may use any predecessor in
{0..i-1}, and the two edges are an ordered pair that may repeat a
predecessor.  Genotype layout is node-major: [p0, o0, p1, o1] per node.
String form: ``cell(0-conv3,1-skip|2-conv5,0-conv3)`` with nodes joined
by '|'.
"""

from ..config import Field
from ..errors import GenotypeError
from .base import SearchSpace

NUM_INPUT_NODES = 2


class CellSpace(SearchSpace):
    name = "cell"

    CONFIG_FIELDS = (
        Field("num_nodes", "int", 2, "number of intermediate nodes"),
        Field(
            "op_set",
            "str_list",
            ["skip", "conv3", "conv5"],
            "ordered candidate operation names",
        ),
    )

    def __init__(self, num_nodes=2, op_set=("skip", "conv3", "conv5")):
        if num_nodes < 1:
            raise GenotypeError("num_nodes must be >= 1")
        if not op_set or len(set(op_set)) != len(op_set):
            raise GenotypeError("op_set must be non-empty and unique")
        self.num_nodes = num_nodes
        self.op_set = tuple(op_set)
        cards = []
        for node in range(NUM_INPUT_NODES, NUM_INPUT_NODES + num_nodes):
            for _edge in range(2):
                cards.append(node)  # predecessor in {0..node-1}
                cards.append(len(self.op_set))
        self._cards = tuple(cards)

    @classmethod
    def from_config(cls, cfg, ctx):
        return cls(cfg["num_nodes"], cfg["op_set"])

    @property
    def cardinalities(self):
        return self._cards

    def node_plan(self, genotype):
        """[(pred1, op1, pred2, op2), ...] per intermediate node, ops by name."""
        self.validate(genotype)
        plan = []
        for n in range(self.num_nodes):
            base = 4 * n
            plan.append(
                (
                    genotype[base],
                    self.op_set[genotype[base + 1]],
                    genotype[base + 2],
                    self.op_set[genotype[base + 3]],
                )
            )
        return plan

    def genotype_to_string(self, genotype):
        nodes = [
            f"{p1}-{o1},{p2}-{o2}" for p1, o1, p2, o2 in self.node_plan(genotype)
        ]
        return "cell(" + "|".join(nodes) + ")"

    def parse_genotype(self, text):
        s = "".join(text.split())
        if not s.startswith("cell(") or not s.endswith(")"):
            raise GenotypeError(f"not a cell genotype string: {text!r}")
        body = s[len("cell(") : -1]
        nodes = body.split("|") if body else []
        if len(nodes) != self.num_nodes:
            raise GenotypeError(
                f"expected {self.num_nodes} nodes, got {len(nodes)} in {text!r}"
            )
        genotype = []
        for idx, node in enumerate(nodes):
            edges = node.split(",")
            if len(edges) != 2:
                raise GenotypeError(f"node {idx + NUM_INPUT_NODES}: expected 2 edges")
            for edge in edges:
                if "-" not in edge:
                    raise GenotypeError(
                        f"node {idx + NUM_INPUT_NODES}: malformed edge {edge!r}"
                    )
                p_tok, op = edge.split("-", 1)
                try:
                    pred = int(p_tok)
                except ValueError:
                    raise GenotypeError(
                        f"node {idx + NUM_INPUT_NODES}: bad predecessor token {p_tok!r}"
                    ) from None
                if not 0 <= pred < idx + NUM_INPUT_NODES:
                    raise GenotypeError(
                        f"node {idx + NUM_INPUT_NODES}: predecessor token {p_tok!r} "
                        f"out of range [0, {idx + NUM_INPUT_NODES})"
                    )
                if op not in self.op_set:
                    raise GenotypeError(
                        f"node {idx + NUM_INPUT_NODES}: op token {op!r} not in "
                        f"{list(self.op_set)}"
                    )
                genotype.append(pred)
                genotype.append(self.op_set.index(op))
        return tuple(genotype)
