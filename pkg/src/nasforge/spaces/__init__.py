from ..registry import ComponentKind, register
from .base import SearchSpace, mutate, random_rollout
from .blockwise import BlockConfig, BlockFeature, BlockwiseSpace
from .cell import CellSpace
from .toy_mlp import ToyMLPSpace

register(ComponentKind.SEARCH_SPACE, "toy_mlp", ToyMLPSpace)
register(ComponentKind.SEARCH_SPACE, "cell", CellSpace)
register(ComponentKind.SEARCH_SPACE, "blockwise", BlockwiseSpace)

__all__ = [
    "BlockConfig",
    "BlockFeature",
    "BlockwiseSpace",
    "CellSpace",
    "SearchSpace",
    "ToyMLPSpace",
    "mutate",
    "random_rollout",
]
