from .supernet import CandidateNet, SupernetEvaluator, SupernetWeightsManager
from .tabular import NoopWeightsManager, TabularEvaluator

__all__ = [
    "CandidateNet",
    "NoopWeightsManager",
    "SupernetEvaluator",
    "SupernetWeightsManager",
    "TabularEvaluator",
]
