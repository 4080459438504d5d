from ..registry import ComponentKind, register
from .base import BestArchive, Controller
from .classic import EvoController, RandomController, SAController
from .predictor import PredictorController
from .reinforce import RLController

register(ComponentKind.CONTROLLER, "random", RandomController)
register(ComponentKind.CONTROLLER, "sa", SAController)
register(ComponentKind.CONTROLLER, "evo", EvoController)
register(ComponentKind.CONTROLLER, "rl", RLController)
register(ComponentKind.CONTROLLER, "predictor", PredictorController)

__all__ = [
    "BestArchive",
    "Controller",
    "EvoController",
    "PredictorController",
    "RLController",
    "RandomController",
    "SAController",
]
