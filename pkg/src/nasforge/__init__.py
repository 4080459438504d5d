"""nasforge: a modular architecture-search engine at desk scale.

Components (dataset, objective, search space, controller, weights manager,
evaluator, trainer) are registered by (kind, name) and assembled from a
single config file into a Session; rollout objects carry genotypes and
evaluation results between them.  A synthetic device simulator plus cost
models (hwcost) covers hardware-aware search without real hardware.
"""

from . import controllers, datasets, evaluators, objective, spaces, trainer  # noqa: F401  (registrations)
from .config import Config, load_config, load_config_text, save_config
from .errors import NasforgeError
from .registry import GLOBAL_REGISTRY, ComponentKind
from .rollouts import DifferentiableRollout, DiscreteRollout, discretize
from .session import Session, assemble_session

__version__ = "0.1.0"

__all__ = [
    "Config",
    "ComponentKind",
    "DifferentiableRollout",
    "DiscreteRollout",
    "GLOBAL_REGISTRY",
    "NasforgeError",
    "Session",
    "assemble_session",
    "discretize",
    "load_config",
    "load_config_text",
    "save_config",
    "__version__",
]
