from .models import (
    LinearModel,
    LSTMCostModel,
    MLPCostModel,
    Normalizer,
    SumModel,
    make_model,
)
from .pipeline import (
    DEFAULT_MODELS,
    CostDataset,
    CostReport,
    CostSample,
    build_cost_dataset,
    compare_report,
    evaluate_rmse,
    run_cost_pipeline,
)
from .profiling import PrimitiveKey, ProfilingTable, profile_primitives
from .simulator import FPGA_LIKE_COEFFS, GPU_LIKE_COEFFS, DeviceSimulator

__all__ = [
    "DEFAULT_MODELS",
    "FPGA_LIKE_COEFFS",
    "GPU_LIKE_COEFFS",
    "CostDataset",
    "CostReport",
    "CostSample",
    "DeviceSimulator",
    "LinearModel",
    "LSTMCostModel",
    "MLPCostModel",
    "Normalizer",
    "PrimitiveKey",
    "ProfilingTable",
    "SumModel",
    "build_cost_dataset",
    "compare_report",
    "evaluate_rmse",
    "make_model",
    "profile_primitives",
    "run_cost_pipeline",
]
