"""Step-wise operations behind the command-line interface.

Each operation declares its steps, runs under `OperationRunner` with a
progress bar, and reports success or failure through `OperationResult`.
"""

from .base import (
    ExecutableStep,
    Operation,
    OperationContext,
    OperationResult,
    OperationStatus,
    SteppedOperation,
)
from .didl import InferMaskOperation, TrainDidlOperation
from .evaluation import EvaluateOperation
from .histograms import ExtractHistogramsOperation, PruneHistogramsOperation
from .runner import OperationRunner
from .sbr import RefineOperation, TrainSbrOperation
from .synthetic import SynthesizeSceneOperation
from .verification import GradcheckOperation, VerifyProductOperation

__all__ = [
    "EvaluateOperation",
    "ExecutableStep",
    "ExtractHistogramsOperation",
    "GradcheckOperation",
    "InferMaskOperation",
    "Operation",
    "OperationContext",
    "OperationResult",
    "OperationRunner",
    "OperationStatus",
    "PruneHistogramsOperation",
    "RefineOperation",
    "SteppedOperation",
    "SynthesizeSceneOperation",
    "TrainDidlOperation",
    "TrainSbrOperation",
    "VerifyProductOperation",
]
