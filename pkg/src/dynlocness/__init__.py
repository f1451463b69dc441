"""Vertex-centred detection of overlapping communities in evolving graphs."""

from .benchmark import BenchmarkConfig, GeneratedBenchmark, Pattern, generate
from .detection import Detector, ReadMode, Update, initialize, run
from .evaluation import evaluate_timeline, nmi, nvi
from .graph import DynamicGraph, EdgeEvent, EventKind, TimeStepBatch
from .preference import PreferenceMeasure, preferred_leaders, sigma

__all__ = [
    "BenchmarkConfig",
    "Detector",
    "DynamicGraph",
    "EdgeEvent",
    "EventKind",
    "GeneratedBenchmark",
    "Pattern",
    "PreferenceMeasure",
    "ReadMode",
    "TimeStepBatch",
    "Update",
    "evaluate_timeline",
    "generate",
    "initialize",
    "nmi",
    "nvi",
    "preferred_leaders",
    "run",
    "sigma",
]
