"""
Reproducible random streams and concurrent sample execution
"""

from .scheduler import WORKERS_ENV, SampleScheduler, SampleTask, resolve_workers, run_samples
from .streams import SeedStream, derive_seed, stream_for, uniform

__all__ = [
    "WORKERS_ENV",
    "SampleScheduler",
    "SampleTask",
    "SeedStream",
    "derive_seed",
    "resolve_workers",
    "run_samples",
    "stream_for",
    "uniform",
]
