"""
Chunked parallel execution and stage bookkeeping for long computations.
"""
import os
import time
import concurrent.futures
from dataclasses import dataclass, field
from enum import Enum, auto
from typing import Any, Callable, Dict, List, Optional, Sequence, TypeVar

import psutil

# Import logger from our centralized module
from script.logger import logger

# Constants
MAX_WORKERS = os.cpu_count() or 4  # Upper bound for pool size
CHUNK_SIZE = 2048  # Number of items handed to one task

T = TypeVar("T")
R = TypeVar("R")


class PipelineStage(Enum):
    NOT_STARTED = auto()
    PARTITIONS = auto()
    INDUCE_ROWS = auto()
    INDUCE_COLUMNS = auto()
    RESCALE = auto()
    RELABEL = auto()
    COMPOSE = auto()
    COMPLETED = auto()
    ERROR = auto()


@dataclass
class StageReport:
    """Timing and memory figures for one stage of a pipeline."""
    stage: PipelineStage
    seconds: float = 0.0
    rss_mb: float = 0.0
    detail: Dict[str, Any] = field(default_factory=dict)

    def summary(self) -> str:
        extras = ", ".join(f"{k}={v}" for k, v in self.detail.items())
        text = f"{self.stage.name.lower()}: {self.seconds:.2f}s, rss {self.rss_mb:.1f} MiB"
        return f"{text} ({extras})" if extras else text


class StageTimer:
    """Context manager that records a StageReport into ``reports``."""

    def __init__(self, stage: PipelineStage, reports: List[StageReport]):
        self.report = StageReport(stage)
        self.reports = reports
        self._start = 0.0

    def __enter__(self) -> StageReport:
        self._start = time.perf_counter()
        return self.report

    def __exit__(self, exc_type, exc, tb) -> bool:
        self.report.seconds = time.perf_counter() - self._start
        self.report.rss_mb = resident_memory_mb()
        if exc_type is not None:
            self.report.detail["error"] = str(exc)
            logger.error(f"Stage {self.report.stage.name} failed: {exc}")
        else:
            logger.info(f"Stage {self.report.summary()}")
        self.reports.append(self.report)
        return False


def resident_memory_mb() -> float:
    try:
        return psutil.Process(os.getpid()).memory_info().rss / (1024 * 1024)
    except (psutil.Error, OSError) as e:
        logger.debug(f"Could not read process memory: {e}")
        return 0.0


def chunked(items: Sequence[T], size: int) -> List[Sequence[T]]:
    if size < 1:
        raise ValueError(f"chunk size must be positive, got {size}")
    return [items[start:start + size] for start in range(0, len(items), size)]


def resolve_workers(max_workers: Optional[int]) -> int:
    """0 or None means one worker per CPU."""
    if not max_workers:
        return MAX_WORKERS
    return max(1, int(max_workers))


def map_chunked(func: Callable[[Sequence[T]], R],
                items: Sequence[T],
                chunk_size: int = CHUNK_SIZE,
                max_workers: Optional[int] = 1,
                use_processes: bool = False) -> List[R]:
    """Apply ``func`` to consecutive chunks of ``items``.

    Results come back in chunk order whatever the completion order, so the
    merged output is identical to a sequential run. With one worker (the
    default) everything runs in the calling thread.
    """
    chunks = chunked(items, chunk_size)
    workers = resolve_workers(max_workers)
    if workers <= 1 or len(chunks) <= 1:
        return [func(chunk) for chunk in chunks]

    executor_cls = (concurrent.futures.ProcessPoolExecutor if use_processes
                    else concurrent.futures.ThreadPoolExecutor)
    results: List[Any] = [None] * len(chunks)
    logger.debug(f"Dispatching {len(chunks)} chunks to {workers} workers")
    with executor_cls(max_workers=min(workers, len(chunks))) as executor:
        future_to_index = {executor.submit(func, chunk): idx for idx, chunk in enumerate(chunks)}
        for future in concurrent.futures.as_completed(future_to_index):
            idx = future_to_index[future]
            try:
                results[idx] = future.result()
            except Exception as e:
                logger.error(f"Error processing chunk {idx}: {e}")
                raise
    return results
