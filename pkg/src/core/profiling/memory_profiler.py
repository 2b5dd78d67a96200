import threading
from typing import Dict, List, Optional, Tuple
import psutil
import logging
from memory_profiler import memory_usage
from datetime import datetime
from pathlib import Path

from src.config.settings import PROFILE_LOG_DIR, PROFILE_SAMPLING_INTERVAL

# Dedicated logger so profiling lines can go to their own file
logger = logging.getLogger(__name__)


def setup_profiling_logger(log_dir: str = PROFILE_LOG_DIR) -> Tuple[Path, logging.FileHandler]:
    """Attach a file handler for profiling metrics; the caller detaches it when done."""
    directory = Path(log_dir)
    directory.mkdir(parents=True, exist_ok=True)

    log_file = directory / f"profiling_{datetime.now().strftime('%Y%m%d_%H%M%S')}.log"
    file_handler = logging.FileHandler(log_file)
    file_handler.setLevel(logging.INFO)
    file_handler.setFormatter(logging.Formatter('%(asctime)s - %(levelname)s - %(message)s'))

    logger.addHandler(file_handler)
    logger.setLevel(logging.INFO)
    return log_file, file_handler


class AnalysisProfiler:
    """Samples memory and CPU of one CLI command in a background thread.

    Use as a context manager; the summary is logged when the block exits.
    """

    def __init__(self, label: str, sampling_interval: float = PROFILE_SAMPLING_INTERVAL,
                 log_dir: str = PROFILE_LOG_DIR):
        self.label = label
        self.sampling_interval = sampling_interval
        self.log_dir = log_dir
        self.log_file: Optional[Path] = None
        self._file_handler: Optional[logging.FileHandler] = None
        self.memory_samples: List[float] = []
        self.cpu_samples: List[float] = []
        self.process = psutil.Process()
        self.start_time: Optional[datetime] = None
        self.baseline_memory = 0.0
        self._stop_sampling = threading.Event()
        self._sampling_thread: Optional[threading.Thread] = None

    def __enter__(self) -> 'AnalysisProfiler':
        self.start()
        return self

    def __exit__(self, exc_type, exc, traceback):
        self.shutdown()
        return False

    def _get_memory_usage(self) -> float:
        """Current memory usage in MiB."""
        return memory_usage(-1, interval=.1, timeout=1)[0]

    def start(self):
        self.log_file, self._file_handler = setup_profiling_logger(self.log_dir)
        self.start_time = datetime.now()
        self.baseline_memory = self._get_memory_usage()
        self.process.cpu_percent()
        logger.info(f"=== Profiling {self.label} ===")
        logger.info(f"Baseline Memory Usage: {self.baseline_memory:.2f} MiB")

        self._sampling_thread = threading.Thread(
            target=self._sampling_loop,
            name="ProfilingSampler",
            daemon=True
        )
        self._sampling_thread.start()

    def _sampling_loop(self):
        while not self._stop_sampling.is_set():
            try:
                mem_usage = self._get_memory_usage()
                cpu_usage = self.process.cpu_percent()
                self.memory_samples.append(mem_usage)
                self.cpu_samples.append(cpu_usage)
                logger.debug(f"Memory: {mem_usage:.2f} MiB, CPU: {cpu_usage:.1f}%")
                self._stop_sampling.wait(self.sampling_interval)
            except Exception as e:
                logger.error(f"Error in profiling sample: {str(e)}")

    def get_statistics(self) -> Dict[str, float]:
        """Calculate statistics from collected samples."""
        if not self.memory_samples or not self.cpu_samples:
            return {}

        return {
            'avg_memory_mib': sum(self.memory_samples) / len(self.memory_samples),
            'max_memory_mib': max(self.memory_samples),
            'avg_cpu_percent': sum(self.cpu_samples) / len(self.cpu_samples),
            'max_cpu_percent': max(self.cpu_samples),
            'memory_diff_mib': self.memory_samples[-1] - self.baseline_memory,
        }

    def shutdown(self):
        """Stop sampling and log the summary; safe to call twice."""
        if self._stop_sampling.is_set() or self.start_time is None:
            return

        self._stop_sampling.set()
        if self._sampling_thread:
            self._sampling_thread.join(timeout=2.0)

        stats = self.get_statistics()
        runtime = datetime.now() - self.start_time
        logger.info(f"=== Profiling Report: {self.label} ===")
        logger.info(f"Total Runtime: {runtime}")
        logger.info(f"Average Memory Usage: {stats.get('avg_memory_mib', 0):.2f} MiB")
        logger.info(f"Peak Memory Usage: {stats.get('max_memory_mib', 0):.2f} MiB")
        logger.info(f"Memory Change: {stats.get('memory_diff_mib', 0):.2f} MiB")
        logger.info(f"Average CPU Usage: {stats.get('avg_cpu_percent', 0):.1f}%")
        logger.info(f"Peak CPU Usage: {stats.get('max_cpu_percent', 0):.1f}%")
        logger.info(f"Profiling log: {self.log_file}")
        if self._file_handler is not None:
            logger.removeHandler(self._file_handler)
            self._file_handler.close()
            self._file_handler = None
