"""
Execution Tracker - Tracks planning stages, epochs and failures during a run
"""

from collections import defaultdict
from threading import Lock
from typing import Any, Dict, List, Optional


class ExecutionTracker:
    """Thread-safe tracker for stages executed during planning"""

    _instance = None
    _lock = Lock()

    def __new__(cls):
        if cls._instance is None:
            with cls._lock:
                if cls._instance is None:
                    cls._instance = super().__new__(cls)
                    cls._instance._initialized = False
        return cls._instance

    def __init__(self):
        if self._initialized:
            return

        with self._lock:
            if self._initialized:
                return

            self.executed_stages: List[str] = []  # execution order, no duplicates
            self.stage_counts: Dict[str, int] = defaultdict(int)
            self.epoch_stages: Dict[int, List[str]] = defaultdict(list)
            self.errors: List[Dict[str, Any]] = []
            self.infeasible_epochs: List[int] = []
            self._initialized = True

    def reset(self):
        """Reset tracker for a new run"""
        with self._lock:
            self.executed_stages.clear()
            self.stage_counts.clear()
            self.epoch_stages.clear()
            self.errors.clear()
            self.infeasible_epochs.clear()

    def track_stage(self, stage: str, epoch: Optional[int] = None):
        """Track that a stage executed (preserves first-execution order)"""
        with self._lock:
            if stage not in self.executed_stages:
                self.executed_stages.append(stage)
            self.stage_counts[stage] += 1
            if epoch is not None:
                self.epoch_stages[epoch].append(stage)

    def track_error(self, stage: str, error: Exception, epoch: Optional[int] = None):
        """Track a stage failure"""
        with self._lock:
            self.errors.append({
                "stage": stage,
                "epoch": epoch,
                "type": error.__class__.__name__,
                "message": str(error),
            })
            if epoch is not None and epoch not in self.infeasible_epochs:
                self.infeasible_epochs.append(epoch)

    def get_executed_stages(self) -> List[str]:
        with self._lock:
            return list(self.executed_stages)

    def get_errors(self) -> List[Dict[str, Any]]:
        with self._lock:
            return [dict(e) for e in self.errors]

    def get_summary(self) -> Dict[str, Any]:
        """Get summary of execution"""
        with self._lock:
            return {
                "executed_stages": list(self.executed_stages),
                "stage_counts": dict(self.stage_counts),
                "epochs": sorted(self.epoch_stages),
                "infeasible_epochs": sorted(self.infeasible_epochs),
                "errors": [dict(e) for e in self.errors],
            }


# Global tracker instance
_tracker = ExecutionTracker()


def get_tracker() -> ExecutionTracker:
    """Get the global execution tracker instance"""
    return _tracker
