"""
Monitoring callbacks for planning stages
Called by the orchestrator after every stage and on every stage failure
"""

import logging
from typing import Any, Optional

from nib_planner.callbacks.execution_tracker import get_tracker
from nib_planner.config.stage_names import get_stage_display_name, is_epoch_local

logger = logging.getLogger(__name__)


def _format_details(details: dict) -> str:
    parts = []
    for key, value in details.items():
        if isinstance(value, float):
            parts.append(f"{key}={value:.4g}")
        else:
            parts.append(f"{key}={value}")
    return ", ".join(parts)


def stage_callback(stage: str, epoch: Optional[int] = None, **details: Any) -> None:
    """
    Callback called after each planning stage completes

    Args:
        stage: Stage key (see STAGE_DISPLAY_NAMES)
        epoch: planning-loop iteration, if the stage is epoch-local
        details: Scalars worth logging (counts, rates, flags)
    """
    try:
        get_tracker().track_stage(stage, epoch)
        prefix = f"[epoch {epoch}] " if epoch is not None else ""
        suffix = f" ({_format_details(details)})" if details else ""
        logger.info(f"{prefix}{get_stage_display_name(stage)} done{suffix}")
    except Exception as e:
        logger.error(f"Error in stage_callback: {e}", exc_info=True)


def error_callback(stage: str, error: Exception, epoch: Optional[int] = None) -> None:
    """
    Callback called when a stage raises

    Epoch-local failures are logged as warnings (the run continues);
    anything else is logged as an error.
    """
    try:
        get_tracker().track_error(stage, error, epoch)
        prefix = f"[epoch {epoch}] " if epoch is not None else ""
        message = f"{prefix}{get_stage_display_name(stage)} failed: {error}"
        if is_epoch_local(stage):
            logger.warning(message)
        else:
            logger.error(message)
    except Exception as e:
        logger.error(f"Error in error_callback: {e}", exc_info=True)
