"""
Artifact persistence: JSON state, CSV tables and run manifests
"""

from nib_planner.reporting.persistence import (
    ARTIFACTS_FILE,
    MANIFEST_FILE,
    load_artifacts,
    load_manifest,
    persist_run,
    persist_stage,
    persist_sweep,
    persist_users,
    write_report,
    write_table,
)

__all__ = [
    'ARTIFACTS_FILE',
    'MANIFEST_FILE',
    'load_artifacts',
    'load_manifest',
    'persist_run',
    'persist_stage',
    'persist_sweep',
    'persist_users',
    'write_report',
    'write_table',
]
