"""Streaming similarity-profile and refined-motif extraction for daily load patterns."""

from .additive import AdditiveState, additive_update
from .batch import BatchProfile, compute_similarity_profile, default_threshold, extract_rm
from .classifier import ClassifierModel, predict, train
from .codebook import (
    CodebookState,
    CodebookVariant,
    codebook_update,
    memory_saving,
    recover_tsd,
)
from .core import (
    DayPattern,
    DistanceConfig,
    DropStrategy,
    InvalidInputError,
    InvalidStateError,
    ProfileParams,
    RefinedMotif,
    RmStreamError,
    SimilarityRecord,
    SnapshotCorruptionError,
    SnapshotVersionError,
    sp_value,
)
from .data_io import (
    DailyCsvSchema,
    RejectedDay,
    SyntheticScenario,
    archetype_profile,
    generate_synthetic,
    load_daily_csv,
    midday_slice,
    snapshot_load,
    snapshot_save,
)
from .distance import dtw_distance, kernel_name, pairwise_distance_matrix
from .fixed_memory import (
    FixedMemoryState,
    detect_type_switch_latency,
    fixed_update,
    select_drop_index,
)

__version__ = "0.1.0"

__all__ = [
    "AdditiveState",
    "BatchProfile",
    "ClassifierModel",
    "CodebookState",
    "CodebookVariant",
    "DailyCsvSchema",
    "DayPattern",
    "DistanceConfig",
    "DropStrategy",
    "FixedMemoryState",
    "InvalidInputError",
    "InvalidStateError",
    "ProfileParams",
    "RefinedMotif",
    "RejectedDay",
    "RmStreamError",
    "SimilarityRecord",
    "SnapshotCorruptionError",
    "SnapshotVersionError",
    "SyntheticScenario",
    "additive_update",
    "archetype_profile",
    "codebook_update",
    "compute_similarity_profile",
    "default_threshold",
    "detect_type_switch_latency",
    "dtw_distance",
    "extract_rm",
    "fixed_update",
    "generate_synthetic",
    "kernel_name",
    "load_daily_csv",
    "memory_saving",
    "midday_slice",
    "pairwise_distance_matrix",
    "predict",
    "recover_tsd",
    "select_drop_index",
    "snapshot_load",
    "snapshot_save",
    "sp_value",
    "train",
]
