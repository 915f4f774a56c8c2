from .campaign_presets import CAMPAIGN_PRESETS, campaign_preset
from .estimator import estimate, estimate_set, shot_value, shot_values
from .sampler import replay_snapshot, sample_dataset, sample_snapshot
from .state_presets import PRESETS, prepare_preset
from .table_cache import TableCache
from .validation_suite import ValidationSuite, run_validation, scaled_channel_provider

__all__ = [
    "CAMPAIGN_PRESETS",
    "PRESETS",
    "TableCache",
    "ValidationSuite",
    "campaign_preset",
    "estimate",
    "estimate_set",
    "prepare_preset",
    "replay_snapshot",
    "run_validation",
    "sample_dataset",
    "sample_snapshot",
    "scaled_channel_provider",
    "shot_value",
    "shot_values",
]
