"""Now-cast probabilities of election events from published opinion polls."""

from .apportionment import (
    ElectionRules,
    SeatResult,
    allocate,
    allocate_batch,
    apply_threshold,
    sainte_lague,
)
from .config import ElectionConfig
from .errors import (
    ConfigurationError,
    DegenerateDrawError,
    EstimationError,
    EventParseError,
    NoPollsError,
    PollcastError,
    PollParseError,
    PollValidationError,
)
from .events import (
    DensitySummary,
    Majority,
    PoeResult,
    Rank,
    SimulationRun,
    ThresholdPass,
    density_summary,
    estimate_poe,
    evaluate_event,
    parse_event,
    poe_from_run,
    run_simulation,
    skew_axis,
)
from .nowcast import nowcast, nowcast_series
from .report import series_csv
from .polls import (
    Party,
    Poll,
    PooledSample,
    PoolingConfig,
    effective_sample_size,
    parse_polls,
    pool,
    pool_polls,
    publication_dates,
    read_polls,
    select_window,
)
from .posterior import (
    NoiseSpec,
    PosteriorSpec,
    PriorSpec,
    ShareDraw,
    SimulationConfig,
    adjust_rounding,
    build_posterior,
    draw_shares,
    simulate,
    simulate_array,
)

__all__ = [
    "ConfigurationError",
    "DegenerateDrawError",
    "DensitySummary",
    "ElectionConfig",
    "ElectionRules",
    "EstimationError",
    "EventParseError",
    "Majority",
    "NoPollsError",
    "NoiseSpec",
    "Party",
    "PoeResult",
    "Poll",
    "PollParseError",
    "PollValidationError",
    "PollcastError",
    "PooledSample",
    "PoolingConfig",
    "PosteriorSpec",
    "PriorSpec",
    "Rank",
    "SeatResult",
    "ShareDraw",
    "SimulationConfig",
    "SimulationRun",
    "ThresholdPass",
    "adjust_rounding",
    "allocate",
    "allocate_batch",
    "apply_threshold",
    "build_posterior",
    "density_summary",
    "draw_shares",
    "effective_sample_size",
    "estimate_poe",
    "evaluate_event",
    "nowcast",
    "nowcast_series",
    "parse_event",
    "parse_polls",
    "poe_from_run",
    "pool",
    "pool_polls",
    "publication_dates",
    "read_polls",
    "run_simulation",
    "sainte_lague",
    "select_window",
    "series_csv",
    "simulate",
    "simulate_array",
    "skew_axis",
]

__version__ = "0.1.0"
