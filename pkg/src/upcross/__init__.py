"""Runs estimator of the upcrossings index for stationary time series."""

from .errors import (DomainError, NoEventsError, NoExceedancesError, NoRunsError,
                     NoUpcrossingsError, ParseError, ThresholdRangeError, UpcrossError)
from .estimators import (ConfidenceInterval, EtaCurve, EtaEstimate, estimate_eta,
                         estimate_eta_star, estimate_theta_via_relation, eta_curve,
                         run_length_distribution, upcrossing_counts_by_k)
from .events import (EventSummary, count_exceedances, detect_runs, detect_upcrossings,
                     summarize_events)
from .montecarlo import McStudyResult, McStudySpec, bias_variance_decomposition, run_study
from .series import Fixed, TimeSeries, TopOrderStatistic, log_returns, resolve_threshold
from .simulate import KnownIndices, ProcessKind, ProcessSpec, known_indices, simulate

__version__ = "0.1.0"
