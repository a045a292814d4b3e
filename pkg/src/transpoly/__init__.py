"""Exact and asymptotic volumes of transportation polytopes and the Birkhoff polytope."""

__version__ = "0.1.0"

from .counting import (  # noqa: E402
    BudgetExceeded,
    GeneralMargins,
    MarginError,
    MarginSpec,
    brute_force_count,
    count_constant_margins,
    count_margins_general,
)
from .ehrhart import (  # noqa: E402
    EhrhartPolynomial,
    ScaledVolume,
    absolute_volume,
    ehrhart_value,
    interpolate_ehrhart,
    period,
    relative_volume,
    verify_polynomial,
)
from .asymptotics import (  # noqa: E402
    HypReport,
    LogReal,
    estimate_birkhoff_volume_log,
    estimate_count_log,
    estimate_rel_volume_proxy_log,
    estimate_volume_log,
    hyp_margin,
    log_binomial,
)
from .cache import CachedCounter, CountCache  # noqa: E402
