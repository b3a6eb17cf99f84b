"""Time-varying VAR estimation and degree-of-market-efficiency measures."""

__version__ = "0.1.0"

from .errors import *  # noqa: F401,F403
from .timeseries import (  # noqa: E402
    Descriptives, PricePanel, ReturnPanel, describe, load_price_csv, log_returns,
)
from .unitroot import DetrendSpec, UnitRootResult, adf_gls_test, gls_detrend, select_lag_mbic  # noqa: E402
from .var import (  # noqa: E402
    HansenResult, VarModel, fit_var_ols, hansen_lc, newey_west_se, select_lag_bic,
)
from .tvvar import (  # noqa: E402
    StackedSystem, TvArModel, TvVarModel, build_stacked_system, fit_tvar_univariate,
    fit_tvvar_gls,
)
from .efficiency import (  # noqa: E402
    EfficiencyPath, cumulative_response, degree_path, individual_degree, joint_degree,
)
from .irf import ImpulseSurface, ma_coefficients, static_irf, tv_irf  # noqa: E402
from .bootstrap import BandResult, BootstrapConfig, bootstrap_bands, simulate_null  # noqa: E402
from .synth import DgpSpec, gen_panel, path_rmse  # noqa: E402
