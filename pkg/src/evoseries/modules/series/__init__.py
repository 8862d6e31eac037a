from evoseries.modules.series.truncated import TruncatedSeries
from evoseries.modules.series.taylor import DEFAULT_ORDER, DEFAULT_T_SAMPLES, NODE_BUDGET, ResidualOrder, TimeSeries, \
    dde_taylor, default_points, pde_taylor, residual_order, series_defect, series_eval, series_rhs, series_summary, \
    series_values, taylor, to_normal_form
