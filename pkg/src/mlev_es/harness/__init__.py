"""Config-driven experiment batches, comparisons and figure data."""
from .config import OUTPUT_ENV, ExperimentConfig, default_output_root, dump_config, load_config
from .figures import emit_figure_data, load_traces, percentile_index, select_run
from .report import CompareReport, compare_variants
from .runner import ExperimentResult, RunRecord, load_summary, run_experiment, run_single

__all__ = [
    "OUTPUT_ENV",
    "CompareReport",
    "ExperimentConfig",
    "ExperimentResult",
    "RunRecord",
    "compare_variants",
    "default_output_root",
    "dump_config",
    "emit_figure_data",
    "load_config",
    "load_summary",
    "load_traces",
    "percentile_index",
    "run_experiment",
    "run_single",
    "select_run",
]
