from .cli import run, main, build_parser
from .experiment import (experiment, ExperimentRunner, run_trial, trial_seed, summarise, rows_csv, summary_csv,
                         results_json, TrialTask, TrialRow, CellSummary, ExperimentResult, CSV_COLUMNS)

__all__ = ['run', 'main', 'build_parser', 'experiment', 'ExperimentRunner', 'run_trial', 'trial_seed', 'summarise',
           'rows_csv', 'summary_csv', 'results_json', 'TrialTask', 'TrialRow', 'CellSummary', 'ExperimentResult',
           'CSV_COLUMNS']
