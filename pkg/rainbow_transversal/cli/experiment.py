import csv
import io
import json
import time
from concurrent.futures import ProcessPoolExecutor
from typing import Dict, List, Optional, Tuple
import numpy as np
from pydantic import BaseModel
from ..configs.logger import logging
from ..generators import random_latin, split_colours
from ..models import ExperimentSpec
from ..oracle import find_transversal_exact
from ..rainbow import solve_auto, solve_pipeline, greedy_rainbow
from ..core import to_graph, verify_rainbow_perfect

CSV_COLUMNS = ["n", "d", "k", "seed", "solver", "success", "size", "stage_failed", "wall_ms"]
SUMMARY_COLUMNS = ["n", "d", "k", "trials", "successes", "success_rate", "mean_size", "mean_wall_ms"]


class TrialTask(BaseModel):
    n: int
    d: float
    k: int
    seed: int
    solver: str
    mixing_steps: Optional[int] = None
    omit_timing: bool = False


class TrialRow(BaseModel):
    n: int
    d: float
    k: int
    seed: int
    solver: str
    success: bool
    size: int
    stage_failed: str = ""
    wall_ms: int = 0


class CellSummary(BaseModel):
    n: int
    d: float
    k: int
    trials: int
    successes: int
    success_rate: float
    mean_size: float
    mean_wall_ms: float


class ExperimentResult(BaseModel):
    rows: List[TrialRow] = []
    aggregates: List[CellSummary] = []
    interrupted: bool = False


def trial_seed(master_seed: int, n: int, d_index: int, trial: int) -> int:
    """Seed of one trial, a fixed function of (master seed, n, d index, trial index)."""
    return int(np.random.SeedSequence([master_seed, n, d_index, trial]).generate_state(1)[0])


def run_trial(task: TrialTask) -> TrialRow:
    array = split_colours(random_latin(task.n, task.seed, task.mixing_steps), task.k, task.seed)
    started = time.perf_counter()
    stage_failed = ""
    if task.solver == "pipeline":
        result = solve_pipeline(array, seed=task.seed)
        matching = result.matching
        stage_failed = result.failure.stage if result.failure else ""
    elif task.solver == "exact":
        matching = find_transversal_exact(array)
    elif task.solver == "greedy":
        matching = greedy_rainbow(to_graph(array), task.seed)
    else:
        auto = solve_auto(array, seed=task.seed)
        matching = auto.matching
        if not auto.found and auto.failures:
            stage_failed = auto.failures[0].stage
    elapsed = time.perf_counter() - started
    success = matching is not None and verify_rainbow_perfect(to_graph(array), matching)
    return TrialRow(n=task.n, d=task.d, k=task.k, seed=task.seed, solver=task.solver, success=success,
                    size=matching.size if matching is not None else 0, stage_failed=stage_failed,
                    wall_ms=0 if task.omit_timing else int(round(elapsed * 1000)))


def summarise(rows: List[TrialRow]) -> List[CellSummary]:
    cells: Dict[Tuple[int, float], List[TrialRow]] = {}
    for row in rows:
        cells.setdefault((row.n, row.d), []).append(row)
    summaries = []
    for (n, d), members in cells.items():
        successes = sum(1 for row in members if row.success)
        summaries.append(CellSummary(
            n=n, d=d, k=members[0].k, trials=len(members), successes=successes,
            success_rate=successes / len(members),
            mean_size=sum(row.size for row in members) / len(members),
            mean_wall_ms=sum(row.wall_ms for row in members) / len(members)))
    return summaries


class ExperimentRunner:
    """
    Sweep of (n, d, trial) cells. Rows come back in (n, d, trial) order whatever
    the worker count; an interrupt keeps the rows finished so far.
    """

    def __init__(self, spec: ExperimentSpec, workers: int = 1, omit_timing: bool = False):
        self.spec = spec
        self.workers = max(1, workers)
        self.omit_timing = omit_timing

    def tasks(self) -> List[TrialTask]:
        spec = self.spec
        return [TrialTask(n=n, d=d, k=ExperimentSpec.colours_for(n, d),
                          seed=trial_seed(spec.master_seed, n, d_index, trial), solver=spec.solver,
                          mixing_steps=spec.mixing_steps, omit_timing=self.omit_timing)
                for n in spec.n_values
                for d_index, d in enumerate(spec.colour_fractions)
                for trial in range(spec.trials)]

    def run(self) -> ExperimentResult:
        tasks = self.tasks()
        logging.info(f"[EXPERIMENT] {len(tasks)} trials on {self.workers} worker(s), solver={self.spec.solver}.")
        rows: List[TrialRow] = []
        interrupted = False
        try:
            if self.workers == 1:
                for task in tasks:
                    rows.append(run_trial(task))
            else:
                with ProcessPoolExecutor(max_workers=self.workers) as pool:
                    for row in pool.map(run_trial, tasks):
                        rows.append(row)
        except KeyboardInterrupt:
            interrupted = True
            logging.warning(f"[EXPERIMENT] Interrupted after {len(rows)} of {len(tasks)} trials.")
        return ExperimentResult(rows=rows, aggregates=summarise(rows), interrupted=interrupted)


def experiment(spec: ExperimentSpec, workers: int = 1, omit_timing: bool = False) -> ExperimentResult:
    return ExperimentRunner(spec, workers, omit_timing).run()


def _csv_text(records: List[BaseModel], columns: List[str]) -> str:
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=columns, lineterminator="\n")
    writer.writeheader()
    for record in records:
        values = record.model_dump()
        writer.writerow({column: values[column] for column in columns})
    return buffer.getvalue()


def rows_csv(result: ExperimentResult) -> str:
    return _csv_text(result.rows, CSV_COLUMNS)


def summary_csv(result: ExperimentResult) -> str:
    return _csv_text(result.aggregates, SUMMARY_COLUMNS)


def results_json(result: ExperimentResult) -> str:
    return json.dumps({"columns": CSV_COLUMNS,
                       "rows": [row.model_dump() for row in result.rows],
                       "aggregates": [cell.model_dump() for cell in result.aggregates],
                       "interrupted": result.interrupted}, indent=2) + "\n"
