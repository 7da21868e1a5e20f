from .reservation import reserve_colours
from .augmentation import (greedy_rainbow, build_reach, trace_back, augmenting_rainbow, AugmentingRainbow, TraceBack,
                           size_benchmark)
from .assembly import trim_core, classify_hard_leftovers, greedy_m0, finish_m3, finish_checks, final_core
from .pipeline import RainbowPipeline, solve_pipeline, solve_auto, solve_greedy

__all__ = ['reserve_colours', 'greedy_rainbow', 'build_reach', 'trace_back', 'augmenting_rainbow',
           'AugmentingRainbow', 'TraceBack', 'size_benchmark', 'trim_core', 'classify_hard_leftovers', 'greedy_m0',
           'finish_m3', 'finish_checks', 'final_core', 'RainbowPipeline', 'solve_pipeline', 'solve_auto', 'solve_greedy']
