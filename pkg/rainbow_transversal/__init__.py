"""
Rainbow Transversal - rainbow perfect matchings in Latin arrays

Builds transversals of n x n arrays coloured with at least n colours: an exact
oracle for small orders, and for larger ones a staged construction (dense
subpair, robust core, colour reservation, augmentation, greedy completion)
whose every stage is checked and logged.
"""

from typing import Optional
from .core import read_latin, to_graph, verify_rainbow_perfect
from .models import LatinArray, RainbowMatching, AutoResult, PipelineParams
from .oracle import count_transversals
from .rainbow import solve_auto

__version__ = "0.1.0"

__all__ = ['LatinArray', 'RainbowMatching', 'AutoResult', 'PipelineParams', 'solve', 'count', 'load_array',
           'verify']


def load_array(path: str) -> LatinArray:
    """Read a Latin array from the plain text format ("n k" header, then n rows)."""
    return read_latin(path)


def solve(array: LatinArray, seed: int = 0, params: Optional[PipelineParams] = None) -> AutoResult:
    """
    Find a transversal of `array`.

    Args:
        array: the coloured n x n array
        seed: master seed; equal seeds give equal results
        params: pipeline parameters, used when n is beyond exact search
    Returns:
        AutoResult:
            matching: RainbowMatching or None
            method: "exact", "pipeline" or "augmenting"
            authoritative: True when None means no transversal exists
    """
    return solve_auto(array, seed, params)


def count(array: LatinArray) -> int:
    return count_transversals(array)


def verify(array: LatinArray, matching: Optional[RainbowMatching]) -> bool:
    return verify_rainbow_perfect(to_graph(array), matching)
