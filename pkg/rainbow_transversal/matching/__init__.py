from .matching_engine import HopcroftKarp, max_matching, hall_violator, expansion_check
from .subset_search import SubsetSearch

__all__ = ['HopcroftKarp', 'max_matching', 'hall_violator', 'expansion_check', 'SubsetSearch']
