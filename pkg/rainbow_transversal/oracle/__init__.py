from .oracle import count_transversals, count_transversals_exhaustive, find_transversal_exact, max_rainbow_matching_exact

__all__ = ['count_transversals', 'count_transversals_exhaustive', 'find_transversal_exact',
           'max_rainbow_matching_exact']
