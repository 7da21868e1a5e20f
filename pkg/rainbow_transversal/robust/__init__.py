from .density import density, is_dense, dense_subpair, balance_pair
from .robust_pair import prune_to_robust, certify_robust_pair, min_degree_bound, RobustPairPruner

__all__ = ['density', 'is_dense', 'dense_subpair', 'balance_pair', 'prune_to_robust', 'certify_robust_pair',
           'min_degree_bound', 'RobustPairPruner']
