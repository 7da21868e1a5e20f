from .generators import cyclic_latin, z2k_table, random_latin, split_colours, generate

__all__ = ['cyclic_latin', 'z2k_table', 'random_latin', 'split_colours', 'generate']
