from .core import validate_latin, to_graph, one_edge_per_colour, verify_rainbow_perfect, canonical_colour_order
from .serializer import (parse_latin, serialize_latin, serialize_matching, parse_matching,
                         serialize_pair, parse_pair, read_latin, read_text, read_verdict, write_text)

__all__ = ['validate_latin', 'to_graph', 'one_edge_per_colour', 'verify_rainbow_perfect',
           'canonical_colour_order', 'parse_latin', 'serialize_latin', 'serialize_matching',
           'parse_matching', 'serialize_pair', 'parse_pair', 'read_latin', 'read_text', 'read_verdict',
           'write_text']
