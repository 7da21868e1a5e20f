import os
import sys
import pytest

sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from rainbow_transversal.core import serialize_latin, to_graph
from rainbow_transversal.generators import cyclic_latin, z2k_table, random_latin, split_colours
from rainbow_transversal.models import ColouredBipartiteGraph


@pytest.fixture
def cyclic3():
    return cyclic_latin(3)


@pytest.fixture
def z4():
    return z2k_table(2)


@pytest.fixture
def all_distinct16():
    """Order-16 array with every cell a distinct colour (d = 1)."""
    return split_colours(random_latin(16, 3), 256, 3)


@pytest.fixture
def cyclic3_graph(cyclic3):
    return to_graph(cyclic3)


@pytest.fixture
def complete4():
    return ColouredBipartiteGraph.from_pairs(4, 4, [(a, b) for a in range(4) for b in range(4)])


@pytest.fixture
def write_array(tmp_path):
    def write(array, name="array.txt"):
        path = tmp_path / name
        path.write_text(serialize_latin(array))
        return str(path)
    return write
