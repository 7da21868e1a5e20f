import numpy as np
from ..configs.logger import logging
from ..core import canonical_colour_order
from ..core.core import SeedLike, as_generator
from ..models import ColouredBipartiteGraph, Subpair, ReservationSplit


def reserved_degrees(graph: ColouredBipartiteGraph, reserved: np.ndarray, core: Subpair):
    """Reserved-colour edges from every A-vertex into B1 and from every B-vertex into A1."""
    mask = np.isin(graph.colour_matrix, reserved) & graph.present
    into_b1 = mask[:, core.sorted_b()].sum(axis=1)[graph.rows]
    into_a1 = mask[core.sorted_a(), :].sum(axis=0)[graph.cols]
    return into_b1, into_a1


def reserve_colours(full_graph: ColouredBipartiteGraph, core: Subpair, p: float, seed: SeedLike) -> ReservationSplit:
    """
    Reserve each colour independently with probability p.

    Colours are drawn in order of their first cell so that the reserved set does
    not depend on colour ids. Reports how many vertices have a reserved degree
    into the core outside p|A1| +/- (p|A1|)^(2/3).
    """
    if not 0 <= p < 1:
        raise ValueError(f"[RESERVE COLOURS] Probability must lie in [0, 1), got {p}.")
    rng = as_generator(seed)
    colours = canonical_colour_order(full_graph)
    reserved = colours[rng.random(colours.size) < p]
    gr = full_graph.keep_colours(reserved)
    g_star = full_graph.drop_colours(reserved).remove_vertices(core.part_a, core.part_b)

    expected = p * len(core.part_a)
    spread = expected ** (2 / 3)
    into_b1, into_a1 = reserved_degrees(full_graph, reserved, core)
    outside_a = int((np.abs(into_b1 - expected) > spread).sum())
    outside_b = int((np.abs(into_a1 - expected) > spread).sum())
    logging.info(f"[RESERVE COLOURS] p={p:.4g}: reserved {reserved.size} of {colours.size} colours; "
                 f"{outside_b} B-vertices and {outside_a} A-vertices outside {expected:.2f} +/- {spread:.2f}.")
    return ReservationSplit(p=p, reserved_colours=frozenset(int(c) for c in reserved), g_star=g_star, gr=gr,
                            band=[expected - spread, expected + spread], outside_band_a=outside_a,
                            outside_band_b=outside_b, mean_degree_b=float(into_a1.mean()) if into_a1.size else 0.0)
