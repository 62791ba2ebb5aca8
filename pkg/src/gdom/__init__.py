"""gdom: exact comparison of finite graphs.

Decides tiling, fractional tiling, fractional edge-tiling, and domination
between connected multigraphs, with machine-checkable certificates;
computes the combinatorial and spectral quantities those relations
control (spanning trees, Tutte evaluations, independent sets, matchings,
heat-kernel traces); and checks or hunts counterexamples for the
corresponding inequalities.
"""

__version__ = "0.1.0"

from .multigraph import Multigraph, parse_graph, serialize_graph

__all__ = ["Multigraph", "parse_graph", "serialize_graph", "__version__"]
