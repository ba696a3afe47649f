"""Small synthetic graphs for tests and benchmarks.

Undirected structure is emitted as both directed edges unless noted.
"""

import networkx as nx
import numpy as np

from .graph import Graph


def _from_undirected(nxg, extra=()):
    n = nxg.number_of_nodes()
    e = np.array(list(nxg.edges()), dtype=np.int64).reshape(-1, 2)
    src = np.concatenate([e[:, 0], e[:, 1]] + [np.array([u]) for u, _ in extra])
    dst = np.concatenate([e[:, 1], e[:, 0]] + [np.array([v]) for _, v in extra])
    return Graph.from_edges(src, dst, num_vertices=n)


def two_cliques(size=20):
    """Two ``size``-cliques joined by a single directed bridge edge ``0 -> size``."""
    nxg = nx.disjoint_union(nx.complete_graph(size), nx.complete_graph(size))
    return _from_undirected(nxg, extra=[(0, size)])


def star(leaves=64):
    """Hub 0 connected both ways to every leaf."""
    return _from_undirected(nx.star_graph(leaves))


def preferential_attachment(n, m=3, seed=0):
    """Barabasi-Albert graph with ``m`` attachments per new vertex."""
    return _from_undirected(nx.barabasi_albert_graph(n, m, seed=seed))


def planted_partition(groups=4, size=500, p_in=0.02, p_out=0.001, seed=0):
    """Planted ``groups`` x ``size`` community graph; returns the graph and true communities."""
    nxg = nx.planted_partition_graph(groups, size, p_in, p_out, seed=seed)
    truth = np.repeat(np.arange(groups), size)
    return _from_undirected(nxg), truth
