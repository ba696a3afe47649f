"""Directed graph container, edge-list ingestion and dataset statistics."""

from __future__ import annotations

import gzip
import io
import os
from dataclasses import dataclass, field

import numpy as np

DEGREE_MEASURES = ("out", "merged")


class EdgeListParseError(ValueError):
    """Raised for malformed edge-list input; carries the 1-based line number."""

    def __init__(self, message, lineno=None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


def _csr(src, dst, n):
    # src must already be sorted (ties broken by dst) for sorted rows
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(src, minlength=n), out=indptr[1:])
    return indptr, np.ascontiguousarray(dst, dtype=np.int64)


@dataclass(frozen=True, eq=False)
class Graph:
    """Immutable directed graph stored as three CSR structures.

    ``out_*`` and ``in_*`` hold the directed adjacency, ``nbr_*`` the merged
    undirected neighbourhood where every neighbour carries weight 2 when
    both directed edges exist and 1 otherwise.

    Vertex ids are dense ``0..num_vertices-1``; ``ids[v]`` is the id that
    vertex ``v`` had in the input.
    """

    num_vertices: int
    out_indptr: np.ndarray
    out_indices: np.ndarray
    in_indptr: np.ndarray
    in_indices: np.ndarray
    nbr_indptr: np.ndarray
    nbr_indices: np.ndarray
    nbr_weights: np.ndarray
    ids: np.ndarray
    _degree_cache: dict = field(default_factory=dict, repr=False, compare=False)

    @classmethod
    def from_edges(cls, src, dst, num_vertices=None, ids=None):
        """Build a graph from parallel arrays of dense source/target ids.

        Self-loops and repeated directed edges are dropped.
        """
        src = np.asarray(src, dtype=np.int64).ravel()
        dst = np.asarray(dst, dtype=np.int64).ravel()
        if src.shape != dst.shape:
            raise ValueError("src and dst must have the same length")
        if num_vertices is None:
            num_vertices = int(max(src.max(initial=-1), dst.max(initial=-1)) + 1)
        n = int(num_vertices)
        if n <= 0:
            raise ValueError("graph has no vertices")
        if src.size and (min(src.min(), dst.min()) < 0 or max(src.max(), dst.max()) >= n):
            raise ValueError("edge endpoints out of range [0, num_vertices)")
        if ids is None:
            ids = np.arange(n, dtype=np.int64)
        ids = np.asarray(ids, dtype=np.int64)
        if ids.shape != (n,):
            raise ValueError("ids must have one entry per vertex")

        keep = src != dst
        key = np.unique(src[keep] * n + dst[keep])
        src, dst = key // n, key % n
        out_indptr, out_indices = _csr(src, dst, n)
        rkey = np.sort(dst * n + src)
        in_indptr, in_indices = _csr(rkey // n, rkey % n, n)

        both = np.concatenate([key, dst * n + src])
        mkey, counts = np.unique(both, return_counts=True)
        nbr_indptr, nbr_indices = _csr(mkey // n, mkey % n, n)

        return cls(
            num_vertices=n,
            out_indptr=out_indptr,
            out_indices=out_indices,
            in_indptr=in_indptr,
            in_indices=in_indices,
            nbr_indptr=nbr_indptr,
            nbr_indices=nbr_indices,
            nbr_weights=counts.astype(np.int64),
            ids=ids,
        )

    @property
    def num_edges(self):
        return int(self.out_indices.size)

    @property
    def out_degree(self):
        return np.diff(self.out_indptr)

    @property
    def in_degree(self):
        return np.diff(self.in_indptr)

    @property
    def merged_degree(self):
        """Per-vertex sum of merged neighbour weights (equals in + out degree)."""
        if "merged" not in self._degree_cache:
            n = self.num_vertices
            rows = np.repeat(np.arange(n), np.diff(self.nbr_indptr))
            self._degree_cache["merged"] = np.bincount(
                rows, weights=self.nbr_weights, minlength=n
            ).astype(np.int64)
        return self._degree_cache["merged"]

    def degree_measure(self, measure="out"):
        """Per-vertex load contribution: ``"out"`` degree or ``"merged"`` degree."""
        if measure == "out":
            return self.out_degree
        if measure == "merged":
            return self.merged_degree
        raise ValueError(f"unknown degree measure {measure!r}; expected one of {DEGREE_MEASURES}")

    def out_neighbors(self, v):
        return self.out_indices[self.out_indptr[v]:self.out_indptr[v + 1]]

    def in_neighbors(self, v):
        return self.in_indices[self.in_indptr[v]:self.in_indptr[v + 1]]

    def neighbors(self, v):
        """Return ``(ids, weights)`` of the merged neighbourhood of ``v``."""
        lo, hi = self.nbr_indptr[v], self.nbr_indptr[v + 1]
        return self.nbr_indices[lo:hi], self.nbr_weights[lo:hi]

    def edges(self):
        """Directed edges as an ``(num_edges, 2)`` array, sorted by source."""
        src = np.repeat(np.arange(self.num_vertices, dtype=np.int64), self.out_degree)
        return np.column_stack([src, self.out_indices])

    @property
    def remapped(self):
        """True when input ids were not already ``0..n-1``."""
        return not np.array_equal(self.ids, np.arange(self.num_vertices))

    def __repr__(self):
        return f"Graph(num_vertices={self.num_vertices}, num_edges={self.num_edges})"


@dataclass(frozen=True)
class GraphStats:
    num_vertices: int
    num_edges: int
    density: float
    mean_outdegree: float
    mode_outdegree: int
    stddev_outdegree: float
    skewness: float


def _open_text(source):
    if isinstance(source, (str, os.PathLike)):
        with open(source, "rb") as fh:
            raw = fh.read()
    elif isinstance(source, (bytes, bytearray)):
        raw = bytes(source)
    else:
        raw = source.read()
        if isinstance(raw, str):
            return raw
    if raw[:2] == b"\x1f\x8b":
        raw = gzip.decompress(raw)
    return raw.decode("utf-8")


def load_edge_list(source):
    """Read a whitespace separated ``u v`` edge list.

    ``source`` may be a path, raw bytes or a binary/text file object;
    gzip-compressed input is detected from its magic bytes. Lines starting
    with ``#`` and blank lines are skipped. Ids may be any non-negative
    integers and are remapped to a dense range in ascending id order.
    """
    text = _open_text(source)
    src, dst = [], []
    for lineno, line in enumerate(io.StringIO(text), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise EdgeListParseError(f"expected 2 fields, got {len(parts)}", lineno)
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise EdgeListParseError(f"non-integer vertex id in {line!r}", lineno) from None
        if u < 0 or v < 0:
            raise EdgeListParseError(f"negative vertex id in {line!r}", lineno)
        src.append(u)
        dst.append(v)
    if not src:
        raise EdgeListParseError("edge list contains no edges")

    raw = np.array([src, dst], dtype=np.int64)
    ids, dense = np.unique(raw, return_inverse=True)
    dense = dense.reshape(raw.shape)
    return Graph.from_edges(dense[0], dense[1], num_vertices=ids.size, ids=ids)


def write_id_map(g, path):
    """Write ``dense_id original_id`` pairs, one per line."""
    with open(path, "w") as fh:
        for dense, original in enumerate(g.ids.tolist()):
            fh.write(f"{dense} {original}\n")


def pearson_skewness(values):
    """First Pearson coefficient ``(mean - mode) / std`` of integer ``values``.

    Uses the population standard deviation; returns 0 when it is 0. The
    smallest value wins ties for the mode.
    """
    values = np.asarray(values, dtype=np.int64)
    std = float(values.std())
    if std == 0:
        return 0.0
    mode = int(np.argmax(np.bincount(values)))
    return (float(values.mean()) - mode) / std


def compute_stats(g):
    """Density and outdegree-distribution shape of ``g``."""
    n = g.num_vertices
    if n < 2:
        raise ValueError("statistics need at least two vertices")
    deg = g.out_degree
    mean = float(deg.mean())
    std = float(deg.std())
    mode = int(np.argmax(np.bincount(deg)))
    skew = pearson_skewness(deg)
    return GraphStats(
        num_vertices=n,
        num_edges=g.num_edges,
        density=g.num_edges / (n * (n - 1)),
        mean_outdegree=mean,
        mode_outdegree=mode,
        stddev_outdegree=std,
        skewness=skew,
    )
