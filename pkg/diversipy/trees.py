# -*- coding: utf-8 -*-

"""
Edge-weighted trees with ground points placed on their vertices. These carry FRT samples and
define tree (phylogenetic) diversities: δ_T(A) is the length of the smallest subtree spanning
the placements of A.
"""

import networkx as nx
import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path

from diversipy import core
from diversipy import utils


class InvalidTreeError(core.DiversityError):
    """
    Raised when an edge list does not form a tree with positive weights, or when a placement
    refers to a vertex the tree doesn't have.
    """


class WeightedTree():

    def __init__(self, vertices, edges, placement):
        """
        Args:
            vertices: `int`. Number of tree vertices m, labelled 0..m-1.
            edges: list of (u, v, weight) with weight > 0; exactly m-1 of them, forming a tree.
            placement: list of `int`. placement[i] is the tree vertex carrying ground point i.

        Raises:
            `InvalidTreeError`: The edges don't form a tree, a weight isn't positive, or a
                placement is out of range.
        """
        self.vertices = int(vertices)
        self.edges = [(int(u), int(v), float(w)) for u, v, w in edges]
        self.placement = [int(x) for x in placement]
        if self.vertices < 1:
            raise InvalidTreeError("A tree needs at least one vertex.")
        if len(self.edges) != self.vertices - 1:
            raise InvalidTreeError("A tree on {} vertices has {} edges, got {}.".format(
                self.vertices, self.vertices - 1, len(self.edges)))
        if any(w <= 0 for _, _, w in self.edges):
            raise InvalidTreeError("Tree edge weights must be positive.")
        if any(not 0 <= x < self.vertices for x in self.placement):
            raise InvalidTreeError("Placement refers to a vertex outside [0, {}).".format(self.vertices))
        self.graph = nx.Graph()
        self.graph.add_nodes_from(range(self.vertices))
        for u, v, w in self.edges:
            if not (0 <= u < self.vertices and 0 <= v < self.vertices):
                raise InvalidTreeError("Edge ({}, {}) has an endpoint outside the tree.".format(u, v))
            self.graph.add_edge(u, v, weight=w)
        if not nx.is_tree(self.graph):
            raise InvalidTreeError("The edge list has a cycle or leaves the tree disconnected.")
        root = self.placement[0] if self.placement else 0
        #: BFS order from the root; parents come before children.
        self._order = [root] + [v for _, v in nx.bfs_edges(self.graph, root)]
        self._parent = dict(nx.bfs_predecessors(self.graph, root))
        self._distances = None

    @property
    def n(self):
        """Number of placed ground points."""
        return len(self.placement)

    @property
    def total_length(self):
        return float(sum(w for _, _, w in self.edges))

    def edge_weight(self, u, v):
        return self.graph[u][v]["weight"]

    def vertex_distances(self):
        """All-pairs path lengths between tree vertices, as an m x m `numpy.ndarray`."""
        if self._distances is None:
            rows = [u for u, _, _ in self.edges] + [v for _, v, _ in self.edges]
            cols = [v for _, v, _ in self.edges] + [u for u, _, _ in self.edges]
            weights = [w for _, _, w in self.edges] * 2
            adjacency = csr_matrix((weights, (rows, cols)), shape=(self.vertices, self.vertices))
            self._distances = shortest_path(adjacency, method="D", directed=False)
        return self._distances

    def leaf_distances(self):
        """The tree metric restricted to the ground points: n x n `numpy.ndarray`."""
        idx = np.asarray(self.placement)
        return self.vertex_distances()[np.ix_(idx, idx)]

    def subtree_length(self, mask):
        """
        Length of the smallest subtree spanning the placements of the ground points in ``mask``.
        An edge belongs to it exactly when terminals sit on both of its sides.
        """
        terminals = [self.placement[i] for i in utils.iter_members(mask)]
        if len(set(terminals)) <= 1:
            return 0.0
        count = dict.fromkeys(self._order, 0)
        for t in terminals:
            count[t] += 1
        total = len(terminals)
        length = 0.0
        for v in reversed(self._order[1:]):
            parent = self._parent[v]
            if 0 < count[v] < total:
                length += self.edge_weight(v, parent)
            count[parent] += count[v]
        return length

    def split_sides(self):
        """
        For every edge, the ground points on its far side from the root.

        Returns:
            list of (weight, mask) pairs, one per edge.
        """
        below = dict.fromkeys(self._order, 0)
        for i, x in enumerate(self.placement):
            below[x] |= 1 << i
        sides = []
        for v in reversed(self._order[1:]):
            parent = self._parent[v]
            sides.append((self.edge_weight(v, parent), below[v]))
            below[parent] |= below[v]
        return sides

    def suppress_degree_two(self):
        """
        Returns an equivalent tree with every unplaced degree-2 vertex removed, its two edges
        merged into one. Distances between placed vertices are unchanged.
        """
        graph = self.graph.copy()
        placed = set(self.placement)
        for v in list(graph.nodes):
            if v in placed or graph.degree(v) != 2:
                continue
            a, b = list(graph.neighbors(v))
            weight = graph[v][a]["weight"] + graph[v][b]["weight"]
            graph.remove_node(v)
            graph.add_edge(a, b, weight=weight)
        relabel = {v: i for i, v in enumerate(sorted(graph.nodes))}
        edges = [(relabel[u], relabel[v], d["weight"]) for u, v, d in graph.edges(data=True)]
        return WeightedTree(len(relabel), edges, [relabel[x] for x in self.placement])

    def to_json(self):
        return {"vertices": self.vertices, "edges": [[u, v, w] for u, v, w in self.edges],
                "placement": list(self.placement)}

    @classmethod
    def from_json(cls, payload):
        return cls(payload["vertices"], [tuple(e) for e in payload["edges"]], payload["placement"])

    @classmethod
    def path(cls, weights):
        """A path 0 - 1 - ... - len(weights) with every vertex placed, in order."""
        n = len(weights) + 1
        return cls(n, [(i, i + 1, w) for i, w in enumerate(weights)], list(range(n)))

    @classmethod
    def star(cls, weights):
        """A star whose center is ground point 0 and whose leaves are points 1..len(weights)."""
        n = len(weights) + 1
        return cls(n, [(0, i + 1, w) for i, w in enumerate(weights)], list(range(n)))

    def __repr__(self):
        return "<WeightedTree vertices={} n={} length={:.6g}>".format(self.vertices, self.n, self.total_length)
