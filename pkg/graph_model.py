"""
Digraph / hypergraph pairs on the non-identity basis {1..n}.

A loop at i encodes N_ii^i = 1, an arc (i, j) encodes N_ii^j = 1 and a
hyperedge {i, j, k} encodes N_ij^k = 1 on distinct indices. The module
also carries the pair-degree requirement forced by commutativity and the
structural obstructions for undirected pairs.
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Tuple

import networkx as nx
import numpy as np

from constants import ObstructionKind, TriangleFreeFamily
from ring_core import FusionData, Triple

class NotUndirected(Exception):
    """Raised when a predicate that needs symmetric arcs gets a directed pair"""
    pass

class NotTriangleFree(Exception):
    """Raised when the underlying undirected graph has a triangle"""
    pass

Arc = Tuple[int, int]

@dataclass(frozen=True)
class GraphPair:
    order: int
    loops: FrozenSet[int] = frozenset()
    arcs: FrozenSet[Arc] = frozenset()
    hyperedges: FrozenSet[Triple] = frozenset()

    def __post_init__(self):
        n = self.order
        if n < 0:
            raise ValueError(f"Order must be non-negative, got {n}")

        def check(vertex: int, item) -> int:
            if not 1 <= vertex <= n:
                raise ValueError(f"Vertex {vertex} of {item} outside 1..{n}")
            return vertex

        loops = frozenset(check(int(v), "loops") for v in self.loops)
        arcs = set()
        for arc in self.arcs:
            i, j = (int(v) for v in arc)
            if i == j:
                raise ValueError(f"Arc ({i}, {j}) is a loop, use loops instead")
            arcs.add((check(i, arc), check(j, arc)))
        hyperedges = set()
        for edge in self.hyperedges:
            entry = tuple(sorted(int(v) for v in edge))
            if len(entry) != 3 or len(set(entry)) != 3:
                raise ValueError(f"Hyperedge {edge} does not have 3 distinct vertices")
            hyperedges.add(tuple(check(v, edge) for v in entry))
        object.__setattr__(self, "loops", loops)
        object.__setattr__(self, "arcs", frozenset(arcs))
        object.__setattr__(self, "hyperedges", frozenset(hyperedges))

    @classmethod
    def from_adjacency(cls, adjacency: np.ndarray, hyperedges: Iterable[Triple] = ()) -> "GraphPair":
        """Build from a 0/1 matrix with loops on the diagonal (0-based rows)"""
        adjacency = np.asarray(adjacency)
        n = adjacency.shape[0]
        loops = {i + 1 for i in range(n) if adjacency[i, i]}
        arcs = {(int(i) + 1, int(j) + 1) for i, j in zip(*np.nonzero(adjacency)) if i != j}
        return cls(order=n, loops=frozenset(loops), arcs=frozenset(arcs), hyperedges=frozenset(hyperedges))

    def adjacency(self) -> np.ndarray:
        matrix = np.zeros((self.order, self.order), dtype=np.uint8)
        for v in self.loops:
            matrix[v - 1, v - 1] = 1
        for i, j in self.arcs:
            matrix[i - 1, j - 1] = 1
        return matrix

    def relabel(self, sigma: Iterable[int]) -> "GraphPair":
        """Vertex i becomes sigma[i-1]"""
        images = tuple(sigma)
        if sorted(images) != list(range(1, self.order + 1)):
            raise ValueError(f"{images} is not a permutation of 1..{self.order}")
        return GraphPair(
            order=self.order,
            loops=frozenset(images[v - 1] for v in self.loops),
            arcs=frozenset((images[i - 1], images[j - 1]) for i, j in self.arcs),
            hyperedges=frozenset(tuple(images[v - 1] for v in edge) for edge in self.hyperedges),
        )

    def digraph(self) -> "GraphPair":
        return GraphPair(order=self.order, loops=self.loops, arcs=self.arcs)

    def with_hyperedges(self, hyperedges: Iterable[Triple]) -> "GraphPair":
        return GraphPair(order=self.order, loops=self.loops, arcs=self.arcs, hyperedges=frozenset(hyperedges))

    @property
    def is_undirected(self) -> bool:
        return all((j, i) in self.arcs for i, j in self.arcs)

    def edges(self) -> List[Arc]:
        """Edges of the symmetrized arc set as sorted pairs"""
        return sorted({(min(i, j), max(i, j)) for i, j in self.arcs})

    def underlying_graph(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(range(1, self.order + 1))
        graph.add_edges_from(self.edges())
        return graph

@dataclass(frozen=True, eq=False)
class PairRequirements:
    """Hyperedge pair degrees; matrix[i-1, j-1] is w_ij, the diagonal is unused"""
    order: int
    matrix: np.ndarray

    def __getitem__(self, pair: Arc) -> int:
        i, j = pair
        if i == j:
            raise KeyError(f"Pair degree needs distinct vertices, got {pair}")
        return int(self.matrix[i - 1, j - 1])

    def as_dict(self) -> Dict[Arc, int]:
        return {
            (i, j): int(self.matrix[i - 1, j - 1])
            for i, j in itertools.combinations(range(1, self.order + 1), 2)
        }

    def negative_pairs(self) -> List[Arc]:
        return [pair for pair, w in self.as_dict().items() if w < 0]

    @property
    def is_feasible(self) -> bool:
        return not self.negative_pairs()

    def total(self) -> int:
        return sum(self.as_dict().values())

@dataclass(frozen=True)
class Obstruction:
    lemma: ObstructionKind
    witness: Tuple[int, ...]

@dataclass(frozen=True)
class GraphStats:
    is_undirected: bool
    is_triangle_free: bool
    components: int
    loopless_components: int
    min_degree: int
    diameter_per_component: Tuple[int, ...]  # components ordered by least vertex

@dataclass(frozen=True)
class Classification:
    family: TriangleFreeFamily
    k: Optional[int] = None  # only for BOOLEAN_EMPTY, order = 2^k - 1

    @property
    def generates(self) -> bool:
        return self.family != TriangleFreeFamily.NOT_GENERATING

def decode(g: GraphPair) -> FusionData:
    constants = {(v, v, v) for v in g.loops}
    constants |= {tuple(sorted((i, i, j))) for i, j in g.arcs}
    constants |= set(g.hyperedges)
    return FusionData(rank=g.order + 1, constants=frozenset(constants))

def encode(f: FusionData) -> GraphPair:
    loops, arcs, hyperedges = set(), set(), set()
    for i, j, k in f.constants:
        if i == j == k:
            loops.add(i)
        elif i == j:
            arcs.add((i, k))
        elif j == k:
            arcs.add((j, i))
        else:
            hyperedges.add((i, j, k))
    return GraphPair(order=f.rank - 1, loops=frozenset(loops), arcs=frozenset(arcs), hyperedges=frozenset(hyperedges))

def requirement_matrix(adjacency: np.ndarray) -> np.ndarray:
    """w = 1 + A A^T - A - A^T, batched over leading axes; loops sit on the diagonal of A"""
    a = np.asarray(adjacency, dtype=np.int64)
    at = np.swapaxes(a, -1, -2)
    return 1 + a @ at - a - at

def pair_requirements(g: GraphPair) -> PairRequirements:
    """Number of hyperedges each pair must lie in for the fusion matrices to commute.

    Entry (i, j) of N_i N_j = N_j N_i gives
    w_ij = 1 + sum_k a_ik a_jk - a_ij - a_ji, which is
    1 + sum_k e_ik e_jk - 2 e_ij when the arcs are symmetric.
    """
    return PairRequirements(order=g.order, matrix=requirement_matrix(g.adjacency()))

def hyperedge_pair_degrees(g: GraphPair) -> PairRequirements:
    """Realized pair degrees of the hyperedges of g"""
    matrix = np.zeros((g.order, g.order), dtype=np.int64)
    for edge in g.hyperedges:
        for i, j in itertools.permutations(edge, 2):
            matrix[i - 1, j - 1] += 1
    return PairRequirements(order=g.order, matrix=matrix)

def product_digraph(g1: GraphPair, g2: GraphPair) -> GraphPair:
    """Digraph of the Deligne product, built from the digraphs alone.

    Each factor gets a looped vertex 0 with an arc from every vertex to 0;
    the tensor product of the two minus (0, 0) is the product digraph.
    Vertex (a, b) is labeled a * (order2 + 1) + b.
    """
    def augmented(g: GraphPair) -> np.ndarray:
        matrix = np.zeros((g.order + 1, g.order + 1), dtype=np.uint8)
        matrix[1:, 1:] = g.adjacency()
        matrix[:, 0] = 1
        return matrix

    combined = np.kron(augmented(g1), augmented(g2))
    return GraphPair.from_adjacency(combined[1:, 1:])

def _common_neighbors(graph: nx.Graph, i: int, j: int) -> set:
    return set(graph[i]) & set(graph[j])

def undirected_obstructions(g: GraphPair) -> List[Obstruction]:
    """Every structural reason an undirected pair cannot generate a ring.

    Checked in a fixed order: loopless components (neighborhood degree,
    then minimum degree), loopless edges without a common neighbor,
    looped vertices too far apart, induced paths forcing loops and
    finally negative pair degrees.
    """
    if not g.is_undirected:
        raise NotUndirected(f"Pair has asymmetric arcs: {sorted(a for a in g.arcs if a[::-1] not in g.arcs)}")
    graph = g.underlying_graph()
    looped = g.loops
    found = []

    components = sorted((c for c in nx.connected_components(graph) if len(c) > 1), key=min)
    for component in components:
        if component & looped:
            continue
        sub = graph.subgraph(component)
        for v in sorted(component):
            hood = sub.subgraph(sub[v])
            weak = [u for u in sorted(hood) if hood.degree(u) < 2]
            if weak:
                found.append(Obstruction(ObstructionKind.NEIGHBORHOOD_DEGREE, (v, weak[0])))
        lowest = min(sorted(component), key=sub.degree)
        if sub.degree(lowest) < 4:
            found.append(Obstruction(ObstructionKind.MIN_DEGREE_FOUR, (lowest,)))

    for i, j in g.edges():
        if i not in looped and j not in looped and not _common_neighbors(graph, i, j):
            found.append(Obstruction(ObstructionKind.FORCE_LOOP, (i, j)))

    for i, j in itertools.combinations(sorted(looped), 2):
        if not nx.has_path(graph, i, j) or nx.shortest_path_length(graph, i, j) >= 3:
            found.append(Obstruction(ObstructionKind.LOOP_DISTANCE, (i, j)))

    for i in sorted(graph):
        for j in sorted(graph[i]):
            if _common_neighbors(graph, i, j):
                continue
            # {i, j} is in no triangle; look for an induced path i ~ j ~ k
            ends = [k for k in sorted(graph[j]) if k != i and not graph.has_edge(i, k)]
            if ends and (i not in looped or j not in looped):
                found.append(Obstruction(ObstructionKind.FORCED_LOOPS, (i, j, ends[0])))

    for pair in pair_requirements(g).negative_pairs():
        found.append(Obstruction(ObstructionKind.NEGATIVE_PAIR_DEGREE, pair))

    if found:
        logging.debug(f"{len(found)} obstructions, first {found[0].lemma.value} at {found[0].witness}")
    return found

def graph_predicates(g: GraphPair) -> GraphStats:
    """Degree, triangle and component statistics of the symmetrized arc set; loops add no degree"""
    graph = g.underlying_graph()
    components = sorted(nx.connected_components(graph), key=min)
    return GraphStats(
        is_undirected=g.is_undirected,
        is_triangle_free=not any(nx.triangles(graph).values()),
        components=len(components),
        loopless_components=sum(1 for c in components if not c & g.loops),
        min_degree=min((d for _, d in graph.degree()), default=0),
        diameter_per_component=tuple(nx.diameter(graph.subgraph(c)) for c in components),
    )

def classify_triangle_free(g: GraphPair) -> Classification:
    """Which triangle-free family an undirected, triangle-free pair belongs to.

    Needs at least one non-unit vertex; the empty family starts at k = 1.
    """
    if g.order < 1:
        raise ValueError(f"Triangle-free classification needs order >= 1, got {g.order}")
    stats = graph_predicates(g)
    if not stats.is_undirected:
        raise NotUndirected("Triangle-free classification needs symmetric arcs")
    if not stats.is_triangle_free:
        raise NotTriangleFree("Underlying graph contains a triangle")

    edges = g.edges()
    n = g.order
    if not edges:
        if n == 1 and g.loops == {1}:
            return Classification(TriangleFreeFamily.SINGLE_LOOP)
        if not g.loops and ((n + 1) & n) == 0:
            return Classification(TriangleFreeFamily.BOOLEAN_EMPTY, k=(n + 1).bit_length() - 1)
        return Classification(TriangleFreeFamily.NOT_GENERATING)

    if len(edges) == 1:
        x, y = edges[0]
        if n == 2 and len(g.loops) == 1:
            return Classification(TriangleFreeFamily.EDGE_ONE_LOOP)
        if n == 3 and g.loops == {x, y}:
            return Classification(TriangleFreeFamily.EDGE_TWO_LOOPS_PLUS_ISOLATED)
    return Classification(TriangleFreeFamily.NOT_GENERATING)

def hypergraph_candidates(order: int, w: PairRequirements) -> Iterator[FrozenSet[Triple]]:
    """Every 3-uniform hypergraph on 1..order in which pair {i, j} lies in exactly w_ij hyperedges.

    Pairs are visited in lexicographic order. A triple {i, j, k} with
    i < j < k is decided at pair (i, j), choosing k ascending among
    vertices that still have capacity towards both i and j.
    """
    deficit = np.array(w.matrix, dtype=np.int64)
    pairs = list(itertools.combinations(range(order), 2))
    if any(deficit[i, j] < 0 for i, j in pairs):
        return
    if sum(int(deficit[i, j]) for i, j in pairs) % 3:
        return
    chosen: List[Triple] = []

    def extend(index: int) -> Iterator[FrozenSet[Triple]]:
        if index == len(pairs):
            yield frozenset((i + 1, j + 1, k + 1) for i, j, k in chosen)
            return
        i, j = pairs[index]
        need = int(deficit[i, j])
        if need == 0:
            yield from extend(index + 1)
            return
        options = [k for k in range(j + 1, order) if deficit[i, k] > 0 and deficit[j, k] > 0]
        for picks in itertools.combinations(options, need):
            for k in picks:
                for a, b in ((i, j), (i, k), (j, k)):
                    deficit[a, b] -= 1
                    deficit[b, a] -= 1
                chosen.append((i, j, k))
            yield from extend(index + 1)
            for k in picks:
                for a, b in ((i, j), (i, k), (j, k)):
                    deficit[a, b] += 1
                    deficit[b, a] += 1
                chosen.pop()

    yield from extend(0)
