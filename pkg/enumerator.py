"""
Enumeration of self-dual, multiplicity-free fusion rings of a given rank.

Pipeline: orderly generation of digraphs with loops, pruning by pair
degrees and structural obstructions, hypergraph completion under the
pair-degree requirement, verification, canonicalization and dedupe.
"""
import itertools
import logging
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, Iterator, List, Optional, Tuple

import numpy as np

from catalog import match_catalog
from config import Config
from constants import RejectReason
from graph_model import (
    GraphPair,
    PairRequirements,
    decode,
    encode,
    graph_predicates,
    hypergraph_candidates,
    pair_requirements,
    requirement_matrix,
    undirected_obstructions,
)
from ring_core import (
    FusionData,
    OrderTooLarge,
    RingInvariants,
    batch_commutes,
    canonical_form,
    digraph_cells,
    invariant_tuple,
    verify,
    vertex_permutations,
)

# Entries of the (candidates x permutations) code matrix evaluated at once
_CODE_CHUNK = 2 ** 22
_ORACLE_CHUNK = 2 ** 14
_TASKS_PER_WORKER = 256

@dataclass(frozen=True)
class SearchFilter:
    undirected_only: bool = False
    triangle_free_only: bool = False
    empty_graph_only: bool = False

    def accepts(self, g: GraphPair) -> bool:
        if self.empty_graph_only and (g.loops or g.arcs):
            return False
        if self.undirected_only and not g.is_undirected:
            return False
        if self.triangle_free_only and not graph_predicates(g).is_triangle_free:
            return False
        return True

@dataclass(frozen=True)
class PruneDecision:
    reason: Optional[RejectReason] = None

    @property
    def keep(self) -> bool:
        return self.reason is None

KEEP = PruneDecision()

@dataclass
class SearchStats:
    digraphs_generated: int = 0
    digraphs_kept: int = 0
    pruned_by_reason: Counter = field(default_factory=Counter)
    completions_tested: int = 0
    elapsed: float = 0.0

    @property
    def digraphs_pruned(self) -> int:
        return sum(self.pruned_by_reason.values())

    def merge(self, other: "SearchStats"):
        self.digraphs_generated += other.digraphs_generated
        self.digraphs_kept += other.digraphs_kept
        self.pruned_by_reason.update(other.pruned_by_reason)
        self.completions_tested += other.completions_tested

@dataclass(frozen=True)
class RingEntry:
    key: bytes
    pair: GraphPair  # canonical representative
    invariants: RingInvariants
    catalog_name: Optional[str] = None

@dataclass
class EnumerationResult:
    rank: int
    rings: List[RingEntry]
    stats: SearchStats

    def keys(self) -> List[bytes]:
        return [ring.key for ring in self.rings]

@lru_cache(maxsize=None)
def _code_weights(n: int) -> np.ndarray:
    """weights[c, p]: value of adjacency cell c in the code of relabeling p.

    A digraph's code under permutation p is adjacency.flatten() @ weights[:, p];
    cells follow the vertex-major serialization, most significant first.
    """
    perms = vertex_permutations(n)
    rows, cols = digraph_cells(n)
    m = n * n
    cells = perms[:, rows] * n + perms[:, cols]
    weights = np.zeros((m, len(perms)))
    weights[cells.T, np.arange(len(perms))[None, :]] = (2.0 ** np.arange(m - 1, -1, -1))[:, None]
    return weights

@lru_cache(maxsize=None)
def _extension_patterns(v: int) -> np.ndarray:
    """All blocks for a new vertex v: loop bit, then arc (u, v), arc (v, u) for each u < v"""
    width = 2 * v + 1
    values = np.arange(2 ** width)
    return ((values[:, None] >> np.arange(width - 1, -1, -1)) & 1).astype(np.uint8)

def _allowed_patterns(parent: np.ndarray, patterns: np.ndarray, search_filter: SearchFilter) -> np.ndarray:
    """Restrict new-vertex blocks to those keeping the filter's hereditary property"""
    mask = np.ones(len(patterns), dtype=bool)
    incoming, outgoing = patterns[:, 1::2], patterns[:, 2::2]
    if search_filter.empty_graph_only:
        mask &= ~patterns.any(axis=1)
    if search_filter.undirected_only:
        mask &= (incoming == outgoing).all(axis=1)
    if search_filter.triangle_free_only and len(parent):
        neighbors = (incoming | outgoing).astype(np.int64)
        symmetric = (parent | parent.T).astype(np.int64)
        np.fill_diagonal(symmetric, 0)
        mask &= np.einsum("pu,uw,pw->p", neighbors, symmetric, neighbors) == 0
    return mask

def _canonical_children(parent: np.ndarray, search_filter: SearchFilter) -> np.ndarray:
    """Canonical one-vertex extensions of a canonical digraph, in ascending code order.

    A canonical digraph minus its last vertex is canonical, so extending
    every canonical parent and keeping the children whose identity code
    is minimal yields each isomorphism class exactly once.
    """
    v = parent.shape[0]
    n = v + 1
    patterns = _extension_patterns(v)
    patterns = patterns[_allowed_patterns(parent, patterns, search_filter)]
    weights = _code_weights(n)
    chunk = max(1, _CODE_CHUNK // weights.shape[1])
    kept = [np.zeros((0, n, n), dtype=np.uint8)]
    for start in range(0, len(patterns), chunk):
        block = patterns[start:start + chunk]
        candidates = np.zeros((len(block), n, n), dtype=np.uint8)
        candidates[:, :v, :v] = parent
        candidates[:, v, v] = block[:, 0]
        candidates[:, :v, v] = block[:, 1::2]
        candidates[:, v, :v] = block[:, 2::2]
        codes = candidates.reshape(len(block), -1).astype(np.float64) @ weights
        kept.append(candidates[codes[:, 0] == codes.min(axis=1)])
    return np.concatenate(kept)

def _digraph_arrays(n: int, search_filter: SearchFilter) -> Iterator[np.ndarray]:
    if n == 0:
        yield np.zeros((0, 0), dtype=np.uint8)
        return
    for parent in _digraph_arrays(n - 1, search_filter):
        yield from _canonical_children(parent, search_filter)

def _check_order(n: int):
    if n < 0:
        raise ValueError(f"Order must be non-negative, got {n}")
    if n > Config.MAX_DIGRAPH_ORDER:
        raise OrderTooLarge(f"Digraph generation supports order <= {Config.MAX_DIGRAPH_ORDER}, got {n}")

def generate_digraphs(n: int, search_filter: Optional[SearchFilter] = None) -> Iterator[GraphPair]:
    """One digraph with loops per isomorphism class on n vertices, ascending canonical key"""
    _check_order(n)
    for adjacency in _digraph_arrays(n, search_filter or SearchFilter()):
        yield GraphPair.from_adjacency(adjacency)

def prune(d: GraphPair, search_filter: Optional[SearchFilter] = None) -> PruneDecision:
    if d.hyperedges:
        raise ValueError("Pruning expects a bare digraph")
    if search_filter is not None and not search_filter.accepts(d):
        return PruneDecision(RejectReason.FILTERED)
    if not pair_requirements(d).is_feasible:
        return PruneDecision(RejectReason.NEGATIVE_PAIR_DEGREE)
    if d.is_undirected:
        obstructions = undirected_obstructions(d)
        if obstructions:
            return PruneDecision(RejectReason.from_obstruction(obstructions[0].lemma))
    return KEEP

def complete_hypergraphs(d: GraphPair, w: Optional[PairRequirements] = None) -> Iterator[GraphPair]:
    """Valid (digraph, hypergraph) pairs whose pair degrees equal w"""
    w = pair_requirements(d) if w is None else w
    if not w.is_feasible:
        logging.warning(f"Negative pair degrees {w.negative_pairs()}, no completion possible")
        return
    for hyperedges in hypergraph_candidates(d.order, w):
        pair = d.with_hyperedges(hyperedges)
        if verify(decode(pair)).is_valid:
            yield pair

def exhaustive_completions(d: GraphPair) -> Iterator[GraphPair]:
    """Every hyperedge set on d's vertices that yields a valid ring, without pair-degree pruning"""
    if d.order > Config.ORACLE_MAX_RANK:
        raise OrderTooLarge(f"Exhaustive completion supports order <= {Config.ORACLE_MAX_RANK}, got {d.order}")
    triples = list(itertools.combinations(range(1, d.order + 1), 3))
    for size in range(len(triples) + 1):
        for hyperedges in itertools.combinations(triples, size):
            pair = d.with_hyperedges(hyperedges)
            if verify(decode(pair)).is_valid:
                yield pair

def _expand_parent(task: Tuple[np.ndarray, SearchFilter]) -> Tuple[List[Tuple[bytes, GraphPair]], SearchStats]:
    """Worker: all rings whose digraph is a canonical child of one parent digraph"""
    parent, search_filter = task
    stats = SearchStats()
    children = _canonical_children(parent, search_filter)
    stats.digraphs_generated = len(children)
    n = parent.shape[0] + 1
    requirements = requirement_matrix(children)
    negative = ((requirements < 0) & ~np.eye(n, dtype=bool)).any(axis=(1, 2))
    if negative.any():
        stats.pruned_by_reason[RejectReason.NEGATIVE_PAIR_DEGREE] += int(negative.sum())

    found: Dict[bytes, GraphPair] = {}
    for adjacency, matrix in zip(children[~negative], requirements[~negative]):
        d = GraphPair.from_adjacency(adjacency)
        decision = prune(d, search_filter)
        if not decision.keep:
            stats.pruned_by_reason[decision.reason] += 1
            continue
        stats.digraphs_kept += 1
        for hyperedges in hypergraph_candidates(n, PairRequirements(order=n, matrix=matrix)):
            stats.completions_tested += 1
            pair = d.with_hyperedges(hyperedges)
            if verify(decode(pair)).is_valid:
                key = canonical_form(pair)
                found.setdefault(key.key, pair.relabel(key.witness))
    return sorted(found.items()), stats

def _run_tasks(tasks: Iterator, jobs: int) -> Iterator:
    if jobs <= 1:
        yield from map(_expand_parent, tasks)
        return
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        while True:
            batch = list(itertools.islice(tasks, jobs * _TASKS_PER_WORKER))
            if not batch:
                break
            yield from pool.map(_expand_parent, batch, chunksize=max(1, len(batch) // (jobs * 4)))

def _assemble(rank: int, found: Dict[bytes, GraphPair], stats: SearchStats) -> EnumerationResult:
    rings = []
    for key in sorted(found):
        pair = found[key]
        rings.append(RingEntry(
            key=key,
            pair=pair,
            invariants=invariant_tuple(decode(pair)),
            catalog_name=match_catalog(pair),
        ))
    return EnumerationResult(rank=rank, rings=rings, stats=stats)

def _check_rank(rank: int, extended: bool):
    if rank < 2:
        raise ValueError(f"Rank must be at least 2, got {rank}")
    limit = Config.rank_limit(extended)
    if rank > limit:
        hint = "" if extended else " (use extended mode for larger ranks)"
        raise OrderTooLarge(f"Rank {rank} exceeds the configured limit {limit}{hint}")

def search(rank: int, search_filter: Optional[SearchFilter] = None, jobs: Optional[int] = None,
           extended: bool = False) -> EnumerationResult:
    """All rings of the given rank, one per isomorphism class, sorted by canonical key.

    The unit of parallel work is one canonical digraph on rank - 2
    vertices; each worker extends it by a vertex and runs the rest of the
    pipeline. The merge is keyed and sorted, so output does not depend on
    the worker count.
    """
    _check_rank(rank, extended)
    search_filter = search_filter or SearchFilter()
    jobs = Config.DEFAULT_JOBS if jobs is None else jobs
    n = rank - 1
    _check_order(n)
    started = time.perf_counter()
    logging.info(f"Searching rank {rank} with {jobs} worker(s), filter {search_filter}")

    tasks = ((parent, search_filter) for parent in _digraph_arrays(n - 1, search_filter))
    stats = SearchStats()
    found: Dict[bytes, GraphPair] = {}
    for rings, task_stats in _run_tasks(tasks, jobs):
        stats.merge(task_stats)
        for key, pair in rings:
            found.setdefault(key, pair)

    stats.elapsed = time.perf_counter() - started
    result = _assemble(rank, found, stats)
    logging.info(
        f"Rank {rank}: {stats.digraphs_generated} digraphs, {stats.digraphs_kept} kept, "
        f"{stats.completions_tested} completions, {len(result.rings)} rings in {stats.elapsed:.2f}s"
    )
    for reason, count in sorted(stats.pruned_by_reason.items()):
        logging.info(f"Rank {rank}: pruned {count} by {reason.value}")
    return result

def brute_force_oracle(rank: int) -> EnumerationResult:
    """Rings of the given rank found by trying every symmetric 0/1 assignment"""
    if rank > Config.ORACLE_MAX_RANK:
        raise OrderTooLarge(f"Brute-force oracle supports rank <= {Config.ORACLE_MAX_RANK}, got {rank}")
    if rank < 1:
        raise ValueError(f"Rank must be positive, got {rank}")
    started = time.perf_counter()
    slots = list(itertools.combinations_with_replacement(range(1, rank), 3))
    base = FusionData(rank=rank).tensor()
    stats = SearchStats()
    found: Dict[bytes, GraphPair] = {}
    total = 2 ** len(slots)
    for start in range(0, total, _ORACLE_CHUNK):
        codes = np.arange(start, min(total, start + _ORACLE_CHUNK))
        bits = (codes[:, None] >> np.arange(len(slots))) & 1
        tensors = np.repeat(base[None], len(codes), axis=0)
        for s, slot in enumerate(slots):
            for i, j, k in set(itertools.permutations(slot)):
                tensors[:, i, j, k] = bits[:, s]
        stats.completions_tested += len(codes)
        for row in bits[batch_commutes(tensors)]:
            f = FusionData(rank=rank, constants=frozenset(slot for slot, bit in zip(slots, row) if bit))
            if not verify(f).is_valid:
                raise RuntimeError(f"Batch commutativity check disagrees with verify on {sorted(f.constants)}")
            pair = encode(f)
            key = canonical_form(pair)
            found.setdefault(key.key, pair.relabel(key.witness))
    stats.elapsed = time.perf_counter() - started
    logging.info(f"Oracle rank {rank}: {total} assignments, {len(found)} rings in {stats.elapsed:.2f}s")
    return _assemble(rank, found, stats)
