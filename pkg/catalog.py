"""
Named reference rings, their Deligne-product closure, Steiner triple
systems and commuting perfect-matching decompositions of complete graphs.
"""
import copy
import itertools
import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, FrozenSet, Iterator, List, Optional, Tuple

import numpy as np

from config import Config
from graph_model import GraphPair, PairRequirements, decode, encode, hypergraph_candidates
from ring_core import OrderTooLarge, Triple, canonical_form, product, verify

@dataclass(frozen=True)
class CatalogEntry:
    name: Optional[str]  # None mirrors a blank class cell
    pair: GraphPair
    source: str

    @property
    def rank(self) -> int:
        return self.pair.order + 1

@dataclass(frozen=True)
class TripleSystem:
    points: int
    triples: FrozenSet[Triple] = frozenset()

    def as_pair(self) -> GraphPair:
        """Empty digraph carrying the triples as hyperedges"""
        return GraphPair(order=self.points, hyperedges=self.triples)

@dataclass(frozen=True)
class MatchingDecomposition:
    vertices: int
    matchings: Tuple[FrozenSet[Tuple[int, int]], ...]  # matchings[s - 1] pairs vertex 0 with s

    def permutation_matrices(self) -> np.ndarray:
        matrices = np.zeros((len(self.matchings), self.vertices, self.vertices), dtype=np.int64)
        for s, matching in enumerate(self.matchings):
            for u, v in matching:
                matrices[s, u, v] = matrices[s, v, u] = 1
        return matrices

# Loops, arcs and hyperedges as digit strings: "1 2", "12 21", "123"
_TABLE = {
    2: [
        ("", "", "", "Sem"),
        ("1", "", "", "Fib"),
    ],
    3: [
        ("", "12", "", "Ising"),
        ("1", "12", "", "Rep(S3)"),
        ("1", "12 21", "", "PSU(3)_2"),
    ],
    4: [
        ("", "", "123", "Sem^2"),
        ("", "12 13 21 23", "", "PSO(5)_6"),
        ("2", "12", "123", "Sem⊠Fib"),
        ("1 2", "12 21", "123", "PSU(2)_6"),
        ("1 2", "12 13 21 32", "123", "PSU(2)_5"),
        ("1 2 3", "12 13", "123", "Fib^2"),
    ],
    5: [
        ("", "12 13 14", "234", "TY(Z2×Z2,χ,ν)"),
        ("", "13 14 21 24 32 34", "123", "C(so7,e^(πi/14),14)_ad"),
        ("1", "12 13 14", "234", None),
        ("1", "14 21 31", "123 234", "C(so3,e^(πi/6),6)"),
        ("1 3", "14 21 23 31", "123 234", None),
        ("1 3", "12 13 14 21 23 31", "123 234", None),
        ("2 3", "12 13 14 21 23 31 32", "123 234", None),
        ("1 2 3", "12 13 14 21 23 31 43", "123 124 234", None),
        ("1 2 3", "14 21 23 31 32", "123 234", None),
        ("1 2 3 4", "12 13 14 24 32 43", "123 124 134", None),
    ],
    6: [
        ("", "15 25", "123 124 345", "Sem⊠Ising"),
        ("", "12 15 21 25 31 32 41 42", "134 234 345", None),
        ("2", "12 15 25", "123 124 345", "Sem⊠Rep(S3)"),
        ("4", "13 14 15 25 34", "123 124 345", "Fib⊠Ising"),
        ("2", "12 14 24 32 42", "123 125 134 345", "Sem⊠PSU(3)_2"),
        ("1", "15 24 25 32 35 43 45", "123 124 134", None),
        ("2", "12 13 14 23 24 34 35 43 45", "123 124 125", None),
        ("1", "15 23 24 25 32 34 35 42 43 45", "123 124 134", None),
        ("1", "12 13 14 15 23 24 25 32 34 35 42 43 45 52 53 54", "123 124 125 134 135 145", None),
        ("1 2", "12 15 21 25", "123 124 345", None),
        ("1 2", "12 14 21 24 31 32 41 42", "123 125 134 234 345", None),
        ("1 2", "12 13 14 21 23 24 34 35 43 45", "123 124 125", None),
        ("1 2 4", "12 13 14 15 25 34", "123 124 345", "Fib⊠Rep(S3)"),
        ("1 3 4", "12 13 14 15 21 23 24 35 53", "123 125 134 245", "Fib⊠PSU(3)_2"),
        ("1 2 4", "12 13 14 21 23 24 32 34 42", "123 124 125 134 345", None),
        ("1 2 4", "12 13 14 15 21 23 24 31 32 34 42 54", "123 124 125 134 235 345", None),
        ("1 2 3 4", "15 25 35 45", "123 124 134 234", "Rep(Z3^2⋊Z2)"),
        ("1 2 3 4", "15 24 25 32 35 43 45", "123 124 134 234", None),
        ("1 2 3 4", "13 14 15 21 25 31 32 34 41 42 43", "123 124 134 234 345", None),
        ("1 2 4 5", "12 13 14 15 23 25 32 34 35 42 43 53 54", "123 124 125 134 135 145 245", None),
    ],
    7: [
        ("", "14 15 16 21 26 31 36", "123 234 235 456", None),
        ("", "15 16 21 26 32 36 43 46 54 56", "124 134 135 235 245", None),
        ("", "13 14 15 23 24 25 35 36 43 46 54 56", "123 124 125 126 345", None),
        ("3", "14 15 16 21 23 26 31 36", "123 234 235 456", None),
        ("1", "12 13 14 15 16 21 26 31 36", "123 234 235 456", None),
        ("3", "12 13 14 15 16 21 23 26 31 36", "123 234 235 456", None),
        ("2", "12 13 14 15 23 24 25 35 36 43 46 54 56", "123 124 125 126 345", None),
        ("2 3", "12 13 16 23 32 43 53", "124 125 134 135 236 245 456", None),
        ("2 3", "14 15 16 21 23 26 31 32 36", "123 234 235 456", None),
        ("1 5", "16 21 24 25 31 34 35 41 43 45 51 53", "123 145 234 235 236 245 456", None),
        ("1 2", "12 13 14 15 21 23 24 25 35 36 43 46 54 56", "123 124 125 126 345", None),
        ("3 4 5", "12 13 14 15 16 23 25 35 45 54", "124 125 134 135 234 236 456", None),
        ("1 2 3", "16 21 23 24 25 31 32 34 35 41 43 51 53", "123 145 234 235 236 245 456", None),
        ("1 2 3 5", "12 13 14 15 16 21 23 25 31 32 35 43 45 53", "123 124 125 134 135 234 236 245 456", None),
        ("1 2 3 5", "12 13 14 15 16 21 23 24 25 31 32 35 41 43 45 53 65",
         "123 124 125 126 134 135 234 236 245 346 456", None),
        ("1 2 3 5", "12 13 14 16 21 23 24 25 31 32 34 35 42 43 45 46 54 56",
         "123 124 125 134 135 145 234 235 236", None),
        ("1 2 3 4 5", "14 15 16 21 23 24 25 31 32 34 35 43 45 53 54",
         "123 124 125 134 135 234 235 236 245 456", None),
        ("1 2 3 4 5 6", "12 13 14 15 16 23 24 26 32 35 36 42 43 45 52 54 56 63 64 65",
         "123 124 125 126 134 135 136 145 146 156 235 246 256 345 346", None),
    ],
}

# Named from the fusion-matrix presentation rather than a table cell
_FIGURE_NAMES = {"Rep(Z3^2⋊Z2)"}
_BOOLEAN_SOURCE = "boolean STS, k=3"

def _digits(text: str) -> List[Tuple[int, ...]]:
    return [tuple(int(c) for c in token) for token in text.split()]

def table_pair(rank: int, loops: str, arcs: str, hyperedges: str) -> GraphPair:
    """GraphPair from the digit-string row encoding used by the builtin table"""
    return GraphPair(
        order=rank - 1,
        loops=frozenset(v for (v,) in _digits(loops)),
        arcs=frozenset(_digits(arcs)),
        hyperedges=frozenset(_digits(hyperedges)),
    )

@lru_cache(maxsize=None)
def builtin_entries() -> Tuple[CatalogEntry, ...]:
    entries = []
    for rank, rows in _TABLE.items():
        for loops, arcs, hyperedges, name in rows:
            source = "figure, fusion matrix presentation" if name in _FIGURE_NAMES else f"rank-{rank} table"
            entries.append(CatalogEntry(name=name, pair=table_pair(rank, loops, arcs, hyperedges), source=source))
    entries.append(CatalogEntry(name="Rep(Z2^3)", pair=boolean_sts(3).as_pair(), source=_BOOLEAN_SOURCE))
    names = [e.name for e in entries if e.name]
    if len(names) != len(set(names)):
        raise ValueError("Catalog names must be unique")
    return tuple(entries)

def entries_for_rank(rank: int) -> List[CatalogEntry]:
    return [entry for entry in builtin_entries() if entry.rank == rank]

def table_rows(rank: int) -> List[CatalogEntry]:
    """Builtin entries that come from the classification tables"""
    return [entry for entry in entries_for_rank(rank) if entry.source != _BOOLEAN_SOURCE]

@lru_cache(maxsize=None)
def _builtin_index() -> Dict[bytes, CatalogEntry]:
    return {canonical_form(entry.pair).key: entry for entry in builtin_entries()}

@lru_cache(maxsize=None)
def product_entries(max_rank: int) -> Tuple[CatalogEntry, ...]:
    """Products A⊠B of named builtins up to max_rank, in name order, one per isomorphism class"""
    named = [entry for entry in builtin_entries() if entry.name]
    candidates = []
    for a, b in itertools.combinations_with_replacement(range(len(named)), 2):
        left, right = named[a], named[b]
        if left.rank * right.rank > max_rank:
            continue
        pair = encode(product(decode(left.pair), decode(right.pair)))
        candidates.append(CatalogEntry(name=f"{left.name}⊠{right.name}", pair=pair, source="product"))
    seen = set()
    entries = []
    for entry in sorted(candidates, key=lambda e: e.name):
        key = canonical_form(entry.pair).key
        if key not in seen:
            seen.add(key)
            entries.append(entry)
    logging.debug(f"{len(entries)} product entries up to rank {max_rank}")
    return tuple(entries)

@lru_cache(maxsize=None)
def _product_index(rank: int) -> Dict[bytes, str]:
    index = {}
    for entry in product_entries(rank):
        if entry.rank == rank:
            index.setdefault(canonical_form(entry.pair).key, entry.name)
    return index

def match_catalog(g: GraphPair) -> Optional[str]:
    """Name of the builtin or product ring isomorphic to g, None when unnamed"""
    if g.order > Config.MAX_CANON_ORDER:
        return None
    key = canonical_form(g).key
    entry = _builtin_index().get(key)
    if entry is not None and entry.name:
        return entry.name
    return _product_index(g.order + 1).get(key)

def boolean_sts(k: int) -> TripleSystem:
    """Triples {a, b, a xor b} on the nonzero k-bit strings"""
    if k < 1:
        raise ValueError(f"k must be at least 1, got {k}")
    n = 2 ** k - 1
    triples = {tuple(sorted((a, b, a ^ b))) for a, b in itertools.combinations(range(1, n + 1), 2)}
    return TripleSystem(points=n, triples=frozenset(triples))

def is_steiner(ts: TripleSystem) -> bool:
    counts = {pair: 0 for pair in itertools.combinations(range(1, ts.points + 1), 2)}
    for triple in ts.triples:
        if len(set(triple)) != 3 or not all(1 <= v <= ts.points for v in triple):
            return False
        for pair in itertools.combinations(sorted(triple), 2):
            counts[pair] += 1
    return all(count == 1 for count in counts.values())

def sts_generates_ring(ts: TripleSystem) -> bool:
    return verify(decode(ts.as_pair())).is_valid

def steiner_systems(points: int) -> Iterator[TripleSystem]:
    """Every labeled Steiner triple system on 1..points"""
    ones = np.ones((points, points), dtype=np.int64) - np.eye(points, dtype=np.int64)
    for triples in hypergraph_candidates(points, PairRequirements(order=points, matrix=ones)):
        yield TripleSystem(points=points, triples=triples)

def matchings_from_sts(ts: TripleSystem) -> MatchingDecomposition:
    """Perfect matchings of K_{n+1} read off the triples: matching i pairs 0 with i and j with k for {i, j, k}"""
    matchings = []
    for i in range(1, ts.points + 1):
        matching = {(0, i)}
        for triple in ts.triples:
            if i in triple:
                j, k = (v for v in triple if v != i)
                matching.add((j, k))
        matchings.append(frozenset(matching))
    return MatchingDecomposition(vertices=ts.points + 1, matchings=tuple(matchings))

def matchings_commute(md: MatchingDecomposition) -> bool:
    matrices = md.permutation_matrices()
    return all(
        np.array_equal(a @ b, b @ a) for a, b in itertools.combinations(matrices, 2)
    )

def _assign(partner: List[List[int]], s: int, u: int, v: int) -> bool:
    """Set matching s to pair u with v and propagate involution, column and commutation constraints"""
    m = len(partner[0])
    queue = [(s, u, v)]
    while queue:
        s, u, v = queue.pop()
        if partner[s][u] == v:
            continue
        if partner[s][u] != -1 or u == v:
            return False
        if any(partner[t][u] == v for t in range(1, m) if t != s):
            return False
        partner[s][u] = v
        queue.append((s, v, u))
        for t in range(1, m):
            if t == s:
                continue
            x, y = partner[t][u], partner[t][v]
            # M_s M_t = M_t M_s applied to u: M_s(M_t(u)) = M_t(v)
            if x != -1 and y != -1:
                queue.append((s, x, y))
            elif x != -1 and partner[s][x] != -1:
                queue.append((t, v, partner[s][x]))
            elif y != -1 and partner[s][y] != -1:
                queue.append((t, u, partner[s][y]))
    return True

def _rows_commute(partner: List[List[int]]) -> bool:
    rows = partner[1:]
    return all(
        all(a[b[u]] == b[a[u]] for u in range(len(a))) for a, b in itertools.combinations(rows, 2)
    )

def find_matching_decomposition(m: int) -> Optional[MatchingDecomposition]:
    """Partition of K_m into m - 1 pairwise commuting perfect matchings, or None.

    Matching s is the one pairing vertex 0 with s; the search fills the
    remaining partners by backtracking with constraint propagation.
    """
    if m > Config.MATCHING_MAX_VERTICES:
        raise OrderTooLarge(f"Matching search supports at most {Config.MATCHING_MAX_VERTICES} vertices, got {m}")
    if m < 2 or m % 2:
        raise ValueError(f"Perfect matchings of K_m need an even m >= 2, got {m}")

    # Row 0 is the identity and never filled
    start = [[-1] * m for _ in range(m)]
    for s in range(1, m):
        if not _assign(start, s, 0, s):
            return None

    def search(partner: List[List[int]]) -> Optional[List[List[int]]]:
        open_cells = [(s, u) for s in range(1, m) for u in range(m) if partner[s][u] == -1]
        if not open_cells:
            return partner if _rows_commute(partner) else None
        s, u = open_cells[0]
        for v in range(m):
            if v == u or partner[s][v] != -1:
                continue
            trial = copy.deepcopy(partner)
            if _assign(trial, s, u, v):
                solved = search(trial)
                if solved is not None:
                    return solved
        return None

    solved = search(start)
    if solved is None:
        logging.info(f"No commuting perfect-matching decomposition of K_{m}")
        return None
    matchings = tuple(
        frozenset((u, solved[s][u]) for u in range(m) if u < solved[s][u]) for s in range(1, m)
    )
    return MatchingDecomposition(vertices=m, matchings=matchings)
