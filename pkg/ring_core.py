"""
Self-dual, multiplicity-free fusion rings: structure constants, fusion
matrices, the commutativity check, Frobenius-Perron dimensions, invariant
tuples, Deligne products and brute-force canonical forms of digraph /
hypergraph pairs.

Index 0 is always the identity; its structure constants are implied and
never stored.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import TYPE_CHECKING, Dict, FrozenSet, Iterable, List, Optional, Tuple

import numpy as np

from config import Config

if TYPE_CHECKING:
    from graph_model import GraphPair

Triple = Tuple[int, int, int]

class OrderTooLarge(Exception):
    """Raised when a rank or order exceeds a configured brute-force bound"""
    pass

class NonConvergence(Exception):
    """Raised when power iteration misses the tolerance within max_iter steps"""
    pass

@dataclass(frozen=True)
class FusionData:
    """Rank r ring given by the sorted index triples over 1..r-1 whose constant is 1"""
    rank: int
    constants: FrozenSet[Triple] = frozenset()

    def __post_init__(self):
        if self.rank < 1:
            raise ValueError(f"Rank must be positive, got {self.rank}")
        normalized = set()
        for triple in self.constants:
            entry = tuple(sorted(int(i) for i in triple))
            if len(entry) != 3:
                raise ValueError(f"Structure constant index {triple} is not a triple")
            if entry[0] < 1 or entry[2] > self.rank - 1:
                raise ValueError(f"Structure constant index {triple} outside 1..{self.rank - 1}")
            normalized.add(entry)
        object.__setattr__(self, "constants", frozenset(normalized))

    def value(self, i: int, j: int, k: int) -> int:
        """N_ij^k, identity conventions included"""
        a, b, c = sorted((i, j, k))
        if a == 0:
            return int(b == c)
        return int((a, b, c) in self.constants)

    def tensor(self) -> np.ndarray:
        """Full r x r x r array with tensor[i, j, k] = N_ij^k"""
        r = self.rank
        tensor = np.zeros((r, r, r), dtype=np.int64)
        idx = np.arange(r)
        tensor[0, idx, idx] = 1
        tensor[idx, 0, idx] = 1
        tensor[idx, idx, 0] = 1
        for triple in self.constants:
            for i, j, k in set(itertools.permutations(triple)):
                tensor[i, j, k] = 1
        return tensor

    @classmethod
    def from_tensor(cls, tensor: np.ndarray) -> "FusionData":
        tensor = np.asarray(tensor)
        if tensor.ndim != 3 or len(set(tensor.shape)) != 1:
            raise ValueError(f"Structure constants must form a cube, got shape {tensor.shape}")
        r = tensor.shape[0]
        if not np.isin(tensor, (0, 1)).all():
            raise ValueError("Structure constants must be 0 or 1")
        for axes in itertools.permutations(range(3)):
            if not np.array_equal(tensor, tensor.transpose(axes)):
                raise ValueError("Structure constants are not fully symmetric")
        if not np.array_equal(tensor[0], np.eye(r, dtype=tensor.dtype)):
            raise ValueError("Index 0 does not act as the identity")
        constants = {
            (i, j, k)
            for i, j, k in itertools.combinations_with_replacement(range(1, r), 3)
            if tensor[i, j, k]
        }
        return cls(rank=r, constants=frozenset(constants))

    def relabel(self, sigma: Iterable[int]) -> "FusionData":
        """Apply i -> sigma[i-1] to the non-identity indices"""
        images = tuple(sigma)
        if sorted(images) != list(range(1, self.rank)):
            raise ValueError(f"{images} is not a permutation of 1..{self.rank - 1}")
        return FusionData(
            rank=self.rank,
            constants=frozenset(tuple(images[i - 1] for i in triple) for triple in self.constants),
        )

@dataclass(frozen=True, eq=False)
class FusionMatrices:
    matrices: np.ndarray  # matrices[i][j, k] = N_ij^k

    @property
    def rank(self) -> int:
        return self.matrices.shape[0]

    def __len__(self) -> int:
        return self.rank

    def __getitem__(self, i: int) -> np.ndarray:
        return self.matrices[i]

    def __iter__(self):
        return iter(self.matrices)

@dataclass(frozen=True)
class Verdict:
    """Outcome of a ring check; witness is None when the check passes"""
    witness: Optional[Tuple[int, ...]] = None

    @property
    def is_valid(self) -> bool:
        return self.witness is None

VALID = Verdict()

@dataclass(frozen=True)
class FPDimensions:
    dims: Tuple[float, ...]  # index aligned, dims[0] == 1
    total: float

@dataclass(frozen=True)
class RingInvariants:
    loop_sum: int
    arc_sum: int
    triple_sum: int
    trace_sum: int
    total_sum: int
    fp_dims: Optional[Tuple[float, ...]] = None  # sorted ascending
    fp_total: Optional[float] = None

    @property
    def basic(self) -> Tuple[int, int, int]:
        return (self.loop_sum, self.arc_sum, self.triple_sum)

    def as_dict(self) -> Dict:
        data = {
            "loop_sum": self.loop_sum,
            "arc_sum": self.arc_sum,
            "triple_sum": self.triple_sum,
            "trace_sum": self.trace_sum,
            "total_sum": self.total_sum,
        }
        if self.fp_total is not None:
            data["fp_total"] = self.fp_total
        return data

def fusion_matrices(f: FusionData) -> FusionMatrices:
    return FusionMatrices(f.tensor())

def fusion_rules(f: FusionData) -> List[str]:
    """Fusion rule presentation, one "Xi ⊗ Xj = ..." line per i <= j"""
    def term(k: int) -> str:
        return "𝟙" if k == 0 else f"X{k}"

    rules = []
    for i, j in itertools.combinations_with_replacement(range(1, f.rank), 2):
        terms = [term(k) for k in range(f.rank) if f.value(i, j, k)]
        rules.append(f"X{i} ⊗ X{j} = {' + '.join(terms)}")
    return rules

def _pairwise_products(tensor: np.ndarray) -> np.ndarray:
    """products[i, j] = N_i @ N_j"""
    return np.matmul(tensor[:, None], tensor[None, :])

def verify(f: FusionData) -> Verdict:
    """Check that the fusion matrices pairwise commute.

    A failure carries the lexicographically least (i, j, a, b) with i < j
    and (N_i N_j)_ab != (N_j N_i)_ab.
    """
    products = _pairwise_products(f.tensor())
    upper = np.triu(np.ones((f.rank, f.rank), dtype=bool), 1)
    mismatch = (products != products.transpose(1, 0, 2, 3)) & upper[:, :, None, None]
    hits = np.argwhere(mismatch)
    if len(hits):
        return Verdict(tuple(int(x) for x in hits[0]))
    return VALID

def associativity_oracle(f: FusionData) -> Verdict:
    """Direct associativity check (X_i X_j) X_k = X_i (X_j X_k) over all indices"""
    tensor = f.tensor()
    left = np.einsum("ijm,mkl->ijkl", tensor, tensor)
    right = np.einsum("jkm,iml->ijkl", tensor, tensor)
    hits = np.argwhere(left != right)
    if len(hits):
        return Verdict(tuple(int(x) for x in hits[0]))
    return VALID

def batch_commutes(tensors: np.ndarray) -> np.ndarray:
    """Commutativity mask for a stack of structure-constant cubes, shape (x, r, r, r)"""
    tensors = np.asarray(tensors, dtype=np.int32)
    products = np.matmul(tensors[:, :, None], tensors[:, None, :])
    return (products == products.swapaxes(1, 2)).all(axis=(1, 2, 3, 4))

def perron_eigenvalue(matrix: np.ndarray, tol: float, max_iter: int) -> float:
    """Largest eigenvalue of a symmetric non-negative matrix.

    Iterates on matrix + I from the all-ones vector; the shift keeps a
    bipartite spectrum (+l, -l) from oscillating. Stops once the residual
    ||Bx - lx|| drops below tol, which bounds the eigenvalue error.
    """
    n = matrix.shape[0]
    shifted = np.asarray(matrix, dtype=float) + np.eye(n)
    x = np.ones(n) / np.sqrt(n)
    for _ in range(max_iter):
        y = shifted @ x
        lam = float(x @ y)
        if np.linalg.norm(y - lam * x) < tol:
            return lam - 1.0
        x = y / np.linalg.norm(y)
    raise NonConvergence(f"Power iteration did not reach tolerance {tol} within {max_iter} iterations")

def fp_dimensions(f: FusionData, tol: Optional[float] = None, max_iter: Optional[int] = None) -> FPDimensions:
    """Frobenius-Perron dimension of every basis element; f is expected to verify"""
    tol = Config.FP_TOL if tol is None else tol
    max_iter = Config.FP_MAX_ITER if max_iter is None else max_iter
    if tol <= 0:
        raise ValueError(f"Tolerance must be positive, got {tol}")
    dims = tuple(perron_eigenvalue(matrix, tol, max_iter) for matrix in fusion_matrices(f))
    return FPDimensions(dims=dims, total=float(sum(d * d for d in dims)))

def invariant_tuple(f: FusionData, with_fp: bool = True) -> RingInvariants:
    loops = arcs = triples = 0
    for i, j, k in f.constants:
        if i == j == k:
            loops += 1
        elif i == j or j == k:
            arcs += 1
        else:
            triples += 1
    tensor = f.tensor()
    fp_dims = fp_total = None
    if with_fp and verify(f).is_valid:
        fp = fp_dimensions(f)
        fp_dims, fp_total = tuple(sorted(fp.dims)), fp.total
    return RingInvariants(
        loop_sum=loops,
        arc_sum=arcs,
        triple_sum=triples,
        trace_sum=int(np.einsum("ijj->", tensor)),
        total_sum=int(tensor.sum()),
        fp_dims=fp_dims,
        fp_total=fp_total,
    )

def product(f1: FusionData, f2: FusionData) -> FusionData:
    """Deligne product; basis pair (a, b) becomes index a * rank(f2) + b"""
    rank = f1.rank * f2.rank
    tensor = np.einsum("ace,bdg->abcdeg", f1.tensor(), f2.tensor()).reshape(rank, rank, rank)
    return FusionData.from_tensor(tensor)

@dataclass(frozen=True, order=True)
class CanonicalKey:
    key: bytes
    witness: Tuple[int, ...]  # vertex i of the input becomes witness[i-1]

    def hex(self) -> str:
        return self.key.hex()

@lru_cache(maxsize=None)
def vertex_permutations(n: int) -> np.ndarray:
    """All permutations of range(n) in lexicographic order, identity first"""
    return np.array(list(itertools.permutations(range(n))), dtype=np.intp).reshape(-1, n)

@lru_cache(maxsize=None)
def digraph_cells(n: int) -> Tuple[np.ndarray, np.ndarray]:
    """Adjacency cells in vertex-major order: loop(v), then (u, v), (v, u) for u < v"""
    cells = []
    for v in range(n):
        cells.append((v, v))
        for u in range(v):
            cells.extend([(u, v), (v, u)])
    rows = np.array([c[0] for c in cells], dtype=np.intp)
    cols = np.array([c[1] for c in cells], dtype=np.intp)
    return rows, cols

@lru_cache(maxsize=None)
def _colex_triples(n: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    triples = [(a, b, c) for c in range(n) for b in range(c) for a in range(b)]
    if not triples:
        empty = np.zeros(0, dtype=np.intp)
        return empty, empty, empty
    a, b, c = (np.array(col, dtype=np.intp) for col in zip(*triples))
    return a, b, c

def _serializations(g: "GraphPair") -> np.ndarray:
    """Bit rows of every relabeling of g, one row per vertex permutation"""
    n = g.order
    perms = vertex_permutations(n)
    adjacency = g.adjacency()
    rows, cols = digraph_cells(n)
    bits = adjacency[perms[:, rows], perms[:, cols]]
    a, b, c = _colex_triples(n)
    if len(a):
        hyper = np.zeros((n, n, n), dtype=np.uint8)
        for edge in g.hyperedges:
            for x, y, z in itertools.permutations(v - 1 for v in edge):
                hyper[x, y, z] = 1
        bits = np.concatenate([bits, hyper[perms[:, a], perms[:, b], perms[:, c]]], axis=1)
    return bits.astype(np.uint8)

def canonical_form(g: "GraphPair") -> CanonicalKey:
    """Lexicographically least serialization of g over all vertex relabelings.

    Serialization: digraph cells in vertex-major order, then hyperedge
    indicators in colex order. Ties go to the earliest permutation, so a
    pair that is already canonical gets the identity witness.
    """
    n = g.order
    if n > Config.MAX_CANON_ORDER:
        raise OrderTooLarge(f"Canonical form supports order <= {Config.MAX_CANON_ORDER}, got {n}")
    packed = np.packbits(_serializations(g), axis=1)
    best = int(np.lexsort(packed.T[::-1])[0]) if packed.shape[1] else 0
    inverse = np.argsort(vertex_permutations(n)[best])
    return CanonicalKey(
        key=bytes([n]) + packed[best].tobytes(),
        witness=tuple(int(v) + 1 for v in inverse),
    )

def canonical_pair(g: "GraphPair") -> "GraphPair":
    return g.relabel(canonical_form(g).witness)

def is_isomorphic(a: "GraphPair", b: "GraphPair") -> bool:
    if a.order != b.order:
        return False
    return canonical_form(a).key == canonical_form(b).key
