"""Shared fixtures: the Rep(Z3^2⋊Z2) presentations, a few named pairs and the 9-point affine STS"""
import numpy as np
import pytest

from catalog import TripleSystem, table_pair

# X_i ⊗ X_j for i <= j, as the indices k with coefficient 1 (0 is the identity)
FIGURE_RULES = {
    (1, 1): (0, 1, 5), (1, 2): (3, 4), (1, 3): (2, 4), (1, 4): (2, 3), (1, 5): (1,),
    (2, 2): (0, 2, 5), (2, 3): (1, 4), (2, 4): (1, 3), (2, 5): (2,),
    (3, 3): (0, 3, 5), (3, 4): (1, 2), (3, 5): (3,),
    (4, 4): (0, 4, 5), (4, 5): (4,),
    (5, 5): (0,),
}


@pytest.fixture
def figure_rules():
    return FIGURE_RULES


@pytest.fixture
def figure_matrices():
    """Fusion matrices N_0..N_5 of Rep(Z3^2⋊Z2), entry [j, k] = N_ij^k"""
    return np.array([
        np.eye(6, dtype=np.int64),
        [[0, 1, 0, 0, 0, 0],
         [1, 1, 0, 0, 0, 1],
         [0, 0, 0, 1, 1, 0],
         [0, 0, 1, 0, 1, 0],
         [0, 0, 1, 1, 0, 0],
         [0, 1, 0, 0, 0, 0]],
        [[0, 0, 1, 0, 0, 0],
         [0, 0, 0, 1, 1, 0],
         [1, 0, 1, 0, 0, 1],
         [0, 1, 0, 0, 1, 0],
         [0, 1, 0, 1, 0, 0],
         [0, 0, 1, 0, 0, 0]],
        [[0, 0, 0, 1, 0, 0],
         [0, 0, 1, 0, 1, 0],
         [0, 1, 0, 0, 1, 0],
         [1, 0, 0, 1, 0, 1],
         [0, 1, 1, 0, 0, 0],
         [0, 0, 0, 1, 0, 0]],
        [[0, 0, 0, 0, 1, 0],
         [0, 0, 1, 1, 0, 0],
         [0, 1, 0, 1, 0, 0],
         [0, 1, 1, 0, 0, 0],
         [1, 0, 0, 0, 1, 1],
         [0, 0, 0, 0, 1, 0]],
        [[0, 0, 0, 0, 0, 1],
         [0, 1, 0, 0, 0, 0],
         [0, 0, 1, 0, 0, 0],
         [0, 0, 0, 1, 0, 0],
         [0, 0, 0, 0, 1, 0],
         [1, 0, 0, 0, 0, 0]],
    ], dtype=np.int64)


@pytest.fixture
def figure_pair():
    return table_pair(6, "1 2 3 4", "15 25 35 45", "123 124 134 234")


@pytest.fixture
def sem():
    return table_pair(2, "", "", "")


@pytest.fixture
def fib():
    return table_pair(2, "1", "", "")


@pytest.fixture
def ising():
    return table_pair(3, "", "12", "")


@pytest.fixture
def psu2_6():
    return table_pair(4, "1 2", "12 21", "123")


@pytest.fixture
def affine_plane():
    """AG(2,3): rows, columns and both diagonal classes of the 3x3 grid"""
    triples = [
        (1, 2, 3), (4, 5, 6), (7, 8, 9),
        (1, 4, 7), (2, 5, 8), (3, 6, 9),
        (1, 5, 9), (2, 6, 7), (3, 4, 8),
        (1, 6, 8), (2, 4, 9), (3, 5, 7),
    ]
    return TripleSystem(points=9, triples=frozenset(triples))
