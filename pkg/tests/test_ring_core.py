"""Tests for structure constants, the commutativity check, FP dimensions, products and canonical forms"""
import itertools

import numpy as np
import pytest

from catalog import table_pair, table_rows
from graph_model import GraphPair, decode, encode
from ring_core import (
    FusionData,
    NonConvergence,
    OrderTooLarge,
    associativity_oracle,
    batch_commutes,
    canonical_form,
    canonical_pair,
    fp_dimensions,
    fusion_matrices,
    fusion_rules,
    invariant_tuple,
    is_isomorphic,
    product,
    verify,
)

GOLDEN = (1 + 5 ** 0.5) / 2


def all_rank4_rings():
    slots = list(itertools.combinations_with_replacement(range(1, 4), 3))
    for size in range(len(slots) + 1):
        for chosen in itertools.combinations(slots, size):
            yield FusionData(rank=4, constants=frozenset(chosen))


def test_fusion_matrices_small_rings(sem, fib):
    assert np.array_equal(fusion_matrices(decode(sem))[1], [[0, 1], [1, 0]])
    assert np.array_equal(fusion_matrices(decode(fib))[1], [[0, 1], [1, 1]])
    assert len(fusion_matrices(decode(fib))) == 2


def test_figure_pair_matrices(figure_pair, figure_matrices):
    matrices = fusion_matrices(decode(figure_pair))
    assert matrices.rank == 6
    for i in range(6):
        assert np.array_equal(matrices[i], figure_matrices[i]), f"N_{i} differs"


def test_figure_pair_rules(figure_pair, figure_rules):
    def term(k):
        return "𝟙" if k == 0 else f"X{k}"

    expected = [f"X{i} ⊗ X{j} = {' + '.join(term(k) for k in terms)}" for (i, j), terms in sorted(figure_rules.items())]
    assert fusion_rules(decode(figure_pair)) == expected


def test_verify_figure_pair(figure_pair):
    assert verify(decode(figure_pair)).is_valid


def test_verify_reports_least_commutator(figure_pair):
    broken = figure_pair.with_hyperedges(figure_pair.hyperedges - {(2, 3, 4)})
    f = decode(broken)
    verdict = verify(f)
    assert not verdict.is_valid
    i, j, a, b = verdict.witness
    assert i < j
    tensor = f.tensor()
    assert (tensor[i] @ tensor[j])[a, b] != (tensor[j] @ tensor[i])[a, b]
    # nothing earlier in lexicographic order differs
    for ii, jj in itertools.combinations(range(6), 2):
        diff = np.argwhere(tensor[ii] @ tensor[jj] != tensor[jj] @ tensor[ii])
        if len(diff):
            assert (ii, jj, *diff[0]) == verdict.witness
            break


def test_oracle_agrees_with_verify_at_rank_four():
    rings = list(all_rank4_rings())
    assert len(rings) == 2 ** 10
    mask = batch_commutes(np.stack([f.tensor() for f in rings]))
    for f, commutes in zip(rings, mask):
        valid = verify(f).is_valid
        assert associativity_oracle(f).is_valid == valid, sorted(f.constants)
        assert bool(commutes) == valid


def test_table_rows_pass_the_oracle():
    for rank in range(2, 6):
        for entry in table_rows(rank):
            assert associativity_oracle(decode(entry.pair)).is_valid, entry.name


def test_fp_dimensions_sem_and_fib(sem, fib):
    dims = fp_dimensions(decode(sem))
    assert dims.dims == pytest.approx((1.0, 1.0))
    assert dims.total == pytest.approx(2.0)
    dims = fp_dimensions(decode(fib))
    assert dims.dims[1] == pytest.approx(GOLDEN, abs=1e-9)
    assert dims.total == pytest.approx(3.6180339887, abs=1e-6)


def test_fp_dimensions_figure(figure_pair):
    dims = fp_dimensions(decode(figure_pair))
    assert dims.dims == pytest.approx((1, 2, 2, 2, 2, 1), abs=1e-8)
    assert dims.total == pytest.approx(18.0, abs=1e-6)


def test_fp_dimensions_bad_limits(fib):
    with pytest.raises(NonConvergence):
        fp_dimensions(decode(fib), max_iter=1)
    with pytest.raises(ValueError):
        fp_dimensions(decode(fib), tol=0)


def test_fp_total_is_multiplicative():
    named = [e for rank in (2, 3, 4) for e in table_rows(rank) if e.name]
    for left, right in itertools.combinations_with_replacement(named, 2):
        if left.rank * right.rank > 8:
            continue
        f1, f2 = decode(left.pair), decode(right.pair)
        total = fp_dimensions(product(f1, f2)).total
        assert total == pytest.approx(fp_dimensions(f1).total * fp_dimensions(f2).total, abs=1e-6)


def test_invariant_tuple_examples(sem, fib, psu2_6):
    assert invariant_tuple(decode(fib)).basic == (1, 0, 0)
    assert invariant_tuple(decode(psu2_6)).basic == (2, 2, 1)
    assert invariant_tuple(decode(sem)).basic == (0, 0, 0)


def test_invariant_tuple_trace_and_total():
    for rank in range(2, 8):
        for entry in table_rows(rank):
            inv = invariant_tuple(decode(entry.pair), with_fp=False)
            assert inv.trace_sum == rank + inv.loop_sum + inv.arc_sum
            assert inv.total_sum == 1 + 3 * (rank - 1) + inv.loop_sum + 3 * inv.arc_sum + 6 * inv.triple_sum
            assert inv.fp_dims is None


def test_invariant_tuple_relabel_invariance(figure_pair):
    f = decode(figure_pair)
    expected = invariant_tuple(f)
    for sigma in [(5, 4, 3, 2, 1), (2, 3, 1, 5, 4)]:
        relabeled = invariant_tuple(f.relabel(sigma))
        assert relabeled.basic == expected.basic
        assert relabeled.total_sum == expected.total_sum
        assert relabeled.fp_dims == pytest.approx(expected.fp_dims)


def test_invalid_ring_has_no_fp_invariants(figure_pair):
    broken = figure_pair.with_hyperedges(figure_pair.hyperedges - {(2, 3, 4)})
    inv = invariant_tuple(decode(broken))
    assert inv.fp_dims is None
    assert "fp_total" not in inv.as_dict()


def test_product_examples(sem, fib):
    sem_squared = encode(product(decode(sem), decode(sem)))
    assert is_isomorphic(sem_squared, table_pair(4, "", "", "123"))
    sem_fib = encode(product(decode(sem), decode(fib)))
    assert is_isomorphic(sem_fib, table_pair(4, "2", "12", "123"))
    trivial = FusionData(rank=1)
    assert product(decode(fib), trivial) == decode(fib)


def test_product_is_a_ring():
    for left, right in itertools.product(table_rows(2), table_rows(3)):
        assert verify(product(decode(left.pair), decode(right.pair))).is_valid


def test_fusion_data_validation():
    with pytest.raises(ValueError):
        FusionData(rank=0)
    with pytest.raises(ValueError):
        FusionData(rank=3, constants=frozenset({(1, 2, 3)}))
    with pytest.raises(ValueError):
        FusionData(rank=3, constants=frozenset({(0, 1, 1)}))


def test_fusion_data_tensor(figure_pair):
    f = decode(figure_pair)
    assert FusionData.from_tensor(f.tensor()) == f
    assert f.value(3, 1, 2) == 1
    assert f.value(0, 4, 4) == 1
    assert f.value(5, 5, 5) == 0
    bent = f.tensor()
    bent[1, 2, 3] = 0
    with pytest.raises(ValueError):
        FusionData.from_tensor(bent)
    with pytest.raises(ValueError):
        FusionData.from_tensor(np.full((3, 3, 3), 2))


def test_relabel_commutes_with_decode(figure_pair):
    sigma = (3, 5, 1, 2, 4)
    assert decode(figure_pair.relabel(sigma)) == decode(figure_pair).relabel(sigma)
    with pytest.raises(ValueError):
        figure_pair.relabel((1, 1, 2, 3, 4))


def test_canonical_form_orbit_invariance(psu2_6, figure_pair):
    for g in (psu2_6, table_pair(5, "1 3", "14 21 23 31", "123 234")):
        key = canonical_form(g)
        for sigma in itertools.permutations(range(1, g.order + 1)):
            assert canonical_form(g.relabel(sigma)).key == key.key
    key = canonical_form(figure_pair)
    assert canonical_pair(figure_pair) == figure_pair.relabel(key.witness)
    assert canonical_form(canonical_pair(figure_pair)).witness == tuple(range(1, 6))


def test_canonical_form_distinguishes(ising):
    rep_s3 = table_pair(3, "1", "12", "")
    assert canonical_form(ising).key != canonical_form(rep_s3).key
    assert not is_isomorphic(table_pair(4, "1 2 3", "12 13", "123"), table_pair(4, "1 2", "12 13 21 32", "123"))
    assert not is_isomorphic(ising, GraphPair(order=3))


def test_canonical_form_empty_pair():
    key = canonical_form(GraphPair(order=3))
    assert key.witness == (1, 2, 3)
    assert key.key == bytes([3, 0, 0])
    assert key.hex() == "030000"


def test_canonical_keys_distinct_per_rank():
    for rank in range(2, 8):
        keys = [canonical_form(entry.pair).key for entry in table_rows(rank)]
        assert len(set(keys)) == len(keys), f"rank {rank}"


def test_canonical_form_order_bound():
    with pytest.raises(OrderTooLarge):
        canonical_form(GraphPair(order=9))
