"""Degenerate inputs, deeper windows and concurrency smoke checks."""
import math
from concurrent.futures import ThreadPoolExecutor

import pytest

from fimod.complexes import (check_inductive, complex_homology, find_N,
                             poset_colimit, signed_shift_slice)
from fimod.dimensions import dimension_table, fit_polynomial
from fimod.functors import (derivative, generation_degree, h0_slice,
                            saturate, shift_presentation, torsion_slice)
from fimod.injections import Injection
from fimod.matrix import Matrix
from fimod.presentations import FIPresentation, FreeElement, free_presentation
from fimod.rings import GF, QQ, ZZ


def test_empty_presentation():
    empty = FIPresentation(QQ, [])
    for n in range(0, 4):
        assert empty.evaluate_slice(n).module.dim() == 0
        assert h0_slice(empty, n).is_zero_module()
    assert generation_degree(empty, 3).degree is None
    assert find_N(empty, 3).bound == 0
    for n in (1, 2):
        ok, _ = check_inductive(empty, 0, n)
        assert ok
    rep = fit_polynomial(dimension_table(empty, 0, 5), 3)
    assert rep.certified and rep.polynomial.degree == -1
    shifted = shift_presentation(empty, 2)
    assert shifted.generator_degrees == ()
    assert derivative(empty).generator_degrees == ()


def test_degenerate_generator_above_slice():
    # d > n yields the zero slice, not an error
    m3 = free_presentation(QQ, 3)
    assert m3.evaluate_slice(1).module.dim() == 0
    assert signed_shift_slice(m3, 1, 2).module.dim() == 0


def test_free_rank_formula_wide_window():
    # the rank formula over the full window, beyond the acceptance degrees
    for ring in (QQ, GF(2)):
        for d in range(0, 7):
            md = free_presentation(ring, d)
            for n in range(d, 9):
                assert md.evaluate_slice(n).module.dim() == math.perm(n, d)
    assert free_presentation(ZZ, 8).evaluate_slice(8).ambient == \
        math.factorial(8)


def test_saturation_degree_zero_ambient():
    # M(0): a degree-2 element first maps into the shift at stage 2
    w = FreeElement(2, {(0, Injection(0, 2, ())): 1})
    rep = saturate(0, [w], 5, 2, ZZ)
    assert rep.stabilization == 2
    assert rep.stages[0].invariants.is_zero
    assert rep.stages[2].invariants.free_rank == 1


def test_shift_by_zero_is_identity_on_slices():
    from fimod.sampling import instantiate, seeded_structures
    for struct in seeded_structures(101, 3):
        p = instantiate(struct, GF(3))
        s = shift_presentation(p, 0)
        for n in range(0, 4):
            assert s.evaluate_slice(n).invariants() == \
                p.evaluate_slice(n).invariants()


def test_torsion_slice_rejects_bad_bound():
    with pytest.raises(ValueError):
        torsion_slice(free_presentation(QQ, 1), 2, 0)


def test_colimit_cutoff_zero():
    col = poset_colimit(free_presentation(QQ, 1), 3, 0)
    assert col.objects == [()]
    assert col.module.dim() == 0


def test_homology_positions_validation():
    with pytest.raises(ValueError):
        complex_homology(free_presentation(QQ, 1), 2, positions=[3])


def test_concurrent_slice_evaluation():
    # slices cached by content hash must be safe under concurrent readers
    p = free_presentation(QQ, 2)
    with ThreadPoolExecutor(max_workers=8) as pool:
        dims = list(pool.map(
            lambda n: p.evaluate_slice(n % 6).module.dim(), range(48)))
    assert dims == [math.perm(n % 6, 2) for n in range(48)]


def test_concurrent_homology():
    from fimod.sampling import instantiate, seeded_structures
    p = instantiate(seeded_structures(5, 1)[0], GF(5))
    with ThreadPoolExecutor(max_workers=4) as pool:
        results = list(pool.map(
            lambda n: complex_homology(p, n, positions=[0]).positions[0],
            [1, 2, 3, 1, 2, 3]))
    assert results[0] == results[3]
    assert results[1] == results[4]
    assert results[2] == results[5]


def test_matrix_rejects_out_of_range_entries():
    with pytest.raises(IndexError):
        Matrix(QQ, 2, 2, {(2, 0): 1})
    with pytest.raises(ValueError):
        Matrix(QQ, -1, 2)
