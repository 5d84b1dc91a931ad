import random
from fractions import Fraction

import pytest

from fimod.matrix import (FieldReducer, Matrix, field_in_span,
                          field_kernel_basis, field_rref, hstack,
                          modular_rank_crosscheck, vstack)
from fimod.rings import GF, QQ, ZZ


def dense_rank_reference(rows):
    """Plain Fraction Gaussian elimination, independent of the library."""
    if not rows or not rows[0]:
        return 0
    m = [[Fraction(x) for x in row] for row in rows]
    nr, nc = len(m), len(m[0])
    r = 0
    for c in range(nc):
        piv = next((i for i in range(r, nr) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        f = m[r][c]
        m[r] = [x / f for x in m[r]]
        for i in range(nr):
            if i != r and m[i][c]:
                g = m[i][c]
                m[i] = [x - g * y for x, y in zip(m[i], m[r])]
        r += 1
    return r


def test_rank_trivial_cases():
    assert Matrix.identity(QQ, 3).rank() == 3
    assert Matrix.zero(GF(7), 2, 5).rank() == 0
    assert Matrix.from_rows(QQ, [[2, 4], [1, 2]]).rank() == 1


@pytest.mark.parametrize("seed", range(6))
def test_rank_matches_reference_all_rings(seed):
    rng = random.Random(seed)
    for _ in range(8):
        nr, nc = rng.randint(1, 7), rng.randint(1, 7)
        rows = [[rng.randint(-5, 5) for _ in range(nc)] for _ in range(nr)]
        expect = dense_rank_reference(rows)
        assert Matrix.from_rows(ZZ, rows).rank() == expect
        assert Matrix.from_rows(QQ, rows).rank() == expect
        qrows = [[Fraction(x, rng.randint(1, 4)) for x in row] for row in rows]
        assert Matrix.from_rows(QQ, qrows).rank() == \
            dense_rank_reference(qrows)


def test_rank_dense_fallback_mod_p():
    rng = random.Random(3)
    rows = [[rng.randrange(5) for _ in range(10)] for _ in range(10)]
    m = Matrix.from_rows(GF(5), rows)
    assert m.density() > 0.5
    assert m.rank() == dense_rank_reference_mod5(rows)


def dense_rank_reference_mod5(rows):
    p = 5
    m = [[x % p for x in row] for row in rows]
    nr, nc = len(m), len(m[0])
    r = 0
    for c in range(nc):
        piv = next((i for i in range(r, nr) if m[i][c] % p), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = pow(m[r][c], -1, p)
        m[r] = [(x * inv) % p for x in m[r]]
        for i in range(nr):
            if i != r and m[i][c]:
                g = m[i][c]
                m[i] = [(x - g * y) % p for x, y in zip(m[i], m[r])]
        r += 1
    return r


def test_modular_crosscheck_advisory():
    rng = random.Random(5)
    for _ in range(10):
        rows = [[rng.randint(-6, 6) for _ in range(5)] for _ in range(4)]
        m = Matrix.from_rows(ZZ, rows)
        report = modular_rank_crosscheck(m, [10007, 10009, 10037])
        assert report["agree"], (rows, report)


def test_modular_crosscheck_skips_pivot_divisors():
    m = Matrix.from_rows(ZZ, [[2]])
    report = modular_rank_crosscheck(m, [2, 3])
    assert report["primes"][2] == "skipped (divides a pivot)"
    assert report["primes"][3] == 1 and report["agree"]


def test_matmul_and_stacking():
    a = Matrix.from_rows(QQ, [[1, 2], [3, 4]])
    b = Matrix.from_rows(QQ, [[0, 1], [1, 0]])
    assert (a @ b) == Matrix.from_rows(QQ, [[2, 1], [4, 3]])
    h = hstack([a, b])
    assert (h.nrows, h.ncols) == (2, 4) and h.get(0, 3) == 1
    v = vstack([a, b])
    assert (v.nrows, v.ncols) == (4, 2) and v.get(3, 0) == 1


def test_field_kernel_and_rref():
    m = Matrix.from_rows(QQ, [[1, 2, 3], [2, 4, 6]])
    basis = field_kernel_basis(m)
    assert len(basis) == 2
    for vec in basis:
        assert m.apply_to_column(vec) == {}
    rows, pivots = field_rref(m)
    assert len(rows) == 1 and pivots == [0]

    mp = Matrix.from_rows(GF(3), [[1, 1, 1], [0, 1, 2]])
    for vec in field_kernel_basis(mp):
        assert mp.apply_to_column(vec) == {}


def test_field_in_span():
    span = Matrix.from_columns(QQ, 3, [{0: 1, 1: 1}, {1: 1, 2: 1}])
    inside = Matrix.from_columns(QQ, 3, [{0: 2, 1: 3, 2: 1}])
    outside = Matrix.from_columns(QQ, 3, [{0: 1}])
    assert field_in_span(span, inside)
    assert not field_in_span(span, outside)


def test_field_reducer_coordinates():
    rel = Matrix.from_columns(QQ, 3, [{0: 1, 1: 1}])
    red = FieldReducer(rel)
    assert red.quotient_dim == 2
    # e0 and -e1 agree in the quotient
    c0 = red.coordinates({0: Fraction(1)})
    c1 = red.coordinates({1: Fraction(-1)})
    assert c0 == c1
    assert red.reduce({0: Fraction(1), 1: Fraction(1)}) == {}
