import math
import random
from itertools import permutations

import pytest

from fimod.coinvariants import (MultiIndex, coinvariant_dim,
                                coinvariant_dual_map, coinvariant_table,
                                invariant_basis, monomials, sym_generators)
from fimod.injections import Injection, identity_injection
from fimod.matrix import Matrix
from fimod.rings import GF, QQ, ZZ


def test_monomial_counts():
    assert len(monomials(MultiIndex(1, (3,)), 4)) == math.comb(6, 3)
    assert len(monomials(MultiIndex(2, (1, 2)), 3)) == 3 * math.comb(4, 2)
    assert monomials(MultiIndex(1, (2,)), 0) == []
    assert monomials(MultiIndex(1, (0,)), 0) == [((),)]


def test_coinvariant_dim_examples():
    assert coinvariant_dim(MultiIndex(1, (0,)), 5, QQ).dim == 1
    row = coinvariant_dim(MultiIndex(1, (1,)), 3, QQ)
    assert (row.poly_dim, row.ideal_rank, row.dim) == (3, 1, 2)
    assert coinvariant_dim(MultiIndex(2, (1, 1)), 2, QQ).dim == 0
    assert coinvariant_dim(MultiIndex(1, (0,)), 0, QQ).dim == 1
    assert coinvariant_dim(MultiIndex(1, (2,)), 0, QQ).dim == 0


def test_coinvariant_refuses_z():
    with pytest.raises(ValueError):
        coinvariant_dim(MultiIndex(1, (1,)), 2, ZZ)


def test_table_examples():
    t = coinvariant_table(MultiIndex(1, (1,)), 1, 8, QQ)
    assert t.values == [0, 1, 2, 3, 4, 5, 6, 7]
    t0 = coinvariant_table(MultiIndex(1, (0,)), 1, 6, QQ)
    assert t0.values == [1] * 6


# -- independent oracle: invariants are spanned by monomial orbit sums under
# the full symmetric group, over any field; ranks via dense elimination.

def orbit_sum_ideal_rank(spec, n, ring):
    monos = monomials(spec, n)
    index = {m: k for k, m in enumerate(monos)}
    columns = []
    from fimod.coinvariants import _positive_subdegrees, _permute_monomial
    for jp in _positive_subdegrees(spec.J):
        sub = MultiIndex(spec.r, tuple(jp))
        sub_monos = monomials(sub, n)
        orbits = {}
        for mono in sub_monos:
            orbit = frozenset(_permute_monomial(mono, perm)
                              for perm in permutations(range(1, n + 1)))
            orbits[orbit] = orbit
        rest = MultiIndex(spec.r, tuple(j - p for j, p in zip(spec.J, jp)))
        for orbit in orbits:
            for factor in monomials(rest, n):
                col = {}
                for mono in orbit:
                    prod = tuple(tuple(a + b for a, b in zip(rs, rf))
                                 for rs, rf in zip(mono, factor))
                    col[index[prod]] = col.get(index[prod], 0) + 1
                columns.append(col)
    if not columns:
        return 0
    return Matrix.from_columns(ring, len(monos), columns).rank()


@pytest.mark.parametrize("ring", [QQ, GF(2), GF(3)])
def test_against_orbit_sum_oracle(ring):
    cases = [(MultiIndex(1, (2,)), 3), (MultiIndex(1, (3,)), 3),
             (MultiIndex(1, (2,)), 4), (MultiIndex(2, (1, 1)), 3),
             (MultiIndex(2, (2, 1)), 3), (MultiIndex(2, (1, 1)), 4),
             (MultiIndex(3, (1, 1, 1)), 3)]
    for spec, n in cases:
        row = coinvariant_dim(spec, n, ring)
        oracle_rank = orbit_sum_ideal_rank(spec, n, ring)
        assert row.ideal_rank == oracle_rank, (spec, n, ring.name)


def test_invariant_dimension_matches_orbit_count():
    # over any field the invariant subspace of a permutation module has the
    # orbit sums as a basis
    for ring in (QQ, GF(2)):
        for spec, n in [(MultiIndex(1, (2,)), 4), (MultiIndex(2, (1, 1)), 3)]:
            monos, kernel = invariant_basis(spec, n, ring)
            orbits = set()
            from fimod.coinvariants import _permute_monomial
            for mono in monos:
                orbits.add(frozenset(
                    _permute_monomial(mono, perm)
                    for perm in permutations(range(1, n + 1))))
            assert len(kernel) == len(orbits)


def test_generator_pair_independence():
    def reversed_pair(n):
        tr = list(range(1, n + 1))
        tr[-2], tr[-1] = tr[-1], tr[-2]
        cyc = tuple([n] + list(range(1, n)))
        return [tuple(tr), cyc]

    for n in (2, 3, 4):
        default = coinvariant_dim(MultiIndex(1, (2,)), n, QQ).dim
        other = coinvariant_dim(MultiIndex(1, (2,)), n, QQ,
                                generators=reversed_pair(n)).dim
        assert default == other


def test_semicontinuity_rational_vs_mod_p():
    for p in (2, 3):
        for spec in (MultiIndex(1, (2,)), MultiIndex(2, (1, 1))):
            for n in (2, 3, 4):
                dq = coinvariant_dim(spec, n, QQ).dim
                dp = coinvariant_dim(spec, n, GF(p)).dim
                assert dq <= dp


def test_classical_total_dimension():
    for n in (1, 2, 3, 4):
        total = sum(coinvariant_dim(MultiIndex(1, (j,)), n, QQ).dim
                    for j in range(0, math.comb(n, 2) + 1))
        assert total == math.factorial(n)


def test_dual_map_examples():
    f12 = Injection(1, 2, (1,))
    dm = coinvariant_dual_map(MultiIndex(1, (1,)), f12, QQ)
    assert (dm.nrows, dm.ncols) == (1, 0)
    ident = coinvariant_dual_map(MultiIndex(1, (1,)), identity_injection(3), QQ)
    assert ident == Matrix.identity(QQ, 2)


def test_dual_map_functoriality():
    rng = random.Random(5)
    for _ in range(8):
        lo = rng.randint(1, 3)
        mid = rng.randint(lo, 4)
        hi = rng.randint(mid, 4)
        f = Injection(lo, mid, tuple(rng.sample(range(1, mid + 1), lo)))
        g = Injection(mid, hi, tuple(rng.sample(range(1, hi + 1), mid)))
        spec = MultiIndex(1, (rng.randint(0, 2),))
        lhs = coinvariant_dual_map(spec, g.after(f), QQ)
        rhs = coinvariant_dual_map(spec, g, QQ) @ \
            coinvariant_dual_map(spec, f, QQ)
        assert lhs == rhs


def test_sym_generators_degenerate():
    assert sym_generators(0) == []
    assert sym_generators(1) == []
    assert sym_generators(2) == [(2, 1), (2, 1)]
