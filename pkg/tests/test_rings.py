from fractions import Fraction

import pytest

from fimod.rings import (GF, QQ, ZZ, PrimeField, is_prime, parse_ring,
                         ring_from_token, ring_to_token)


def test_is_prime_small():
    def reference(n):
        return n >= 2 and all(n % d for d in range(2, n))

    for n in range(-3, 200):
        assert is_prime(n) == reference(n), n
    assert not is_prime(91)       # 7 * 13
    assert is_prime(7919)


def test_prime_field_rejects_composites():
    with pytest.raises(ValueError):
        PrimeField(6)
    with pytest.raises(ValueError):
        PrimeField(1)


def test_prime_field_arithmetic():
    f7 = GF(7)
    assert f7.coerce(10) == 3
    assert f7.coerce(-1) == 6
    assert f7.add(5, 4) == 2
    assert f7.mul(3, 5) == 1
    assert f7.inv(3) == 5
    assert f7.coerce(Fraction(1, 2)) == 4      # 2 * 4 = 1 mod 7
    with pytest.raises(ZeroDivisionError):
        f7.inv(0)
    with pytest.raises(ZeroDivisionError):
        f7.coerce(Fraction(1, 7))


def test_rational_and_integer_rings():
    assert QQ.coerce("2/4") == Fraction(1, 2)
    assert QQ.inv(Fraction(3, 2)) == Fraction(2, 3)
    assert ZZ.coerce(Fraction(4, 2)) == 2
    with pytest.raises(ValueError):
        ZZ.coerce(Fraction(1, 2))
    with pytest.raises(ZeroDivisionError):
        ZZ.inv(2)
    assert ZZ.inv(-1) == -1


def test_ring_tokens_round_trip():
    for ring in (QQ, ZZ, GF(5)):
        assert ring_from_token(ring_to_token(ring)) == ring
    with pytest.raises(ValueError):
        ring_from_token("R")


def test_parse_ring_names():
    assert parse_ring("Q") == QQ
    assert parse_ring("Z") == ZZ
    assert parse_ring("F5") == GF(5)
    assert parse_ring("F_7") == GF(7)
    assert parse_ring("GF(11)") == GF(11)
    with pytest.raises(ValueError):
        parse_ring("octonions")
