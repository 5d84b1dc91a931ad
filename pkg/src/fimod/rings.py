"""Coefficient rings: the rationals, prime fields F_p and the integers.

Scalars are plain Python values interpreted through a ring object: Fraction
in lowest terms for Q, an int in [0, p) for F_p, an arbitrary-precision int
for Z. Ring objects own all arithmetic, canonicalization, parsing and
printing, so matrices and modules never touch raw values directly.
"""
from __future__ import annotations

from fractions import Fraction


def is_prime(p: int) -> bool:
    """Deterministic primality test (trial division; desk-scale moduli)."""
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


class RingSpec:
    """Base class for the three supported coefficient rings."""

    is_field = False
    name = "?"

    def coerce(self, x):
        raise NotImplementedError

    def parse(self, s: str):
        raise NotImplementedError

    def to_str(self, v) -> str:
        raise NotImplementedError

    def add(self, a, b):
        raise NotImplementedError

    def sub(self, a, b):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    @property
    def zero(self):
        raise NotImplementedError

    @property
    def one(self):
        raise NotImplementedError

    def is_zero(self, a) -> bool:
        return a == self.zero

    def __repr__(self):
        return self.name

    def __eq__(self, other):
        return type(self) is type(other) and self.name == other.name

    def __hash__(self):
        return hash(self.name)


class RationalField(RingSpec):
    is_field = True
    name = "Q"

    def coerce(self, x):
        return Fraction(x)

    def parse(self, s: str):
        return Fraction(s)

    def to_str(self, v) -> str:
        return str(v)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero in Q")
        return 1 / Fraction(a)

    zero = Fraction(0)
    one = Fraction(1)

    def is_zero(self, a) -> bool:
        return a == 0


class IntegerRing(RingSpec):
    is_field = False
    name = "Z"

    def coerce(self, x):
        if isinstance(x, Fraction):
            if x.denominator != 1:
                raise ValueError(f"{x} is not an integer")
            return int(x)
        return int(x)

    def parse(self, s: str):
        return int(s)

    def to_str(self, v) -> str:
        return str(v)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a in (1, -1):
            return a
        raise ZeroDivisionError(f"{a} is not a unit in Z")

    zero = 0
    one = 1

    def is_zero(self, a) -> bool:
        return a == 0


class PrimeField(RingSpec):
    """F_p for a prime p, elements stored as ints in [0, p)."""

    is_field = True

    def __init__(self, p: int):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.name = f"F{p}"

    def coerce(self, x):
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise ZeroDivisionError(f"denominator of {x} vanishes mod {self.p}")
            return (x.numerator * pow(x.denominator, -1, self.p)) % self.p
        return int(x) % self.p

    def parse(self, s: str):
        return int(s) % self.p

    def to_str(self, v) -> str:
        return str(v)

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError(f"inverse of zero in F_{self.p}")
        return pow(a, -1, self.p)

    zero = 0
    one = 1

    def is_zero(self, a) -> bool:
        return a % self.p == 0


QQ = RationalField()
ZZ = IntegerRing()

_prime_fields: dict[int, PrimeField] = {}


def GF(p: int) -> PrimeField:
    """Shared PrimeField instances, one per prime."""
    if p not in _prime_fields:
        _prime_fields[p] = PrimeField(p)
    return _prime_fields[p]


def ring_to_token(ring: RingSpec):
    """Serialize a ring for presentation documents: "Q", "Z" or {"Fp": p}."""
    if isinstance(ring, RationalField):
        return "Q"
    if isinstance(ring, IntegerRing):
        return "Z"
    if isinstance(ring, PrimeField):
        return {"Fp": ring.p}
    raise TypeError(f"unknown ring {ring!r}")


def ring_from_token(tok) -> RingSpec:
    if tok == "Q":
        return QQ
    if tok == "Z":
        return ZZ
    if isinstance(tok, dict) and set(tok) == {"Fp"}:
        return GF(int(tok["Fp"]))
    raise ValueError(f"unrecognized ring token {tok!r}")


def parse_ring(text: str) -> RingSpec:
    """Parse command-line ring names: Q, Z, F2 / F_2 / GF(7)."""
    t = text.strip()
    if t in ("Q", "QQ"):
        return QQ
    if t in ("Z", "ZZ"):
        return ZZ
    for prefix in ("GF(", "F_", "F"):
        if t.startswith(prefix):
            digits = t[len(prefix):].rstrip(")")
            if digits.isdigit():
                return GF(int(digits))
    raise ValueError(f"unrecognized ring {text!r} (expected Q, Z or Fp)")
