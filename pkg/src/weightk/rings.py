"""Coefficient rings for matrices and complexes: the integers, the rationals and Z/m."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from weightk.errors import UnsupportedRing


@dataclass(frozen=True)
class Ring:
    """A base ring tag.

    ``modulus`` is 0 for the integers, ``None`` for the rationals and m >= 2 for Z/m.
    """

    modulus: int | None

    @property
    def name(self) -> str:
        if self.modulus is None:
            return "Q"
        if self.modulus == 0:
            return "Z"
        return f"Z/{self.modulus}"

    def __str__(self) -> str:
        return self.name

    @property
    def is_integers(self) -> bool:
        return self.modulus == 0

    @property
    def is_rationals(self) -> bool:
        return self.modulus is None

    @property
    def is_field(self) -> bool:
        return self.modulus is None or (self.modulus >= 2 and is_prime(self.modulus))

    def normalize(self, x):
        if self.modulus is None:
            return Fraction(x)
        if self.modulus == 0:
            if isinstance(x, Fraction):
                if x.denominator != 1:
                    raise ValueError(f"non-integral entry {x} over Z")
                return x.numerator
            return int(x)
        return int(x) % self.modulus

    def is_zero(self, x) -> bool:
        return self.normalize(x) == 0

    def is_unit(self, x) -> bool:
        x = self.normalize(x)
        if self.modulus is None:
            return x != 0
        if self.modulus == 0:
            return x in (1, -1)
        return gcd(x, self.modulus) == 1

    def inverse(self, x):
        x = self.normalize(x)
        if self.modulus is None:
            return 1 / x
        if self.modulus == 0:
            if x not in (1, -1):
                raise ZeroDivisionError(f"{x} is not a unit in Z")
            return x
        return pow(x, -1, self.modulus)

    def require_field_or_integers(self) -> None:
        if not (self.is_integers or self.is_field):
            raise UnsupportedRing(f"{self.name}: lattice quotients need Z, Q or Z/p")


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    p = 2
    while p * p <= n:
        if n % p == 0:
            return False
        p += 1
    return True


ZZ = Ring(0)
QQ = Ring(None)


def Zmod(m: int) -> Ring:
    if m < 2:
        raise ValueError("modulus must be >= 2")
    return Ring(m)


def parse_ring(text: str) -> Ring:
    text = text.strip()
    if text in ("Z", "ZZ", "integers"):
        return ZZ
    if text in ("Q", "QQ", "rationals"):
        return QQ
    if text.startswith("Z/"):
        return Zmod(int(text[2:]))
    raise ValueError(f"unknown ring tag {text!r}")
