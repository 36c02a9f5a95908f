"""Coefficient fields: exact rationals and large prime fields.

Elements are plain Python numbers: ``Fraction`` for the rationals and
``int`` in ``[0, p)`` for a prime field, so arithmetic stays cheap and
hashable.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

Scalar = Union[int, Fraction]

# Deterministic Miller-Rabin witnesses valid for n < 3.3e24.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


class BadPrime(ValueError):
    """A prime divides a denominator of a rational input."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class FieldSpec:
    """Either the rationals (``prime is None``) or F_p with p > 2^30."""

    prime: int | None = None

    def __post_init__(self):
        if self.prime is not None:
            if self.prime <= 2**30:
                raise ValueError(f"prime field modulus must exceed 2^30, got {self.prime}")
            if not is_prime(self.prime):
                raise ValueError(f"{self.prime} is not prime")

    @property
    def is_exact_rational(self) -> bool:
        return self.prime is None

    @property
    def zero(self) -> Scalar:
        return Fraction(0) if self.prime is None else 0

    @property
    def one(self) -> Scalar:
        return Fraction(1) if self.prime is None else 1

    def __call__(self, value) -> Scalar:
        """Coerce an int, Fraction or residue into this field."""
        if self.prime is None:
            return Fraction(value)
        return reduce_mod(value, self.prime)

    def inv(self, a: Scalar) -> Scalar:
        if self.prime is None:
            return 1 / Fraction(a)
        return pow(int(a), -1, self.prime)

    def describe(self) -> str:
        return "QQ" if self.prime is None else f"GF({self.prime})"


QQ = FieldSpec()


def GF(p: int) -> FieldSpec:
    return FieldSpec(p)


def reduce_mod(value, p: int) -> int:
    """Image of an integer or rational in F_p; raises BadPrime on p | denominator."""
    if isinstance(value, int):
        return value % p
    value = Fraction(value)
    den = value.denominator % p
    if den == 0:
        raise BadPrime(f"{p} divides the denominator of {value}")
    return value.numerator * pow(den, -1, p) % p
