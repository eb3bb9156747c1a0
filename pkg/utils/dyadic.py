# dyadic.py
#
# Exact probabilities with power-of-two denominators.

from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering

from utils.errors import DyadicError


@total_ordering
@dataclass(frozen=True)
class DyadicProbability:
    """
    Probability numerator / 2**log2_denominator in canonical form
    (numerator odd, or numerator 0 with log2_denominator 0).
    """
    numerator: int
    log2_denominator: int

    def __post_init__(self):
        if self.numerator < 0 or self.log2_denominator < 0:
            raise DyadicError(f"negative component in {self.numerator}/2^{self.log2_denominator}")
        if self.numerator == 0 and self.log2_denominator != 0:
            raise DyadicError("zero must be stored as 0/2^0")
        if self.numerator and self.log2_denominator and self.numerator % 2 == 0:
            raise DyadicError(f"{self.numerator}/2^{self.log2_denominator} is not canonical")
        if self.numerator > (1 << self.log2_denominator):
            raise DyadicError(f"{self.numerator}/2^{self.log2_denominator} exceeds one")

    @classmethod
    def from_fraction(cls, value):
        value = Fraction(value)
        denominator = value.denominator
        if denominator & (denominator - 1):
            raise DyadicError(f"{value} does not have a power-of-two denominator")
        if value.numerator == 0:
            return cls(0, 0)
        return cls(value.numerator, denominator.bit_length() - 1)

    @classmethod
    def power_of_half(cls, k):
        """1 / 2**k"""
        return cls(1, k)

    def to_fraction(self):
        return Fraction(self.numerator, 1 << self.log2_denominator)

    def __float__(self):
        return self.numerator / (1 << self.log2_denominator)

    def __lt__(self, other):
        if not isinstance(other, DyadicProbability):
            return NotImplemented
        return self.to_fraction() < other.to_fraction()

    def __str__(self):
        return f"{self.numerator}/2^{self.log2_denominator}"

    def to_dict(self, decimals=6):
        return {"exact": str(self), "decimal": round(float(self), decimals)}
