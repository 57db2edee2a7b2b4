"""Exact rational arithmetic backing every geometric predicate.

gmpy2.mpq is used when available (roughly an order of magnitude faster);
fractions.Fraction is the drop-in fallback.  Both normalize to lowest
terms with a positive denominator, which the rest of the package relies
on for hashing and comparison.
"""

from __future__ import annotations

try:
    from gmpy2 import mpq as _mpq

    def rat(num, den=1):
        return _mpq(num, den)

    _RAT_TYPES = (type(_mpq(0)), int)
except ImportError:  # pragma: no cover - exercised only without gmpy2
    from fractions import Fraction as _mpq

    def rat(num, den=1):
        return _mpq(num, den)

    _RAT_TYPES = (_mpq, int)

ZERO = rat(0)
ONE = rat(1)


def is_rational(x) -> bool:
    return isinstance(x, _RAT_TYPES)


def rat_from_string(text: str):
    """Parse 'a/b' or 'a' into an exact rational. Raises ValueError on 0 denominators."""
    text = text.strip()
    if "/" in text:
        num_s, den_s = text.split("/", 1)
        den = int(den_s)
        if den == 0:
            raise ValueError("zero denominator: %r" % text)
        return rat(int(num_s), den)
    return rat(int(text))


def rat_to_string(x) -> str:
    x = rat(x)
    return "%d/%d" % (x.numerator, x.denominator)


def bit_length(x) -> int:
    """Bit complexity of a rational: max bit length of numerator and denominator."""
    x = rat(x)
    return max(int(x.numerator).bit_length(), int(x.denominator).bit_length())


def words(x, word_bits: int = 64) -> int:
    """Machine words needed to store x, one word per word_bits bits (at least 1)."""
    return max(1, -(-bit_length(x) // word_bits))


def floor_div(a, b) -> int:
    """Exact floor(a / b) for rationals."""
    q = rat(a) / rat(b)
    return q.numerator // q.denominator


def mediant_below(x, scale: int = 2):
    """A positive rational strictly below x (x > 0), cheap to compute."""
    x = rat(x)
    if x <= 0:
        raise ValueError("mediant_below needs a positive rational")
    return rat(x.numerator, x.denominator * scale)
