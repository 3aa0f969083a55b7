"""
18-bit binary floating point
============================

Bit layout, most significant first::

    sign (1) | exponent (6, bias 31) | mantissa (11)

Normal numbers carry an implicit leading 1, exponent field 0 encodes zero and
subnormals, and exponent field 63 is reserved for infinity/NaN which are never
produced (overflow raises ``Q18RangeError`` instead).

Every operation computes the exact result with Python integers and rounds it
once, to nearest with ties to even.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import Q18RangeError

WIDTH = 18
EXP_BITS = 6
MAN_BITS = 11
BIAS = 31
EXP_SPECIAL = (1 << EXP_BITS) - 1
MIN_EXP = 1 - BIAS  # exponent of the smallest normal, -30
ULP_MIN_EXP = MIN_EXP - MAN_BITS  # spacing of subnormals, 2**-41
MAX_FINITE = math.ldexp((1 << (MAN_BITS + 1)) - 1, EXP_SPECIAL - 1 - BIAS - MAN_BITS)
MIN_SUBNORMAL = math.ldexp(1, ULP_MIN_EXP)

_SIGN_SHIFT = WIDTH - 1
_HIDDEN = 1 << MAN_BITS
_MAN_MASK = _HIDDEN - 1


@dataclass(frozen=True)
class Q18Config:
    rounding: str = "nearest-even"
    flush_subnormals: bool = False

    def __post_init__(self):
        if self.rounding != "nearest-even":
            raise ValueError(f"only nearest-even rounding is supported, got {self.rounding!r}")


DEFAULT_CONFIG = Q18Config()


@dataclass(frozen=True, slots=True)
class Q18:
    """An 18-bit float held as its raw bit pattern."""

    bits: int

    def __post_init__(self):
        if not (0 <= self.bits < (1 << WIDTH)):
            raise ValueError(f"bit pattern {self.bits!r} does not fit in {WIDTH} bits")

    @property
    def sign(self) -> int:
        return self.bits >> _SIGN_SHIFT

    @property
    def exponent(self) -> int:
        return (self.bits >> MAN_BITS) & EXP_SPECIAL

    @property
    def mantissa(self) -> int:
        return self.bits & _MAN_MASK

    @property
    def is_finite(self) -> bool:
        return self.exponent != EXP_SPECIAL

    @property
    def is_zero(self) -> bool:
        return self.exponent == 0 and self.mantissa == 0

    @property
    def is_subnormal(self) -> bool:
        return self.exponent == 0 and self.mantissa != 0

    @classmethod
    def from_real(cls, x, config: Q18Config = DEFAULT_CONFIG) -> "Q18":
        return q18_from_real(x, config)

    @classmethod
    def from_string(cls, text: str) -> "Q18":
        """Parse the ``s_eeeeee_mmmmmmmmmmm`` form (underscores optional)."""
        digits = text.strip().replace("_", "")
        if len(digits) != WIDTH or set(digits) - {"0", "1"}:
            raise ValueError(f"not an {WIDTH}-bit binary string: {text!r}")
        return cls(int(digits, 2))

    def to_string(self) -> str:
        return f"{self.sign}_{self.exponent:0{EXP_BITS}b}_{self.mantissa:0{MAN_BITS}b}"

    def __str__(self):
        return self.to_string()

    def __float__(self):
        return q18_to_real(self)

    def __neg__(self):
        return Q18(self.bits ^ (1 << _SIGN_SHIFT))

    def __add__(self, other):
        if not isinstance(other, Q18):
            return NotImplemented
        return q18_add(self, other)

    def __sub__(self, other):
        if not isinstance(other, Q18):
            return NotImplemented
        return q18_add(self, -other)

    def __mul__(self, other):
        if not isinstance(other, Q18):
            return NotImplemented
        return q18_mul(self, other)


ZERO = Q18(0)
ONE = Q18(BIAS << MAN_BITS)


def decompose(q: Q18):
    """Exact value of a finite pattern as ``(sign, significand, exponent)``.

    The value is ``(-1)**sign * significand * 2**exponent``.
    """
    e = q.exponent
    if e == EXP_SPECIAL:
        raise ValueError(f"{q} is infinity or NaN")
    if e == 0:
        return q.sign, q.mantissa, ULP_MIN_EXP
    return q.sign, _HIDDEN | q.mantissa, e - BIAS - MAN_BITS


def round_exact(sign: int, sig: int, exp: int, config: Q18Config = DEFAULT_CONFIG) -> Q18:
    """Round ``(-1)**sign * sig * 2**exp`` (``sig >= 0``) to the nearest Q18."""
    if sig == 0:
        return Q18(sign << _SIGN_SHIFT)
    top = exp + sig.bit_length() - 1
    ulp = max(top - MAN_BITS, ULP_MIN_EXP)
    shift = ulp - exp
    if shift > 0:
        q = sig >> shift
        rem = sig - (q << shift)
        half = 1 << (shift - 1)
        if rem > half or (rem == half and q & 1):
            q += 1
    else:
        q = sig << -shift
    if q == _HIDDEN << 1:
        q >>= 1
        ulp += 1
    if q < _HIDDEN:
        # subnormal range (ulp is already at its minimum)
        if q == 0 or config.flush_subnormals:
            return Q18(sign << _SIGN_SHIFT)
        return Q18((sign << _SIGN_SHIFT) | q)
    efield = ulp + MAN_BITS + BIAS
    if efield >= EXP_SPECIAL:
        raise Q18RangeError(f"result exceeds the Q18 range (max {MAX_FINITE:g})")
    return Q18((sign << _SIGN_SHIFT) | (efield << MAN_BITS) | (q & _MAN_MASK))


def q18_from_real(x, config: Q18Config = DEFAULT_CONFIG) -> Q18:
    """Nearest-even Q18 for a real number (float, int or dyadic Fraction)."""
    if isinstance(x, Fraction):
        num, den = x.numerator, x.denominator
        if den & (den - 1):
            raise ValueError("only dyadic fractions are converted exactly")
        sign = int(num < 0)
        return round_exact(sign, abs(num), -(den.bit_length() - 1), config)
    if isinstance(x, int) and not isinstance(x, bool):
        return round_exact(int(x < 0), abs(x), 0, config)
    x = float(x)
    if math.isnan(x):
        raise ValueError("cannot encode NaN")
    if math.isinf(x):
        raise Q18RangeError(f"cannot encode {x}")
    sign = int(math.copysign(1.0, x) < 0)
    num, den = abs(x).as_integer_ratio()
    return round_exact(sign, num, -(den.bit_length() - 1), config)


def q18_to_real(q: Q18) -> float:
    """Exact value of ``q`` as a Python float (every Q18 value fits in a double)."""
    sign, sig, exp = decompose(q)
    value = math.ldexp(sig, exp)
    return -value if sign else value


def q18_mul(a: Q18, b: Q18, config: Q18Config = DEFAULT_CONFIG) -> Q18:
    """Correctly rounded product. A product with a zero operand is +0."""
    sa, ma, ea = decompose(a)
    sb, mb, eb = decompose(b)
    if ma == 0 or mb == 0:
        return ZERO
    return round_exact(sa ^ sb, ma * mb, ea + eb, config)


def q18_add(a: Q18, b: Q18, config: Q18Config = DEFAULT_CONFIG) -> Q18:
    """Correctly rounded sum. Exact cancellation gives +0; (-0) + (-0) is -0."""
    sa, ma, ea = decompose(a)
    sb, mb, eb = decompose(b)
    if ma == 0 and mb == 0:
        return Q18((sa & sb) << _SIGN_SHIFT)
    e = min(ea, eb)
    va = ma << (ea - e)
    vb = mb << (eb - e)
    total = (-va if sa else va) + (-vb if sb else vb)
    if total == 0:
        return ZERO
    return round_exact(int(total < 0), abs(total), e, config)


def ulp(q: Q18) -> float:
    """Spacing between ``|q|`` and the next larger magnitude."""
    e = q.exponent
    return math.ldexp(1, max(e, 1) - BIAS - MAN_BITS)
