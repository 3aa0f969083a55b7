import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from lvdt_flann.errors import Q18RangeError
from lvdt_flann.qfloat import (MAX_FINITE, MIN_SUBNORMAL, ONE, ZERO, Q18, Q18Config, q18_add,
                               q18_from_real, q18_mul, q18_to_real, ulp)

import q18_oracle as oracle

finite_bits = st.integers(0, oracle.N_FINITE - 1).flatmap(
    lambda m: st.sampled_from([m, m | (1 << 17)]))
q18s = finite_bits.map(Q18)
reals = st.floats(-1e9, 1e9, allow_nan=False)


def enc(x):
    return q18_from_real(x)


def test_one_layout():
    q = enc(1.0)
    assert (q.sign, q.exponent, q.mantissa) == (0, 31, 0)
    assert q == ONE
    assert q.to_string() == "0_011111_00000000000"


def test_zero_layout():
    assert enc(0.0).bits == 0 and enc(0.0) == ZERO
    assert q18_to_real(Q18(0)) == 0.0
    assert enc(-0.0).bits == 1 << 17


def test_null_reading_half_ulp():
    assert abs(q18_to_real(enc(0.001)) - 0.001) <= 2.0 ** -12 * 0.001


def test_table1_voltage_half_ulp():
    q = enc(-5.185)
    assert abs(q18_to_real(q) + 5.185) <= ulp(q) / 2
    assert abs(q18_to_real(q) + 5.185) <= 2.0 ** -12 * 5.185


def test_format_range():
    assert MAX_FINITE == (2 - 2.0 ** -11) * 2.0 ** 31
    assert enc(MAX_FINITE).to_string() == "0_111110_11111111111"
    assert MIN_SUBNORMAL == 2.0 ** -41
    assert enc(MIN_SUBNORMAL).bits == 1
    with pytest.raises(Q18RangeError):
        enc(2.0 ** 32)
    with pytest.raises(Q18RangeError):
        enc(math.inf)
    with pytest.raises(ValueError):
        enc(math.nan)


def test_overflow_threshold_rounds_to_nearest():
    half_ulp_top = 2.0 ** (31 - 12)
    assert enc(MAX_FINITE + half_ulp_top / 2).bits == enc(MAX_FINITE).bits
    with pytest.raises(Q18RangeError):
        enc(MAX_FINITE + half_ulp_top)  # tie from an odd mantissa goes up


def test_exact_inputs():
    assert enc(Fraction(3, 8)) == enc(0.375)
    assert enc(51) == enc(51.0)
    assert q18_to_real(enc(51)) == 51.0


def test_string_round_trip():
    q = enc(-5.185)
    assert Q18.from_string(q.to_string()) == q
    assert Q18.from_string("0_011111_00000000000") == ONE
    with pytest.raises(ValueError):
        Q18.from_string("0_0111_11")


def test_every_pattern_round_trips():
    for p in range(oracle.N_FINITE):
        for bits in (p, p | (1 << 17)):
            q = Q18(bits)
            assert q18_from_real(q18_to_real(q)).bits == bits
            assert Q18.from_string(q.to_string()).bits == bits


def test_special_patterns_rejected():
    inf = Q18(63 << 11)
    with pytest.raises(ValueError):
        q18_to_real(inf)
    with pytest.raises(ValueError):
        q18_add(inf, ONE)
    with pytest.raises(ValueError):
        Q18(1 << 18)


def test_mul_examples():
    a = enc(-3.7)
    assert q18_mul(a, ONE) == a
    assert q18_mul(a, ZERO) == ZERO
    assert q18_mul(enc(0.5), enc(0.25)) == enc(0.125)


def test_add_examples():
    a = enc(2.5)
    assert q18_add(a, ZERO) == a
    assert q18_add(ONE, enc(-1.0)) == ZERO
    assert q18_add(ONE, enc(2.0 ** -12)) == ONE
    assert oracle.ref_add(ONE.bits, enc(2.0 ** -12).bits) == ONE.bits


def test_operators():
    a, b = enc(1.5), enc(-0.25)
    assert a + b == q18_add(a, b)
    assert a * b == q18_mul(a, b)
    assert a - b == enc(1.75)
    assert float(-a) == -1.5


def test_overflow_raises():
    big = enc(2.0 ** 31)
    with pytest.raises(Q18RangeError):
        q18_mul(big, enc(2.0))
    with pytest.raises(Q18RangeError):
        q18_add(big, big)


def test_flush_subnormals():
    cfg = Q18Config(flush_subnormals=True)
    tiny = enc(2.0 ** -35)
    assert tiny.is_subnormal
    assert q18_from_real(2.0 ** -35, cfg).is_zero
    assert q18_mul(tiny, enc(0.5), cfg).is_zero
    assert not q18_mul(tiny, enc(0.5)).is_zero
    with pytest.raises(ValueError):
        Q18Config(rounding="toward-zero")


def test_negative_underflow_keeps_sign():
    r = q18_mul(enc(-(2.0 ** -40)), enc(2.0 ** -10))
    assert r.is_zero and r.sign == 1


def _result(op, a, b):
    try:
        return op(a, b).bits
    except Q18RangeError:
        return oracle.OVERFLOW


@given(q18s, q18s)
def test_add_commutative(a, b):
    assert _result(q18_add, a, b) == _result(q18_add, b, a)


@given(q18s, q18s)
def test_mul_commutative(a, b):
    assert _result(q18_mul, a, b) == _result(q18_mul, b, a)


@given(reals, reals)
def test_rounding_monotone(x, y):
    lo, hi = sorted((x, y))
    assert q18_to_real(enc(lo)) <= q18_to_real(enc(hi))


@given(reals)
def test_from_real_matches_oracle(x):
    assert enc(x).bits == oracle.ref_from_float(x)


@given(reals)
def test_from_real_half_ulp(x):
    q = enc(x)
    assert abs(q18_to_real(q) - x) <= max(ulp(q) / 2, MIN_SUBNORMAL / 2)


def _agree(op, ref, a, b):
    return _result(op, Q18(a), Q18(b)) == ref(a, b)


def test_randomized_against_oracle():
    rng = np.random.default_rng(2024)
    xs = oracle.random_finite_patterns(rng, 20000) + oracle.random_finite_patterns(rng, 20000, 18, 44)
    ys = oracle.random_finite_patterns(rng, 20000) + oracle.random_finite_patterns(rng, 20000, 18, 44)
    bad = [(a, b) for a, b in zip(xs, ys)
           if not (_agree(q18_add, oracle.ref_add, a, b) and _agree(q18_mul, oracle.ref_mul, a, b))]
    assert bad == []
