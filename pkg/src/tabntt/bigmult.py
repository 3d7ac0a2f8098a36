"""Exact multiplication of naturals through the preprocessed transform."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .counts import OpCounts
from .ntt import ntt_forward, ntt_inverse, pointwise_multiply
from .planner import make_mult_plan, mult_digit_bits
from .tables import TableSet, preprocess


class CapacityError(ValueError):
    pass


@dataclass(frozen=True)
class DigitVector:
    base_R: int
    digits: tuple[int, ...]

    @property
    def value(self) -> int:
        v = 0
        for d in reversed(self.digits):
            v = v * self.base_R + d
        return v

    def __len__(self):
        return len(self.digits)


def _is_pow2(R: int) -> bool:
    return R >= 2 and R & (R - 1) == 0


def _bits_of(value: int) -> np.ndarray:
    raw = value.to_bytes(max(1, (value.bit_length() + 7) // 8), "little")
    return np.unpackbits(np.frombuffer(raw, dtype=np.uint8), bitorder="little")


def to_digits(value: int, b: int, length: int | None = None) -> np.ndarray:
    """Little-endian base-2**b digits of value, zero-padded to length."""
    if value < 0:
        raise ValueError("naturals only")
    need = -(-value.bit_length() // b)
    length = need if length is None else length
    if need > length:
        raise CapacityError(f"{need} digits do not fit in {length}")
    bits = _bits_of(value)
    total = length * b
    if bits.size < total:
        bits = np.concatenate([bits, np.zeros(total - bits.size, dtype=np.uint8)])
    weights = np.left_shift(np.int64(1), np.arange(b, dtype=np.int64))
    return bits[:total].reshape(length, b).astype(np.int64) @ weights


def from_coefficients(coeffs, b: int) -> int:
    """sum coeffs[i] * 2**(b*i) for non-negative int64 coefficients of any height."""
    coeffs = np.asarray(coeffs, dtype=np.int64)
    value, shift = 0, 0
    mask = (1 << b) - 1
    shifts = np.arange(b, dtype=np.int64)
    while coeffs.size and coeffs.any():
        chunk = coeffs & mask
        bits = ((chunk[:, None] >> shifts) & 1).astype(np.uint8).reshape(-1)
        value += int.from_bytes(np.packbits(bits, bitorder="little").tobytes(), "little") << shift
        coeffs = coeffs >> b
        shift += b
    return value


def digitize(value: int, R: int) -> DigitVector:
    if R < 2:
        raise ValueError("base must be >= 2")
    if value == 0:
        return DigitVector(R, ())
    if _is_pow2(R):
        return DigitVector(R, tuple(int(d) for d in to_digits(value, R.bit_length() - 1)))
    digits = []
    while value:
        value, d = divmod(value, R)
        digits.append(d)
    return DigitVector(R, tuple(digits))


def carry_normalize(raw, R: int) -> DigitVector:
    """Canonical base-R digits of sum raw[i] * R**i."""
    raw = [int(v) for v in raw]
    bound = R * R * max(1, len(raw))
    if any(v < 0 or v >= bound for v in raw):
        raise OverflowError(f"raw coefficient outside [0, R^2 * len) = [0, {bound})")
    if _is_pow2(R):
        return digitize(from_coefficients(raw, R.bit_length() - 1), R)
    digits, carry = [], 0
    for v in raw:
        carry, d = divmod(v + carry, R)
        digits.append(d)
    while carry:
        carry, d = divmod(carry, R)
        digits.append(d)
    while digits and digits[-1] == 0:
        digits.pop()
    return DigitVector(R, tuple(digits))


def capacity_bits(ts: TableSet) -> int:
    """Digit width the multiplier uses with these tables; raises if none fits."""
    b = mult_digit_bits(ts.plan.field_prime_P, ts.plan.length_n)
    if b < 1:
        plan = ts.plan
        raise CapacityError(
            f"R^2 * n < P fails for every R >= 2 (n={plan.length_n}, P={plan.field_prime_P}); "
            "regenerate the plan with a larger field prime"
        )
    return b


def convolve_digits(da, db, ts: TableSet, mode: str = "direct", counters: OpCounts | None = None) -> np.ndarray:
    """Raw (uncarried) products of digit rows: transform, multiply pointwise, invert."""
    n = ts.plan.length_n
    da = np.atleast_2d(np.asarray(da, dtype=np.int64))
    db = np.atleast_2d(np.asarray(db, dtype=np.int64))
    if da.shape[-1] > n // 2 or db.shape[-1] > n // 2:
        raise CapacityError(f"operands need more than n/2 = {n // 2} digits")
    x = np.zeros((da.shape[0] + db.shape[0], n), dtype=np.int64)
    x[: da.shape[0], : da.shape[1]] = da
    x[da.shape[0] :, : db.shape[1]] = db
    X = ntt_forward(x, ts, mode, counters)
    Y = pointwise_multiply(X[: da.shape[0]], X[da.shape[0] :], ts.digits, counters)
    return ntt_inverse(Y, ts, mode, counters)


@lru_cache(maxsize=16)
def tables_for_bits(operand_bits: int, seed: int = 0) -> TableSet:
    return preprocess(make_mult_plan(operand_bits, seed=seed))


def multiply_many(a_values, b_values, ts: TableSet | None = None, counters: OpCounts | None = None,
                  mode: str = "direct", batch: int = 64) -> list[int]:
    a_values, b_values = list(a_values), list(b_values)
    if len(a_values) != len(b_values):
        raise ValueError("operand lists differ in length")
    if any(v < 0 for v in a_values + b_values):
        raise ValueError("naturals only")
    if ts is None:
        width = max([v.bit_length() for v in a_values + b_values] + [1])
        ts = tables_for_bits(width)
    b = capacity_bits(ts)
    half = ts.plan.length_n // 2
    out = []
    for lo in range(0, len(a_values), batch):
        chunk_a, chunk_b = a_values[lo : lo + batch], b_values[lo : lo + batch]
        da = np.stack([to_digits(v, b, half) for v in chunk_a])
        db = np.stack([to_digits(v, b, half) for v in chunk_b])
        raw = convolve_digits(da, db, ts, mode, counters)
        out.extend(from_coefficients(row, b) for row in raw)
    return out


def multiply(a: int, b: int, ts: TableSet | None = None, counters: OpCounts | None = None,
             mode: str = "direct") -> int:
    """a*b exactly, via forward transforms, pointwise products and the inverse."""
    return multiply_many([a], [b], ts, counters, mode)[0]
