"""Preprocessed lookup tables and the table-driven arithmetic built on them.

Two families live here.  Digit-product tables turn a multiplication mod P
into d*d reads and a short compare/subtract ladder.  Leaf tables move a
coefficient into residues modulo small primes, evaluate a whole leaf
transform per prime with a single read, and bring the results back.

The scalar functions (``tabular_mulmod``, ``crt_decompose`` ...) are the
reference definitions and count every operation as they go.  The ``*_many``
methods run the same operation sequence through compiled kernels.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import _kernels as K
from .counts import Cost, OpCounts
from .numtheory import next_pow2
from .planner import TableBudgetError, TransformPlan, fold_digits, num_digits

MAX_TABLE_ENTRIES = 1 << 27


def _log2(terms: int) -> int:
    return terms.bit_length() - 1


def reduce_chain(v: int, P: int, terms: int, counters: OpCounts | None = None) -> int:
    """v mod P for 0 <= v < P*terms by a halving compare/subtract ladder."""
    if terms < 1 or terms & (terms - 1):
        raise ValueError("terms must be a power of two")
    if not 0 <= v < P * terms:
        raise ValueError(f"{v} outside [0, {P}*{terms})")
    t = _log2(terms)
    for s in range(t, -1, -1):
        th = P << s
        if v >= th:
            v -= th
    if counters is not None:
        counters.compares += t + 1
    return v


@dataclass(frozen=True, eq=False)
class DigitProductTables:
    P: int
    R: int
    d: int
    table: np.ndarray  # [l][a][b] = a*b*R^l mod P, shape (2d, R, R)

    @property
    def r(self) -> int:
        return self.R.bit_length() - 1

    @property
    def terms(self) -> int:
        return next_pow2(self.d * self.d)

    @property
    def cost(self) -> Cost:
        dd = self.d * self.d
        return Cost(mulmod=1, addmod=dd - 1, table_reads=dd, compares=_log2(self.terms) + 1)

    @property
    def flat(self) -> np.ndarray:
        return self.table.reshape(-1)

    @cached_property
    def kernel_table(self) -> np.ndarray:
        """Flat table in the narrowest dtype holding P-1 (halves cache traffic)."""
        if self.P <= 1 << 31:
            return self.flat.astype(np.int32)
        return np.ascontiguousarray(self.flat)

    def entry(self, l, a, b) -> int:
        return int(self.table[l, a, b])

    def digits(self, x: int) -> list[int]:
        mask = self.R - 1
        return [(x >> (self.r * k)) & mask for k in range(self.d)]

    def mulmod_many(self, a, b, counters: OpCounts | None = None) -> np.ndarray:
        a = np.ascontiguousarray(a, dtype=np.int64).reshape(-1)
        b = np.ascontiguousarray(b, dtype=np.int64).reshape(-1)
        if a.shape != b.shape:
            raise ValueError("operand length mismatch")
        self.cost.charge(counters, a.size)
        return K.mulmod_many(a, b, self.kernel_table, self.r, self.d, self.P, _log2(self.terms))


def build_digit_product_tables(P: int, R: int, max_entries: int = MAX_TABLE_ENTRIES) -> DigitProductTables:
    if R < 2 or R & (R - 1):
        raise ValueError("R must be a power of two")
    r = R.bit_length() - 1
    d = num_digits(P, r)
    if 2 * d * R * R > max_entries:
        raise TableBudgetError(f"{2 * d * R * R} digit-product entries exceed the cap")
    a = np.arange(R, dtype=object)
    ab = np.array(np.multiply.outer(a, a) % P, dtype=object)
    table = np.empty((2 * d, R, R), dtype=np.int64)
    for l in range(2 * d):
        table[l] = (ab * pow(R, l, P) % P).astype(np.int64)
    return DigitProductTables(P, R, d, table)


def tabular_mulmod(a: int, b: int, t: DigitProductTables, counters: OpCounts | None = None) -> int:
    """(a*b) mod P from digit-product table reads, additions and the ladder."""
    ad, bd = t.digits(a), t.digits(b)
    acc = 0
    for i in range(t.d):
        for j in range(t.d):
            acc += int(t.table[i + j, ad[i], bd[j]])
    if counters is not None:
        counters.add(mulmod=1, addmod=t.d * t.d - 1, table_reads=t.d * t.d)
    return reduce_chain(acc, t.P, t.terms, counters)


def leaf_matrix(plan: TransformPlan, s: int) -> np.ndarray:
    """W[j][k] = omega^((n/s)*j*k) mod P, the size-s leaf transform over Z/P."""
    n, P = plan.length_n, plan.field_prime_P
    w = pow(plan.root_omega, n // s, P)
    powers = [pow(w, e, P) for e in range(s)]
    return np.array([[powers[j * k % s] for k in range(s)] for j in range(s)], dtype=np.int64)


@dataclass(eq=False)
class LeafTables:
    P: int
    R: int
    d: int
    leaf_primes: tuple[int, ...]
    forward: np.ndarray  # (d, Z, R): [k][j][x] = x*R^k mod q_j
    dft: dict  # leaf size -> (flat entries, per-prime offsets)
    combine: np.ndarray  # concatenated per-prime CRT basis contributions mod M
    combine_offsets: np.ndarray
    fold: np.ndarray  # (dM, R): [k][x] = x*R^k mod P
    matrices: dict = field(default_factory=dict)  # leaf size -> W (mod P)

    @property
    def r(self) -> int:
        return self.R.bit_length() - 1

    @property
    def Z(self) -> int:
        return len(self.leaf_primes)

    @property
    def M(self) -> int:
        return math.prod(self.leaf_primes)

    @property
    def qs(self) -> np.ndarray:
        return np.array(self.leaf_primes, dtype=np.int64)

    @property
    def t_dec(self) -> int:
        return _log2(next_pow2(self.d))

    @property
    def t_comb(self) -> int:
        return _log2(next_pow2(self.Z))

    @property
    def t_fold(self) -> int:
        return _log2(next_pow2(self.fold.shape[0]))

    def decompose_cost(self) -> Cost:
        return Cost(addmod=self.d - 1, table_reads=self.d, compares=self.t_dec + 1).scale(self.Z)

    def combine_cost(self) -> Cost:
        dM = self.fold.shape[0]
        return Cost(addmod=self.Z - 1, table_reads=self.Z, compares=self.t_comb + 1) + Cost(
            addmod=dM - 1, table_reads=dM, compares=self.t_fold + 1
        )

    def leaf_cost(self, s: int) -> Cost:
        return self.decompose_cost().scale(s) + Cost(table_reads=self.Z) + self.combine_cost().scale(s)

    def dft_entry(self, s: int, j: int, idx: int) -> tuple[int, ...]:
        flat, offs = self.dft[s]
        base = int(offs[j]) + idx * s
        return tuple(int(v) for v in flat[base : base + s])

    def lookup_many(self, x: np.ndarray, counters: OpCounts | None = None) -> np.ndarray:
        """Leaf transforms along the last axis of x via residue tables."""
        x = np.ascontiguousarray(x, dtype=np.int64)
        s = x.shape[-1]
        flat, offs = self.dft[s]
        rows = x.reshape(-1, s)
        self.leaf_cost(s).charge(counters, rows.shape[0])
        out = K.lookup_leaves(
            rows, self.qs, self.forward, self.r, self.d, self.t_dec, flat, offs,
            self.combine, self.combine_offsets, self.M, self.t_comb, self.fold, self.P, self.t_fold,
        )
        return out.reshape(x.shape)

    def decompose_many(self, c, counters: OpCounts | None = None) -> np.ndarray:
        c = np.ascontiguousarray(c, dtype=np.int64).reshape(-1)
        self.decompose_cost().charge(counters, c.size)
        return K.decompose_many(c, self.forward, self.qs, self.r, self.d, self.t_dec)

    def combine_many(self, res, counters: OpCounts | None = None) -> np.ndarray:
        res = np.ascontiguousarray(res, dtype=np.int64)
        self.combine_cost().charge(counters, res.shape[0])
        return K.combine_many(
            res, self.combine, self.combine_offsets, self.M, self.t_comb, self.fold, self.r, self.P, self.t_fold
        )


def _dft_table(W: np.ndarray, q: int) -> np.ndarray:
    s = W.shape[0]
    size = q**s
    idx = np.arange(size, dtype=np.int64)
    tuples = np.empty((size, s), dtype=np.int64)
    for i in range(s):  # position 0 is the most significant radix-q digit
        tuples[:, i] = (idx // q ** (s - 1 - i)) % q
    return (tuples @ (W % q)) % q


def build_leaf_tables(plan: TransformPlan, max_entries: int = MAX_TABLE_ENTRIES) -> LeafTables:
    P, R, d = plan.field_prime_P, plan.digit_base_R, plan.num_digits
    r = R.bit_length() - 1
    qs = plan.leaf_primes
    entries = sum(q**s * s for s in plan.leaf_sizes for q in qs)
    if entries > max_entries:
        raise TableBudgetError(f"{entries} leaf-table entries exceed the cap")
    x = np.arange(R, dtype=object)
    forward = np.empty((d, len(qs), R), dtype=np.int64)
    for k in range(d):
        for j, q in enumerate(qs):
            forward[k, j] = (x * pow(R, k, q) % q).astype(np.int64)

    matrices, dft = {}, {}
    for s in plan.leaf_sizes:
        W = leaf_matrix(plan, s)
        matrices[s] = W
        parts = [_dft_table(W, q).reshape(-1) for q in qs]
        offs = np.cumsum([0] + [p.size for p in parts[:-1]]).astype(np.int64)
        dft[s] = (np.concatenate(parts), offs)

    M = math.prod(qs)
    comb = []
    for q in qs:
        Mj = M // q
        basis = Mj * pow(Mj, -1, q) % M
        comb.extend(res * basis % M for res in range(q))
    combine = np.array(comb, dtype=np.int64)
    comb_off = np.cumsum([0] + list(qs[:-1])).astype(np.int64)

    dM = fold_digits(M, r)
    fold = np.empty((dM, R), dtype=np.int64)
    for k in range(dM):
        fold[k] = (x * pow(R, k, P) % P).astype(np.int64)
    return LeafTables(P, R, d, tuple(qs), forward, dft, combine, comb_off, fold, matrices)


def crt_decompose(c: int, t: LeafTables, counters: OpCounts | None = None) -> tuple[int, ...]:
    """Residues of c modulo each leaf prime from digit tables, no division."""
    mask = t.R - 1
    digits = [(c >> (t.r * k)) & mask for k in range(t.d)]
    out = []
    for j, q in enumerate(t.leaf_primes):
        acc = sum(int(t.forward[k, j, digits[k]]) for k in range(t.d))
        if counters is not None:
            counters.add(addmod=t.d - 1, table_reads=t.d)
        out.append(reduce_chain(acc, q, next_pow2(t.d), counters))
    return tuple(out)


def crt_combine(res, t: LeafTables, counters: OpCounts | None = None) -> int:
    """The integer in [0, M) with the given residues, by combine-table reads."""
    v = 0
    for j, x in enumerate(res):
        v += int(t.combine[t.combine_offsets[j] + x])
    if counters is not None:
        counters.add(addmod=t.Z - 1, table_reads=t.Z)
    return reduce_chain(v, t.M, next_pow2(t.Z), counters)


def fold_mod_p(v: int, t: LeafTables, counters: OpCounts | None = None) -> int:
    """v mod P for v < M, by reading x*R^k mod P per digit."""
    mask = t.R - 1
    dM = t.fold.shape[0]
    w = sum(int(t.fold[k, (v >> (t.r * k)) & mask]) for k in range(dM))
    if counters is not None:
        counters.add(addmod=dM - 1, table_reads=dM)
    return reduce_chain(w, t.P, next_pow2(dM), counters)


def leaf_dft_lookup(inputs, t: LeafTables, counters: OpCounts | None = None) -> list[tuple[int, ...]]:
    """Per prime channel, one read returns that channel's whole leaf output."""
    s = len(inputs)
    if s not in t.dft:
        raise ValueError(f"no leaf tables for size {s}")
    channels = []
    for j, q in enumerate(t.leaf_primes):
        idx = 0
        for tup in inputs:
            idx = idx * q + tup[j]
        channels.append(t.dft_entry(s, j, idx))
    if counters is not None:
        counters.table_reads += t.Z
    return [tuple(ch[k] for ch in channels) for k in range(s)]


@dataclass(eq=False)
class TableSet:
    plan: TransformPlan
    digits: DigitProductTables
    leaves: LeafTables

    def total_bits(self) -> int:
        """Bit size of every table, counted from the built arrays."""

        def bits(x):
            return max(1, int(x).bit_length())

        P, Rn = self.plan.field_prime_P, self.digits.R
        qs = self.leaves.leaf_primes
        pb = bits(P - 1)
        total = self.digits.table.size * pb
        total += self.leaves.forward.shape[0] * Rn * sum(bits(q - 1) for q in qs)
        for s, (flat, offs) in self.leaves.dft.items():
            sizes = np.diff(np.append(offs, flat.size))
            total += sum(int(n) * bits(q - 1) for n, q in zip(sizes, qs))
        total += self.leaves.combine.size * bits(self.leaves.M - 1)
        total += self.leaves.fold.size * pb
        return total


def preprocess(plan: TransformPlan) -> TableSet:
    """Build every table a plan needs."""
    digits = build_digit_product_tables(plan.field_prime_P, plan.digit_base_R)
    return TableSet(plan, digits, build_leaf_tables(plan))
