"""Recursive multidimensional NTT over Z/P driven by a plan's split tree.

A node of size s = n1*n2 (outer n1, inner n2) computes

    X[k2*n2 + k0] = sum_j0 w^(j0*k0) * (sum_j1 x[j1*n1 + j0] * w^(n1*j1*k0)) * w^(n2*j0*k2)

with w = omega^(N/s): inner transforms of size n2, a twiddle multiply, then
outer transforms of size n1.  Leaves are evaluated either directly (s*s
table multiplications) or through the residue lookup tables.  Every call
transforms along the last axis, so a batch of vectors goes through at once.
"""

from __future__ import annotations

import numpy as np

from . import _kernels as K
from .counts import Cost, OpCounts
from .numtheory import next_pow2
from .planner import tree_size
from .tables import DigitProductTables, TableSet, _log2

MODES = {"lookup": "lookup", "lookup_leaves": "lookup", "direct": "direct", "direct_leaves": "direct"}


class LengthMismatchError(ValueError):
    pass


def _mode(mode: str) -> str:
    try:
        return MODES[mode]
    except KeyError:
        raise ValueError(f"unknown mode {mode!r}") from None


def _as_field(x, P: int, n: int | None = None) -> np.ndarray:
    x = np.asarray(x, dtype=np.int64)
    if n is not None and x.shape[-1:] != (n,):
        raise LengthMismatchError(f"expected length {n}, got {x.shape[-1:] or 'scalar'}")
    if x.size and (x.min() < 0 or x.max() >= P):
        raise ValueError(f"values must lie in [0, {P})")
    return x


def _direct_leaf_cost(t: DigitProductTables, s: int) -> Cost:
    per_output = Cost(addmod=s - 1, compares=(next_pow2(s).bit_length() - 1) + 1)
    return t.cost.scale(s * s) + per_output.scale(s)


def _direct(x3, W, t: DigitProductTables, counters):
    """Leaf transforms along the last axis of a (B, C, s) array."""
    s = W.shape[0]
    _direct_leaf_cost(t, s).charge(counters, x3.shape[0] * x3.shape[1])
    t_sum = next_pow2(s).bit_length() - 1
    return K.direct_leaves(x3, W, t.kernel_table, t.r, t.d, t.P, t.terms.bit_length() - 1, t_sum)


def base_case_direct(x, root: int, t: DigitProductTables, counters: OpCounts | None = None) -> np.ndarray:
    """Size-m DFT evaluated literally, m*m table multiplications."""
    x = _as_field(x, t.P)
    m = x.shape[-1]
    powers = [pow(root, e, t.P) for e in range(m)]
    W = np.array([[powers[j * k % m] for k in range(m)] for j in range(m)], dtype=np.int64)
    return _direct(x.reshape(-1, 1, m), W, t, counters).reshape(x.shape)


def pointwise_multiply(a, b, t: DigitProductTables, counters: OpCounts | None = None) -> np.ndarray:
    a = _as_field(a, t.P)
    b = _as_field(b, t.P)
    if a.shape != b.shape:
        raise LengthMismatchError(f"shapes {a.shape} and {b.shape} differ")
    return t.mulmod_many(a, b, counters).reshape(a.shape)


class _Engine:
    def __init__(self, ts: TableSet):
        self.ts = ts
        plan = ts.plan
        self.N = plan.length_n
        self.P = plan.field_prime_P
        powers = np.empty(self.N, dtype=np.int64)
        acc = 1
        for e in range(self.N):
            powers[e] = acc
            acc = acc * plan.root_omega % self.P
        self.powers = powers
        self._twiddles = {}

    def twiddles(self, n1: int, n2: int) -> np.ndarray:
        key = (n1, n2)
        if key not in self._twiddles:
            step = self.N // (n1 * n2)
            j0 = np.arange(n1, dtype=np.int64)[:, None]
            k0 = np.arange(n2, dtype=np.int64)[None, :]
            self._twiddles[key] = self.powers[(step * j0 * k0) % self.N]
        return self._twiddles[key]

    def _leaf(self, x3: np.ndarray, s: int, mode: str, counters) -> np.ndarray:
        if mode == "lookup":
            rows = np.ascontiguousarray(x3).reshape(-1, s)
            return self.ts.leaves.lookup_many(rows, counters).reshape(x3.shape)
        return _direct(x3, self.ts.leaves.matrices[s], self.ts.digits, counters)

    def run(self, x3: np.ndarray, tree, mode: str, counters) -> np.ndarray:
        """Transform along the last axis of a (B, C, s) array; returns a C-contiguous array."""
        if isinstance(tree, int):
            return self._leaf(x3, tree, mode, counters)
        outer, inner = tree
        n1, n2 = tree_size(outer), tree_size(inner)
        B = x3.shape[0] * x3.shape[1]
        # x[b, j1, j0] -> rows over j1 for each (b, j0); leaves read the strided view
        cols = x3.reshape(B, n2, n1).transpose(0, 2, 1)
        if not isinstance(inner, int):
            cols = np.ascontiguousarray(cols)
        y = self.run(cols, inner, mode, counters).reshape(B, n1, n2)
        # twiddle y[b, j0, k0] and turn it into rows over j0 for each (b, k0)
        t = self.ts.digits
        t.cost.charge(counters, y.size)
        if counters is not None:
            counters.table_reads += y.size  # the twiddle itself comes from the power table
        rows = K.twiddle_transpose(y, self.twiddles(n1, n2), t.kernel_table, t.r, t.d, t.P, _log2(t.terms))
        z = self.run(rows, outer, mode, counters)
        # z[b, k0, k2] holds X[k2*n2 + k0]
        return np.ascontiguousarray(z.reshape(B, n2, n1).transpose(0, 2, 1)).reshape(x3.shape)


def engine(ts: TableSet) -> _Engine:
    eng = getattr(ts, "_engine", None)
    if eng is None:
        eng = _Engine(ts)
        ts._engine = eng
    return eng


def ntt_forward(x, ts: TableSet, mode: str = "lookup", counters: OpCounts | None = None) -> np.ndarray:
    """X[k] = sum_j x[j] * omega^(j*k) mod P along the last axis."""
    mode = _mode(mode)
    n = ts.plan.length_n
    x = _as_field(x, ts.plan.field_prime_P, n)
    rows = np.ascontiguousarray(x.reshape(-1, 1, n))
    return engine(ts).run(rows, ts.plan.tree, mode, counters).reshape(x.shape)


def ntt_inverse(y, ts: TableSet, mode: str = "lookup", counters: OpCounts | None = None) -> np.ndarray:
    """Inverse transform: forward with omega^-1, then scale by n^-1.

    Transforming with omega^-1 is the forward transform read at index -k,
    so the forward tables serve both directions.
    """
    n, P = ts.plan.length_n, ts.plan.field_prime_P
    X = ntt_forward(y, ts, mode, counters)
    X = np.concatenate([X[..., :1], X[..., :0:-1]], axis=-1)
    n_inv = np.full(X.shape, pow(n, -1, P), dtype=np.int64)
    return ts.digits.mulmod_many(X, n_inv, counters).reshape(X.shape)
