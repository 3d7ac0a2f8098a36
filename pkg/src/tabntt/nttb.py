"""NTTB v1: the on-disk form of a preprocessed table set.

Layout, every integer a little-endian u64 unless noted:

    b"NTTB"  version (u32)
    n  P  omega  R  L  m  Z  q_1 ... q_Z
    4 sections, each a word count followed by that many words:
      digit-product  [l][a][b]             2d * R * R
      forward        [k][j][x]             d * Z * R
      dft            per leaf size (ascending), per prime: q^s rows of s outputs,
                     rows in mixed-radix order (tuple position 0 most significant)
      combine        per prime: q CRT basis contributions mod M,
                     then the mod-P fold table [k][x], dM * R

The split tree, digit count and leaf sizes are recomputed from the header.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from .planner import fold_digits, plan_from_header
from .tables import DigitProductTables, LeafTables, TableSet, leaf_matrix

MAGIC = b"NTTB"
VERSION = 1
_U64 = np.dtype("<u8")


class FormatError(ValueError):
    pass


def _section(arr: np.ndarray) -> bytes:
    arr = np.ascontiguousarray(arr, dtype=np.int64).reshape(-1)
    return struct.pack("<Q", arr.size) + arr.astype(_U64).tobytes()


def dumps(ts: TableSet) -> bytes:
    plan, lv = ts.plan, ts.leaves
    header = [
        plan.length_n, plan.field_prime_P, plan.root_omega, plan.digit_base_R,
        plan.linnik_L, plan.base_size_m, len(plan.leaf_primes), *plan.leaf_primes,
    ]
    out = [MAGIC, struct.pack("<I", VERSION), np.array(header, dtype=_U64).tobytes()]
    out.append(_section(ts.digits.table))
    out.append(_section(lv.forward))
    out.append(_section(np.concatenate([lv.dft[s][0] for s in sorted(lv.dft)])))
    out.append(_section(np.concatenate([lv.combine, lv.fold.reshape(-1)])))
    return b"".join(out)


def write(ts: TableSet, path) -> None:
    Path(path).write_bytes(dumps(ts))


class _Reader:
    def __init__(self, data: bytes):
        self.data, self.pos = data, 0

    def take(self, nbytes: int) -> bytes:
        if self.pos + nbytes > len(self.data):
            raise FormatError("truncated file")
        chunk = self.data[self.pos : self.pos + nbytes]
        self.pos += nbytes
        return chunk

    def words(self, count: int) -> np.ndarray:
        return np.frombuffer(self.take(8 * count), dtype=_U64).astype(np.int64)

    def section(self, expected: int, name: str) -> np.ndarray:
        (count,) = struct.unpack("<Q", self.take(8))
        if count != expected:
            raise FormatError(f"{name} section holds {count} words, expected {expected}")
        return self.words(count)


def loads(data: bytes) -> TableSet:
    rd = _Reader(data)
    if rd.take(4) != MAGIC:
        raise FormatError("bad magic")
    (version,) = struct.unpack("<I", rd.take(4))
    if version != VERSION:
        raise FormatError(f"unsupported version {version}")
    n, P, omega, R, L, m, Z = (int(v) for v in rd.words(7))
    qs = tuple(int(v) for v in rd.words(Z))
    try:
        plan = plan_from_header(n, P, omega, R, L, m, qs)
    except ValueError as exc:
        raise FormatError(f"inconsistent header: {exc}") from exc
    d = plan.num_digits
    table = rd.section(2 * d * R * R, "digit-product").reshape(2 * d, R, R)
    forward = rd.section(d * Z * R, "forward").reshape(d, Z, R)

    sizes = plan.leaf_sizes
    dft_len = sum(q**s * s for s in sizes for q in qs)
    flat = rd.section(dft_len, "dft")
    dft, pos = {}, 0
    for s in sizes:
        counts = [q**s * s for q in qs]
        span = sum(counts)
        offs = np.cumsum([0] + counts[:-1]).astype(np.int64)
        dft[s] = (np.ascontiguousarray(flat[pos : pos + span]), offs)
        pos += span

    M = plan.modulus_M
    dM = fold_digits(M, plan.r)
    tail = rd.section(sum(qs) + dM * R, "combine")
    if rd.pos != len(data):
        raise FormatError("trailing bytes after last section")
    combine = np.ascontiguousarray(tail[: sum(qs)])
    fold = np.ascontiguousarray(tail[sum(qs) :].reshape(dM, R))
    comb_off = np.cumsum([0] + list(qs[:-1])).astype(np.int64)
    matrices = {s: leaf_matrix(plan, s) for s in sizes}
    leaves = LeafTables(P, R, d, qs, np.ascontiguousarray(forward), dft, combine, comb_off, fold, matrices)
    return TableSet(plan, DigitProductTables(P, R, d, np.ascontiguousarray(table)), leaves)


def read(path) -> TableSet:
    return loads(Path(path).read_bytes())
