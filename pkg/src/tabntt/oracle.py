"""Brute-force references for checking the fast paths.

Nothing here imports the table or transform code.
"""

import numpy as np



def naive_dft(x, omega: int, P: int):
    """X[k] = sum_j x[j] * omega^(j*k) mod P, evaluated term by term.

    Accepts one vector or a batch (rows).  Uses exact int64 accumulation when
    n * (P-1)**2 fits, plain Python integers otherwise.
    """
    x = np.asarray(x, dtype=np.int64)
    n = x.shape[-1]
    powers = [1] * n
    for e in range(1, n):
        powers[e] = powers[e - 1] * omega % P
    if n * (P - 1) ** 2 < 2**63:
        pw = np.array(powers, dtype=np.int64)
        rows = x.reshape(-1, n)
        out = np.empty_like(rows)
        j = np.arange(n, dtype=np.int64)
        step = max(1, (1 << 22) // n)
        for k0 in range(0, n, step):
            k = np.arange(k0, min(n, k0 + step), dtype=np.int64)
            W = pw[(k[:, None] * j[None, :]) % n]
            out[:, k0 : k0 + k.size] = (rows @ W.T) % P
        return out.reshape(x.shape)
    rows = [[int(v) for v in row] for row in x.reshape(-1, n)]
    out = [[sum(row[j] * powers[j * k % n] for j in range(n)) % P for k in range(n)] for row in rows]
    return np.array(out, dtype=object).reshape(x.shape)


def dft_at(x, omega: int, P: int, ks) -> list[int]:
    """Selected outputs X[k] of the length-n DFT, each summed term by term."""
    x = [int(v) for v in np.asarray(x).reshape(-1)]
    n = len(x)
    out = []
    for k in ks:
        step = pow(omega, int(k) % n, P)
        acc, w = 0, 1
        for v in x:
            acc += v * w
            w = w * step % P
        out.append(acc % P)
    return out


def cyclic_convolution(a, b, P: int) -> list[int]:
    """c[k] = sum over i + j = k (mod n) of a[i] * b[j], mod P."""
    a = [int(v) % P for v in a]
    b = [int(v) % P for v in b]
    n = len(a)
    if len(b) != n:
        raise ValueError("length mismatch")
    exact = (P - 1) ** 2 < 2**62
    bb = np.array(b, dtype=np.int64 if exact else object)
    c = np.zeros(n, dtype=bb.dtype)
    for i, ai in enumerate(a):
        if ai:
            # row i of the circulant: b shifted right by i
            c = (c + ai * np.roll(bb, i)) % P
    return [int(v) for v in c]


def _limbs(v: int, width: int) -> np.ndarray:
    """Little-endian limbs of `width` bytes each."""
    nbytes = max(1, -(-v.bit_length() // (8 * width))) * width
    raw = np.frombuffer(v.to_bytes(nbytes, "little"), dtype=np.uint8).reshape(-1, width).astype(np.int64)
    return raw @ (np.int64(1) << (8 * np.arange(width, dtype=np.int64)))


def schoolbook_multiply(a: int, b: int) -> int:
    """Quadratic limb-by-limb product.

    24-bit limbs while every column sum provably fits in int64
    (products < 2^48, at most 2^14 terms), 16-bit limbs beyond that.
    """
    if a < 0 or b < 0:
        raise ValueError("naturals only")
    if a == 0 or b == 0:
        return 0
    width = 3 if min(a.bit_length(), b.bit_length()) <= 24 * (1 << 14) else 2
    bits = 8 * width
    col = np.convolve(_limbs(a, width), _limbs(b, width))  # direct O(len_a * len_b) sums
    # col[i] weighs 2^(bits*i); add it back one 16-bit slice at a time
    out, shift = 0, 0
    while col.any():
        piece = (col & 0xFFFF).astype("<u2")
        out += _weighted(piece, bits) << shift
        col >>= 16
        shift += 16
    return out


def _weighted(piece: np.ndarray, bits: int) -> int:
    """sum piece[i] * 2^(bits*i) for 16-bit pieces."""
    if bits == 16:
        return int.from_bytes(piece.tobytes(), "little")
    # spread each 16-bit piece into a 24-bit slot
    slots = np.zeros((piece.size, 3), dtype=np.uint8)
    slots[:, 0] = piece & 0xFF
    slots[:, 1] = piece >> 8
    return int.from_bytes(slots.tobytes(), "little")
