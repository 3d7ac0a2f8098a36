import random

import numpy as np
from hypothesis import given
from hypothesis import strategies as st

from tabntt.oracle import cyclic_convolution, dft_at, naive_dft, schoolbook_multiply


def test_naive_dft_examples():
    assert naive_dft([1, 2, 3, 4], 2, 5).tolist() == [0, 4, 3, 2]
    assert naive_dft([0, 0, 0, 0], 2, 5).tolist() == [0, 0, 0, 0]
    assert naive_dft([1, 0, 0, 0], 2, 5).tolist() == [1, 1, 1, 1]


def test_naive_dft_big_modulus_path():
    # P too large for exact int64 accumulation
    P, w = 998244353, pow(3, (998244353 - 1) // 8, 998244353)
    x = [random.Random(0).randrange(P) for _ in range(8)]
    out = naive_dft(x, w, P)
    assert [int(v) for v in out] == [sum(x[j] * pow(w, j * k, P) for j in range(8)) % P for k in range(8)]


def test_dft_at_matches_full():
    x = np.arange(16)
    full = naive_dft(x, 3, 17)
    assert dft_at(x, 3, 17, [0, 5, 15]) == [int(full[k]) for k in (0, 5, 15)]


def test_schoolbook_examples():
    assert schoolbook_multiply(12, 12) == 144
    assert schoolbook_multiply(12345, 1) == 12345
    assert schoolbook_multiply(12345, 0) == 0


@given(st.integers(0, 2**3000), st.integers(0, 2**3000))
def test_schoolbook_property(a, b):
    assert schoolbook_multiply(a, b) == a * b


def test_cyclic_convolution_examples():
    assert cyclic_convolution([1, 0], [3, 4], 5) == [3, 4]
    assert cyclic_convolution([1, 1], [1, 1], 5) == [2, 2]
    assert cyclic_convolution([0, 0, 0], [1, 2, 3], 7) == [0, 0, 0]
