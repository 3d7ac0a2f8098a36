import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tabntt.numtheory import has_order, is_prime
from tabntt.planner import (
    PlanError,
    budget_check,
    choose_base_size,
    choose_tree,
    decompose_length,
    leaf_primes_for,
    make_mult_plan,
    make_plan,
    mult_digit_bits,
    split_tree,
    table_bits,
    tree_leaves,
    tree_levels,
    tree_size,
    word_safe,
)


def test_budget_check_examples():
    rep = budget_check(2, 5)
    assert rep.leaf_primes == (2, 3, 5, 7) and rep.Z_count == 4
    assert leaf_primes_for(2, 2) == [2, 3, 5]


def test_budget_check_fits_flag():
    P = 65537
    small = budget_check(2, P, budget_bits=1 << 30)
    assert small.fits
    q_max = max(small.leaf_primes)
    tiny = budget_check(2, P, budget_bits=q_max**2 - 1)
    assert not tiny.fits


def test_table_bits_hand_count():
    # P=5: r=1, R=2, d=3; primes 2,3,5,7; leaf size 2
    bits = table_bits(5, 1, (2, 3, 5, 7), (2,))
    digit = 2 * 3 * 2 * 2 * 3
    forward = 3 * 2 * (1 + 2 + 3 + 3)
    dft = 2**2 * 2 * 1 + 3**2 * 2 * 2 + 5**2 * 2 * 3 + 7**2 * 2 * 3
    M = 210
    combine = (2 + 3 + 5 + 7) * (M - 1).bit_length()
    fold = -(-(M - 1).bit_length() // 1) * 2 * 3
    assert bits == digit + forward + dft + combine + fold


def test_choose_base_size():
    assert 2 <= choose_base_size(65536, 1 << 20) <= 4
    assert choose_base_size(16, 1 << 30) >= 2


def test_choose_base_size_is_largest_fitting():
    budget = 1 << 22
    m = choose_base_size(4096, budget)
    P = 12289  # smallest prime = 1 mod 4096
    assert budget_check(m, P, budget).fits
    assert not budget_check(m + 1, P, budget).fits


@pytest.mark.parametrize("target,m,realized", [(100, 3, 108), (16, 2, 16), (81, 3, 81)])
def test_choose_tree_examples(target, m, realized):
    tree, n = choose_tree(target, m)
    assert n == realized == tree_size(tree)


def test_choose_tree_100_3_factors():
    tree, _ = choose_tree(100, 3)
    assert sorted(tree_leaves(tree)) == [3, 3, 3, 4]


@given(st.integers(min_value=4, max_value=10**6), st.integers(min_value=2, max_value=6))
@settings(max_examples=300)
def test_choose_tree_covers_target(target, m):
    if m * m > target:
        with pytest.raises(PlanError):
            choose_tree(target, m)
        return
    tree, n = choose_tree(target, m)
    leaves = tree_leaves(tree)
    assert n >= target and math.prod(leaves) == n
    assert set(leaves) <= {m, m + 1}
    # no admissible product with the same factor count lands in [target, n)
    t = len(leaves)
    assert not any(target <= (m + 1) ** (t - z) * m**z < n for z in range(t + 1))


def test_split_tree_balanced():
    tree = split_tree([2] * 6)
    assert tree_size(tree[0]) == tree_size(tree[1]) == 8
    assert tree_levels(tree)[0] == (64,)
    assert tree_leaves(tree) == [2] * 6


@pytest.mark.parametrize("n,m", [(108, 3), (16, 2), (59049, 3), (52488, 2), (1296, 2)])
def test_decompose_length_roundtrip(n, m):
    factors = decompose_length(n, m)
    assert math.prod(factors) == n and set(factors) <= {m, m + 1}


def test_decompose_length_rejects():
    with pytest.raises(PlanError):
        decompose_length(7, 2)


def test_make_plan_n16():
    plan = make_plan(16, 1 << 30, 0)
    assert plan.length_n == 16
    # 17 = 16*1 + 1 is already prime, so it is the first member of the progression
    assert plan.field_prime_P == 17
    assert has_order(plan.root_omega, 16, 17)


def test_make_plan_n4():
    plan = make_plan(4, 1 << 30, 0)
    assert (plan.length_n, plan.field_prime_P) == (4, 5)
    assert plan.root_omega in (2, 3)


def test_make_plan_too_small():
    with pytest.raises(PlanError, match="n too small"):
        make_plan(3)


def test_make_plan_forced_m():
    plan = make_plan(100, m=3)
    assert plan.length_n == 108 and plan.base_size_m == 3


@pytest.mark.parametrize("target", [4, 5, 16, 17, 100, 256, 1000, 4096, 10_000, 65_536])
def test_make_plan_invariants(target):
    plan = make_plan(target)
    n, P, w = plan.length_n, plan.field_prime_P, plan.root_omega
    assert n >= target
    assert is_prime(P) and (P - 1) % n == 0
    assert has_order(w, n, P)
    assert math.prod(plan.leaf_primes) > P * P * max(plan.leaf_sizes)
    assert plan.leaf_primes == tuple(leaf_primes_for(P, max(plan.leaf_sizes)))
    assert plan.digit_base_R & (plan.digit_base_R - 1) == 0
    assert plan.digit_base_R ** plan.num_digits > P - 1
    assert word_safe(P, plan.leaf_primes, plan.leaf_sizes)
    assert plan.table_bits == table_bits(P, plan.r, plan.leaf_primes, plan.leaf_sizes)


def test_make_plan_deterministic():
    assert make_plan(1000, seed=7) == make_plan(1000, seed=7)


def test_budget_is_respected_when_possible():
    plan = make_plan(4096)
    assert plan.fits and plan.table_bits <= plan.budget_bits


def test_mult_plan_capacity():
    for bits in (8, 256, 1024, 1 << 14):
        plan = make_mult_plan(bits)
        b = mult_digit_bits(plan.field_prime_P, plan.length_n)
        assert (1 << b) ** 2 * plan.length_n < plan.field_prime_P
        assert 2 * -(-bits // b) <= plan.length_n


def test_describe_keys():
    d = make_plan(16).describe()
    for key in ("realized_n", "P", "omega", "R", "m", "tree_levels", "leaf_primes", "budget_bits"):
        assert key in d
