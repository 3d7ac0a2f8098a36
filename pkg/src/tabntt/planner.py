"""Choosing every parameter of a preprocessed transform from a target size."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .numtheory import (
    find_field_prime,
    find_root_of_unity,
    first_primes,
    linnik_holds,
    next_pow2,
)

LINNIK_L = 5
DEFAULT_BUDGET_FLOOR = 1 << 20
# q**s beyond this cannot be indexed by the 64-bit kernels.
ADDRESS_LIMIT = 1 << 48
WORD_LIMIT = 1 << 62


class PlanError(ValueError):
    pass


class TableBudgetError(OverflowError):
    pass


def _bits(x: int) -> int:
    return max(1, x.bit_length())


def digit_bits_for(P: int) -> int:
    """Digit width r with R = 2**r close to P**(1/4)."""
    return max(1, -(-P.bit_length() // 4))


def num_digits(P: int, r: int) -> int:
    return -(-P.bit_length() // r)


def leaf_primes_for(P: int, leaf_size: int) -> list[int]:
    """Consecutive primes from 2 until their product exceeds P*P*leaf_size."""
    bound = P * P * leaf_size
    count, product = 0, 1
    primes = first_primes(8)
    while product <= bound:
        if count == len(primes):
            primes = first_primes(2 * count)
        product *= primes[count]
        count += 1
    return primes[:count]


def fold_digits(modulus: int, r: int) -> int:
    return -(-_bits(modulus - 1) // r)


def table_bits(P: int, r: int, leaf_primes, leaf_sizes) -> int:
    """Exact bit size of every lookup table a plan needs."""
    R = 1 << r
    d = num_digits(P, r)
    M = math.prod(leaf_primes)
    pbits = _bits(P - 1)
    total = 2 * d * R * R * pbits
    total += d * R * sum(_bits(q - 1) for q in leaf_primes)
    for s in leaf_sizes:
        for q in leaf_primes:
            if q**s > ADDRESS_LIMIT:
                raise TableBudgetError(f"{q}^{s} entries exceed the addressable range")
            total += q**s * s * _bits(q - 1)
    total += sum(leaf_primes) * _bits(M - 1)
    total += fold_digits(M, r) * R * pbits
    return total


@dataclass(frozen=True)
class BudgetReport:
    m_candidate: int
    Z_count: int
    total_table_bits: int
    fits: bool
    leaf_primes: tuple[int, ...] = ()
    budget_bits: int = 0


def budget_check(m: int, P: int, budget_bits: int = DEFAULT_BUDGET_FLOOR, leaf_sizes=None) -> BudgetReport:
    if m < 2:
        raise ValueError("base size must be >= 2")
    sizes = tuple(sorted(set(leaf_sizes or (m,))))
    primes = leaf_primes_for(P, max(sizes))
    total = table_bits(P, digit_bits_for(P), primes, sizes)
    return BudgetReport(m, len(primes), total, total <= budget_bits, tuple(primes), budget_bits)


def choose_base_size(target_n: int, budget_bits: int, *, above: int = 0) -> int:
    """Largest leaf size whose exact table total fits the budget (at least 2)."""
    P = find_field_prime(target_n, LINNIK_L, above=above)
    best, m = 2, 2
    while True:
        try:
            report = budget_check(m, P, budget_bits)
        except TableBudgetError:
            break
        if not report.fits:
            break
        best = m
        m += 1
    return best


def m_formula(n: int, alpha: float = 2.0) -> float:
    """The asymptotic leaf size log n / (log log n)**alpha, as a diagnostic."""
    ln = math.log2(n)
    return ln / math.log2(ln) ** alpha if ln > 2 else 0.0


# A split tree is either a leaf size (int) or a pair (outer, inner) of trees.
def tree_size(tree) -> int:
    if isinstance(tree, int):
        return tree
    return tree_size(tree[0]) * tree_size(tree[1])


def tree_leaves(tree) -> list[int]:
    if isinstance(tree, int):
        return [tree]
    return tree_leaves(tree[0]) + tree_leaves(tree[1])


def tree_levels(tree) -> tuple[tuple[int, ...], ...]:
    levels, frontier = [], [tree]
    while frontier:
        levels.append(tuple(tree_size(t) for t in frontier))
        frontier = [c for t in frontier if not isinstance(t, int) for c in t]
    return tuple(levels)


def split_tree(factors) -> object:
    """Recursively bipartition a factor multiset into halves of near-equal product."""
    factors = sorted(factors, reverse=True)
    if len(factors) == 1:
        return factors[0]
    counts: dict[int, int] = {}
    for f in factors:
        counts[f] = counts.get(f, 0) + 1
    values = sorted(counts, reverse=True)
    total = math.prod(factors)
    best = None
    # at most two distinct factor values, so this enumeration is tiny
    ranges = [range(counts[v] + 1) for v in values]
    for pick in _product(ranges):
        n_left = sum(pick)
        if n_left == 0 or n_left == len(factors):
            continue
        left = math.prod(v**k for v, k in zip(values, pick))
        right = total // left
        hi, lo = max(left, right), min(left, right)
        key = (Fraction(hi, lo), abs(2 * n_left - len(factors)), left < right)
        if best is None or key < best[0]:
            best = (key, pick)
    pick = best[1]
    left = [v for v, k in zip(values, pick) for _ in range(k)]
    right = [v for v, k in zip(values, pick) for _ in range(counts[v] - k)]
    return (split_tree(left), split_tree(right))


def _product(ranges):
    if not ranges:
        yield ()
        return
    for head in ranges[0]:
        for tail in _product(ranges[1:]):
            yield (head,) + tail


def choose_tree(target_n: int, m: int):
    """Leaf factors (m+1)**(t-z) * m**z covering target_n as tightly as possible.

    Returns (tree, realized_n).
    """
    if m < 2 or target_n < m * m:
        raise PlanError(f"target {target_n} is below m^2 = {m * m}")
    k = 1
    while m ** (2 ** (k + 1)) <= target_n:
        k += 1
    t = 2**k
    while (m + 1) ** t < target_n:
        t += 1
    lo, hi = 0, t  # largest z with (m+1)^(t-z) m^z >= target_n
    while lo < hi:
        z = (lo + hi + 1) // 2
        if (m + 1) ** (t - z) * m**z >= target_n:
            lo = z
        else:
            hi = z - 1
    z = lo
    factors = [m + 1] * (t - z) + [m] * z
    return split_tree(factors), math.prod(factors)


def decompose_length(n: int, m: int) -> list[int]:
    """The unique multiset of factors m, m+1 whose product is n."""
    a, big = 0, 1
    while big <= n:
        rest, b = n // big, 0
        if n % big == 0:
            while rest % m == 0:
                rest //= m
                b += 1
            if rest == 1:
                return [m + 1] * a + [m] * b
        big *= m + 1
        a += 1
    raise PlanError(f"{n} is not a product of {m} and {m + 1}")


def mult_digit_bits(P: int, n: int) -> int:
    """Largest b with (2**b)**2 * n < P, i.e. the multiplier's digit width."""
    b = 0
    while (1 << (2 * (b + 1))) * n < P:
        b += 1
    return b


def word_safe(P: int, leaf_primes, leaf_sizes) -> bool:
    r = digit_bits_for(P)
    d = num_digits(P, r)
    M = math.prod(leaf_primes)
    return (
        P * 2 * next_pow2(d * d) < WORD_LIMIT
        and M * 2 * next_pow2(len(leaf_primes)) < WORD_LIMIT
        and P * 2 * next_pow2(max(leaf_sizes) + 1) < WORD_LIMIT
    )


@dataclass(frozen=True)
class TransformPlan:
    length_n: int
    field_prime_P: int
    root_omega: int
    digit_base_R: int
    linnik_L: int
    base_size_m: int
    tree: object
    leaf_primes: tuple[int, ...]
    budget_bits: int
    target_n: int = 0
    seed: int = 0
    budget_m: int = 0
    table_bits: int = 0
    fits: bool = True
    diagnostics: dict = field(default_factory=dict, compare=False)

    @property
    def r(self) -> int:
        return self.digit_base_R.bit_length() - 1

    @property
    def num_digits(self) -> int:
        return num_digits(self.field_prime_P, self.r)

    @property
    def leaf_sizes(self) -> tuple[int, ...]:
        return tuple(sorted(set(tree_leaves(self.tree))))

    @property
    def tree_levels(self):
        return tree_levels(self.tree)

    @property
    def Z(self) -> int:
        return len(self.leaf_primes)

    @property
    def modulus_M(self) -> int:
        return math.prod(self.leaf_primes)

    @property
    def linnik_ok(self) -> bool:
        return linnik_holds(self.length_n, self.field_prime_P, self.linnik_L)

    @property
    def mult_digit_base(self) -> int:
        return 1 << mult_digit_bits(self.field_prime_P, self.length_n)

    def describe(self) -> dict:
        out = {
            "target_n": self.target_n,
            "realized_n": self.length_n,
            "P": self.field_prime_P,
            "omega": self.root_omega,
            "R": self.digit_base_R,
            "r": self.r,
            "digits": self.num_digits,
            "L": self.linnik_L,
            "m": self.base_size_m,
            "budget_m": self.budget_m,
            "leaf_sizes": ",".join(map(str, self.leaf_sizes)),
            "leaf_factors": "*".join(map(str, tree_leaves(self.tree))),
            "tree_levels": "|".join(",".join(map(str, lv)) for lv in self.tree_levels),
            "Z": self.Z,
            "leaf_primes": ",".join(map(str, self.leaf_primes)),
            "budget_bits": self.budget_bits,
            "table_bits": self.table_bits,
            "fits": self.fits,
            "linnik_ok": self.linnik_ok,
            "mult_digit_base": self.mult_digit_base,
        }
        out.update(self.diagnostics)
        return out


def _diagnostics(n: int, P: int) -> dict:
    return {
        "m_formula": round(m_formula(n), 4),
        "r_from_n": round(n**0.25, 4),
        "r_from_P": round(math.log2(P) / 4, 4),
    }


def _fit(target_n, tree, realized, above_bits, budget, forced):
    P = find_field_prime(realized, LINNIK_L, above=realized << above_bits if above_bits else 0)
    sizes = tuple(sorted(set(tree_leaves(tree))))
    try:
        report = budget_check(sizes[0], P, budget, leaf_sizes=sizes)
    except TableBudgetError:
        if forced:
            raise
        report = None
    return P, report


def make_plan(
    target_n: int,
    budget_bits: int | None = None,
    seed: int = 0,
    *,
    m: int | None = None,
    digit_bits: int = 0,
    strategy: str = "randomized",
) -> TransformPlan:
    """Find P, find omega, and lay out the recursion for a transform of >= target_n points.

    ``digit_bits`` > 0 asks for a field large enough to multiply integers in
    base 2**digit_bits without wraparound (P > 4**digit_bits * n).
    """
    if target_n < 4:
        raise PlanError("n too small (need n >= 4)")
    budget = budget_bits if budget_bits is not None else max(DEFAULT_BUDGET_FLOOR, target_n)
    forced = m is not None
    if forced:
        if m < 2 or m * m > target_n:
            raise PlanError(f"m={m} needs 2 <= m and m^2 <= n")
        budget_m = m
    else:
        above = (target_n << 2 * digit_bits) if digit_bits else 0
        budget_m = min(choose_base_size(target_n, budget, above=above), math.isqrt(target_n))
    m2 = budget_m
    while True:
        tree, realized = choose_tree(target_n, m2)
        P, report = _fit(target_n, tree, realized, 2 * digit_bits, budget, forced)
        if forced or (report is not None and report.fits):
            break
        if m2 > 2:
            m2 -= 1
            continue
        if set(tree_leaves(tree)) != {2}:
            # size-3 leaves cost q^3 entries; a pure power-of-two tree is
            # longer but may fit where the mixed one does not
            t = (target_n - 1).bit_length()
            alt = split_tree([2] * t)
            alt_P, alt_report = _fit(target_n, alt, 1 << t, 2 * digit_bits, budget, forced)
            if alt_report is not None and (report is None or alt_report.fits):
                tree, realized, P, report = alt, 1 << t, alt_P, alt_report
        break
    sizes = tuple(sorted(set(tree_leaves(tree))))
    if report is None:
        report = budget_check(sizes[0], P, budget, leaf_sizes=sizes)
    if not word_safe(P, report.leaf_primes, sizes):
        raise PlanError(f"field prime {P} too large for 64-bit table kernels")
    omega = find_root_of_unity(P, realized, strategy, seed)
    return TransformPlan(
        length_n=realized,
        field_prime_P=P,
        root_omega=omega,
        digit_base_R=1 << digit_bits_for(P),
        linnik_L=LINNIK_L,
        base_size_m=sizes[0],
        tree=tree,
        leaf_primes=report.leaf_primes,
        budget_bits=budget,
        target_n=target_n,
        seed=seed,
        budget_m=budget_m,
        table_bits=report.total_table_bits,
        fits=report.fits,
        diagnostics=_diagnostics(realized, P),
    )


def make_mult_plan(operand_bits: int, budget_bits: int | None = None, seed: int = 0, *, m=None) -> TransformPlan:
    """Plan for multiplying two naturals of up to operand_bits bits each.

    Uses the widest digit that keeps every kernel inside 64-bit words.
    """
    operand_bits = max(1, operand_bits)
    for b in range(16, 0, -1):
        digits = -(-operand_bits // b)
        target = max(4, 2 * digits)
        if m is not None and m * m > target:
            continue
        try:
            return make_plan(target, budget_bits, seed, m=m, digit_bits=b)
        except PlanError:
            continue
    raise PlanError(f"no word-safe multiplication plan for {operand_bits}-bit operands")


def plan_from_header(n, P, omega, R, L, m, leaf_primes) -> TransformPlan:
    """Rebuild a plan from the fields stored in a table file."""
    tree = split_tree(decompose_length(n, m))
    sizes = tuple(sorted(set(tree_leaves(tree))))
    bits = table_bits(P, R.bit_length() - 1, leaf_primes, sizes)
    return TransformPlan(
        length_n=n,
        field_prime_P=P,
        root_omega=omega,
        digit_base_R=R,
        linnik_L=L,
        base_size_m=m,
        tree=tree,
        leaf_primes=tuple(leaf_primes),
        budget_bits=bits,
        target_n=n,
        budget_m=m,
        table_bits=bits,
        diagnostics=_diagnostics(n, P),
    )
