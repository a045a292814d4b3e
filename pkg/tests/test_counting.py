import itertools
import math
import time

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from transpoly.counting import (
    BudgetExceeded,
    GeneralMargins,
    MarginError,
    MarginSpec,
    brute_force_count,
    count_constant_margins,
    count_margins_general,
)

from oracles import all_matrices_count, compositions, rsk_count


def general(rows, cols):
    return count_margins_general(GeneralMargins(rows, cols))


# --- construction ---------------------------------------------------------

def test_margin_spec_lambda():
    spec = MarginSpec(4, 3, 6, 2)
    assert spec.lam == spec.s / spec.n == spec.t / spec.m
    assert spec.total == 12


@pytest.mark.parametrize("args", [(2, 1, 2, 2), (3, 2, 2, 2)])
def test_margin_spec_unbalanced(args):
    with pytest.raises(MarginError, match="unbalanced margins"):
        MarginSpec(*args)


@pytest.mark.parametrize("args", [(0, 0, 1, 0), (1, 0, 0, 0), (1, -1, 1, -1)])
def test_margin_spec_rejects_degenerate(args):
    with pytest.raises(MarginError):
        MarginSpec(*args)


def test_general_margins_unbalanced_is_an_error_not_zero():
    with pytest.raises(MarginError, match="unbalanced margins"):
        GeneralMargins((2, 1), (1, 1))
    with pytest.raises(MarginError):
        GeneralMargins((), (1,))


# --- worked examples --------------------------------------------------------

@pytest.mark.parametrize(
    "rows, cols, expected",
    [
        ((0, 0), (0, 0), 1),
        ((2, 1), (1, 1, 1), 3),
        ((3, 3), (2, 2, 2), 7),
        ((1, 1), (1, 1), 2),
        ((2, 2, 2), (2, 2, 2), 21),
        ((2, 1), (3,), 1),
        ((5,), (1, 1, 1, 1, 1), 1),
        ((0, 4), (2, 2), 1),
    ],
)
def test_count_general_examples(rows, cols, expected):
    assert general(rows, cols) == expected
    assert brute_force_count(GeneralMargins(rows, cols)) == expected


def test_examples_agree_with_cellwise_enumeration():
    # the [DERIVED] values above, from a second enumeration that walks every cell
    assert all_matrices_count((2, 1), (1, 1, 1)) == 3
    assert all_matrices_count((3, 3), (2, 2, 2)) == 7
    assert all_matrices_count((2, 2, 2), (2, 2, 2)) == 21


@pytest.mark.parametrize(
    "spec, expected",
    [
        ((2, 1, 2, 1), 2),
        ((1, 5, 5, 1), 1),
        ((3, 2, 3, 2), 21),
        ((2, 4, 2, 4), 5),
    ],
)
def test_count_constant_examples(spec, expected):
    assert count_constant_margins(MarginSpec(*spec)) == expected


def test_seven_as_bounded_compositions():
    # rows (3,3), cols (2,2,2): the first row is any a1+a2+a3=3 with a_i <= 2
    direct = sum(1 for a in itertools.product(range(3), repeat=3) if sum(a) == 3)
    assert direct == general((3, 3), (2, 2, 2)) == 7


# --- invariants ---------------------------------------------------------------

def test_two_by_two_closed_form():
    for z in range(51):
        assert count_constant_margins(MarginSpec(2, z, 2, z)) == z + 1


@pytest.mark.parametrize(
    "spec",
    [(2, 3, 3, 2), (2, 6, 4, 3), (3, 4, 4, 3), (3, 8, 6, 4), (4, 6, 6, 4), (5, 6, 3, 10), (1, 6, 3, 2)],
)
def test_transpose_symmetry(spec):
    sp = MarginSpec(*spec)
    assert count_constant_margins(sp) == count_constant_margins(sp.transpose())


@st.composite
def margins(draw, max_dim=3, max_entry=4):
    m = draw(st.integers(1, max_dim))
    n = draw(st.integers(1, max_dim))
    rows = draw(st.lists(st.integers(0, max_entry), min_size=m, max_size=m))
    # cut the total into n pieces at sorted random points
    total = sum(rows)
    cuts = sorted(draw(st.lists(st.integers(0, total), min_size=n - 1, max_size=n - 1)))
    cols = [b - a for a, b in zip([0] + cuts, cuts + [total])]
    return tuple(rows), tuple(cols)


@settings(max_examples=60, deadline=None)
@given(margins(), st.randoms(use_true_random=False))
def test_permutation_invariance(pair, rnd):
    rows, cols = pair
    base = general(rows, cols)
    r2, c2 = list(rows), list(cols)
    rnd.shuffle(r2)
    rnd.shuffle(c2)
    assert general(r2, c2) == base
    assert general(cols, rows) == base


@settings(max_examples=40, deadline=None)
@given(margins())
def test_matches_brute_force(pair):
    rows, cols = pair
    assert general(rows, cols) == brute_force_count(GeneralMargins(rows, cols))


@pytest.mark.parametrize("m", [1, 2, 3])
@pytest.mark.parametrize("n", [1, 2, 3])
def test_distribution_identity(m, n):
    # summing over every column-sum vector frees the columns: rows fill independently
    for total in range(7):
        for rows in compositions(total, m):
            lhs = sum(general(rows, cols) for cols in compositions(total, n))
            rhs = math.prod(math.comb(r + n - 1, n - 1) for r in rows)
            assert lhs == rhs, (rows, n)


@pytest.mark.parametrize(
    "rows, cols",
    [
        ((4,) * 5, (4,) * 5),
        ((6,) * 4, (6,) * 4),
        ((3, 5, 7, 2), (4, 4, 4, 5)),
        ((9, 0, 3), (2, 2, 2, 2, 2, 2)),
        ((6,) * 3, (3,) * 6),
        ((5,) * 6, (5,) * 6),
    ],
)
def test_matches_rsk_oracle(rows, cols):
    assert general(rows, cols) == rsk_count(rows, cols)


def test_larger_counts_exceed_machine_words():
    c = count_constant_margins(MarginSpec(5, 12, 5, 12))
    assert c == rsk_count((12,) * 5, (12,) * 5)
    assert c > 2**32


# --- errors and budgets ---------------------------------------------------------

def test_oracle_budget():
    with pytest.raises(BudgetExceeded, match="oracle budget exceeded"):
        brute_force_count(GeneralMargins((9, 9, 9), (9, 9, 9)), budget=1000)


def test_time_budget():
    start = time.monotonic()
    with pytest.raises(BudgetExceeded):
        count_constant_margins(MarginSpec(7, 14, 7, 14), time_budget=0.05)
    assert time.monotonic() - start < 5


def test_deterministic():
    sp = MarginSpec(4, 9, 6, 6)
    assert count_constant_margins(sp) == count_constant_margins(sp)
