import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from padic_coherent.coherent import coherent_from_cascade, degree_series, delta_path_state, indicator_state
from padic_coherent.lc_space import CascadeTree, ResolutionError, act, l2_inner, random_cascade
from padic_coherent.limits import (
    PairingValue,
    disk_value,
    expected_indicator_limit,
    numeric_oracle,
    pairing_coherent,
    pairing_delta,
    pairing_indicators,
    phi_coherent,
    phi_indicator,
    regularized_limit,
    relative_error,
    sweep,
)
from padic_coherent.padic import Disk, PAdicPoint, Word, haar_measure, words_of_length, words_up_to
from padic_coherent.scalars import QComplex

from conftest import rationals


def W(*digits, p=2):
    return Word(tuple(digits), p)


def brute_limit(v: PairingValue, k: int = 40) -> Fraction:
    """(1 - t) value(t) at t = 1 - 2**-k; within C 2**-k of the limit."""
    t = 1 - Fraction(1, 2**k)
    return (1 - t) * v.evaluate(t)


# ---------------------------------------------------------------- PairingValue


def test_canonical_padding_and_basics():
    v = PairingValue(2, "x", (1,), 3, 3)
    assert v.poly == (1, 0, 0)
    assert v.coefficient(1) == 0 and v.coefficient(5) == 3
    assert regularized_limit(v) == 3
    with pytest.raises(ValueError):
        PairingValue(2, "x", (1, 2, 3), 0, 2)
    assert regularized_limit(PairingValue(2, "x", (1, 5), 0, 2)) == 0


@given(
    poly=st.lists(rationals(50, 20), max_size=6),
    c=rationals(50, 20),
    extra=st.integers(0, 3),
    t=st.integers(1, 99).map(lambda k: Fraction(k, 100)),
)
def test_evaluate_against_series(poly, c, extra, t):
    v = PairingValue(2, "x", tuple(poly), c, len(poly) + extra)
    n = v.tail_start + 10
    # the partial sum plus the geometric remainder is the full value
    assert v.truncated(t, n) + v.tail_bound(t, n) == v.evaluate(t)
    assert v.regularized(t) == (1 - t) * v.evaluate(t)
    diff = abs(v.regularized(t) - v.limit)
    assert diff <= v.error_constant() * (1 - t)


# ---------------------------------------------------------------- indicator pairings


def test_indicator_pairing_examples():
    v = pairing_indicators(W(0), W(0, 1))
    assert (v.poly, v.tail_coeff, v.tail_start, v.limit) == ((1, 2), 2, 2, 2)
    assert pairing_indicators(W(0), W(1)).limit == 0
    assert pairing_indicators(Word((), 3), Word((), 3)).limit == 1
    assert pairing_indicators(W(0), W(0, 1)) == pairing_indicators(W(0, 1), W(0))


@pytest.mark.parametrize("p", (2, 3))
def test_closed_form_matches_state_series(p):
    """Coefficients of the closed form equal the block-level series of the states."""
    ws = words_up_to(p, 3)
    for i in ws:
        for j in ws[:: max(1, len(ws) // 12)]:
            v = pairing_indicators(i, j)
            series = degree_series(indicator_state(i, None, 8), indicator_state(j, None, 8))
            assert series == [v.coefficient(n) for n in range(9)]


@pytest.mark.parametrize("p", (2, 3))
def test_limit_is_min_and_l2(p):
    ws = words_up_to(p, 3)
    for i in ws:
        for j in ws:
            lim = pairing_indicators(i, j).limit
            assert lim == expected_indicator_limit(i, j)
            assert lim == l2_inner(phi_indicator(i), phi_indicator(j))


def test_limit_matches_numeric_extrapolation():
    for i, j in [(W(0), W(0, 1)), (W(), W(1, 1, 0)), (W(0, 1), W(0, 0))]:
        v = pairing_indicators(i, j)
        assert abs(brute_limit(v) - v.limit) <= v.error_constant() * Fraction(1, 2**40)


# ---------------------------------------------------------------- delta / cascade


def test_delta_examples():
    zero = PAdicPoint(W(), W())
    assert pairing_delta(zero, W(0, 0)).limit == 4
    assert pairing_delta(zero, W(1)).limit == 0


@pytest.mark.parametrize("p", (2, 3))
def test_delta_series_matches_states(p):
    rng = random.Random(p)
    for _ in range(20):
        x = PAdicPoint(Word(tuple(rng.randrange(p) for _ in range(2)), p), Word(tuple(rng.randrange(p) for _ in range(2)), p))
        j = Word(tuple(rng.randrange(p) for _ in range(rng.randint(0, 4))), p)
        v = pairing_delta(x, j)
        series = degree_series(delta_path_state(x, None, 7), indicator_state(j, None, 7))
        assert series == [v.coefficient(n) for n in range(8)]
        assert v.limit == (p ** len(j) if x.prefix(len(j)) == j else 0)


def test_cascade_examples():
    uni = CascadeTree.uniform(2, 3)
    assert pairing_coherent(uni, W(0, 1)).limit == 1
    tree = random_cascade(3, 3, 12)
    assert pairing_coherent(tree, Word((), 3)).limit == tree.root
    with pytest.raises(ResolutionError):
        pairing_coherent(tree, Word((0, 0, 0, 0), 3))


@pytest.mark.parametrize("p", (2, 3))
def test_cascade_series_and_round_trip(p):
    for seed in range(10):
        tree = random_cascade(p, 4, seed, complex_values=seed % 2 == 0)
        state = coherent_from_cascade(tree, None, 4)
        for i in words_up_to(p, 3):
            v = pairing_coherent(tree, i)
            series = degree_series(state, indicator_state(i, None, 4))
            assert series == [v.coefficient(n) for n in range(5)]
            assert disk_value(tree, i) == tree[i]
            assert haar_measure(Disk(i)) * v.limit == act(phi_coherent(tree), phi_indicator(i).scale(haar_measure(Disk(i))))


def test_phi_injective_on_depth3():
    a, b = random_cascade(2, 3, 1), random_cascade(2, 3, 2)
    assert any(
        act(phi_coherent(a), phi_indicator(w)) != act(phi_coherent(b), phi_indicator(w))
        for w in words_of_length(2, 3)
    )


# ---------------------------------------------------------------- oracle


def test_oracle_example_value_3():
    a = indicator_state(W(0), Fraction(1, 2), 60)
    b = indicator_state(W(0, 1), Fraction(1, 2), 60)
    got = numeric_oracle(a, b)
    assert relative_error(got, pairing_indicators(W(0), W(0, 1)).evaluate(Fraction(1, 2))) <= 1e-9
    assert abs(got - 3.0) <= 1e-9


def test_oracle_disjoint_is_poly():
    t = Fraction(3, 4)
    a = indicator_state(W(0, 1), t, 60)
    b = indicator_state(W(0, 0), t, 60)
    v = pairing_indicators(W(0, 1), W(0, 0))
    assert numeric_oracle(a, b) == pytest.approx(float(v.evaluate(t)), rel=1e-12)


@pytest.mark.parametrize("p", (2, 3))
def test_explicit_and_blocks_agree(p):
    t = Fraction(1, 3)
    tree = random_cascade(p, 5, 2, complex_values=True)
    states = [coherent_from_cascade(tree, t, 5)] + [indicator_state(i, t, 5) for i in words_up_to(p, 2)[:5]]
    for a in states:
        for b in states:
            e = complex(numeric_oracle(a, b, "explicit"))
            k = complex(numeric_oracle(a, b, "blocks"))
            assert abs(e - k) <= 1e-12 * max(1.0, abs(e))


def test_cascade_oracle_depth40():
    t = Fraction(1, 3)
    tree = random_cascade(2, 40, 6, dense_depth=3)
    i = next(w for w in tree.values if len(w) == 3)
    a = coherent_from_cascade(tree, t, 40)
    b = indicator_state(i, t, 40)
    v = pairing_coherent(tree, i)
    assert relative_error(numeric_oracle(a, b), v.truncated(t, 40)) <= 1e-9


def test_oracle_rejects_mixed_t():
    with pytest.raises(ValueError):
        numeric_oracle(indicator_state(W(0), Fraction(1, 2), 3), indicator_state(W(0), Fraction(1, 3), 3))
    with pytest.raises(ValueError):
        numeric_oracle(indicator_state(W(0), Fraction(1, 2), 3), indicator_state(W(0), Fraction(1, 2), 3), "nope")


# ---------------------------------------------------------------- sweep


def test_sweep_example_k2():
    v = pairing_indicators(W(0), W(0, 1))
    row = sweep(v, 2)[0]
    assert row.t == Fraction(3, 4)
    # value = 1 + 2t + 2t^2/(1-t) by hand
    assert row.value == 1 + 2 * Fraction(3, 4) + 2 * Fraction(9, 16) * 4
    assert row.scaled_value == Fraction(1, 4) * row.value
    assert row.abs_error == abs(row.scaled_value - 2) <= 3 * Fraction(1, 4)


def test_sweep_monotone_nested_and_linear_disjoint():
    rows = sweep(pairing_indicators(W(1), W(1, 0, 1)), 20)
    errs = [r.abs_error for r in rows]
    assert all(a > b for a, b in zip(errs, errs[1:]))
    assert all(r.abs_error <= r.error_bound for r in rows)
    # disjoint: (1-t) * (1 + 0 t) decays exactly linearly
    rows = sweep(pairing_indicators(W(1), W(0, 1)), 20)
    assert all(r.abs_error == 1 - r.t == r.error_bound for r in rows)


def test_complex_sweep():
    tree = random_cascade(2, 3, 3, complex_values=True)
    v = pairing_coherent(tree, W(1, 1))
    for r in sweep(v, 12):
        assert r.abs_error <= r.error_bound
