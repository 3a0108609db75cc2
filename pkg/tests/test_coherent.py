import random
from fractions import Fraction

import pytest

from padic_coherent.coherent import (
    coherent_from_cascade,
    degree_series,
    delta_path_state,
    eigen_residual,
    eigen_residual_by_degree,
    indicator_state,
    indicator_state_by_operators,
    truncated_inner,
)
from padic_coherent.fock import FockVector
from padic_coherent.lc_space import CascadeTree, ResolutionError, random_cascade
from padic_coherent.padic import PAdicPoint, Word, words_of_length, words_up_to
from padic_coherent.scalars import QComplex, abs2


def W(*digits, p=2):
    return Word(tuple(digits), p)


def explicit_series(a, b):
    """p**n * sum over explicit words of c_K conj(d_K), word by word."""
    va, vb = a.reduced_vector(), b.reduced_vector()
    top = min(a.trunc_degree, b.trunc_degree)
    out = [Fraction(0)] * (top + 1)
    for w, c in va.coeffs.items():
        if len(w) <= top and w in vb.coeffs:
            out[len(w)] += c * vb.coeffs[w].conjugate() * a.p ** len(w)
    return out


def closed_form_coeff(i, k):
    if k.is_prefix_of(i):
        return Fraction(1)
    if i.is_prefix_of(k):
        return Fraction(1, i.p ** (len(k) - len(i)))
    return Fraction(0)


# ---------------------------------------------------------------- builders


def test_cascade_state_examples():
    s = coherent_from_cascade(CascadeTree.uniform(2, 2), Fraction(1, 2), 1)
    # lambda = sqrt(2 * 1/2) = 1, so true coefficients are the tree values
    assert s.lam == 1
    assert s.reduced_vector().coeffs == {W(): 1, W(0): Fraction(1, 2), W(1): Fraction(1, 2)}
    assert s.numeric_vector().coeffs == {W(): 1, W(0): 0.5, W(1): 0.5}
    tree = random_cascade(3, 3, 4)
    s0 = coherent_from_cascade(tree, Fraction(1, 3), 0)
    assert s0.reduced_vector() == FockVector.vacuum(3, tree.root)
    with pytest.raises(ResolutionError):
        coherent_from_cascade(tree, Fraction(1, 3), 4)


def test_bad_t_rejected():
    for t in (0, 1, Fraction(3, 2), -1):
        with pytest.raises(ValueError):
            indicator_state(W(0), t, 2)


def test_indicator_state_examples():
    s = indicator_state(W(), Fraction(1, 2), 3)
    for k in range(4):
        assert all(s.coefficient(w) == Fraction(1, 2**k) for w in words_of_length(2, k))
    s = indicator_state(W(0, 1), None, 4)
    assert s.coefficient(W(0)) == 1
    assert s.coefficient(W(0, 1, 1)) == Fraction(1, 2)
    assert s.coefficient(W(1)) == 0
    assert s.coefficient(W(0, 0, 1)) == 0
    with pytest.raises(ValueError):
        indicator_state(W(0, 1), None, 1)


@pytest.mark.parametrize("p", (2, 3))
def test_indicator_closed_form_everywhere(p):
    for i in words_up_to(p, 2):
        s = indicator_state(i, None, 4)
        for k in words_up_to(p, 4):
            assert s.coefficient(k) == closed_form_coeff(i, k)


@pytest.mark.parametrize("p", (2, 3))
def test_operator_route_matches_closed_form(p):
    for i in words_up_to(p, 3):
        for n in range(len(i), 7):
            by_ops = indicator_state_by_operators(i, n)
            closed = indicator_state(i, None, n).reduced_vector()
            assert by_ops == closed, (i, n)


def test_delta_path_examples():
    zero = PAdicPoint(W(), W())
    s = delta_path_state(zero, Fraction(1, 2), 2)
    assert s.reduced_vector().coeffs == {W(): 1, W(0): 1, W(0, 0): 1}
    rng = random.Random(5)
    for _ in range(30):
        p = rng.choice((2, 3, 5))
        pre = Word(tuple(rng.randrange(p) for _ in range(rng.randint(0, 3))), p)
        per = Word(tuple(rng.randrange(p) for _ in range(rng.randint(0, 3))), p)
        x = PAdicPoint(pre, per)
        n = rng.randint(0, 8)
        coeffs = delta_path_state(x, None, n).reduced_vector().coeffs
        assert len(coeffs) == n + 1
        for w in coeffs:
            assert list(w.digits) == [x.digit_at(j) for j in range(len(w))]


# ---------------------------------------------------------------- series


@pytest.mark.parametrize("p", (2, 3))
def test_degree_series_matches_explicit_sum(p):
    rng = random.Random(p * 7)
    zero = PAdicPoint(Word((), p), Word((1,), p))
    tree = random_cascade(p, 4, 3, complex_values=True)
    states = [coherent_from_cascade(tree, None, 4), delta_path_state(zero, None, 4)]
    states += [indicator_state(i, None, 4) for i in rng.sample(words_up_to(p, 3), 6)]
    for a in states:
        for b in states:
            assert degree_series(a, b) == explicit_series(a, b)


def test_truncated_inner_conjugate_symmetric():
    tree = random_cascade(2, 5, 1, complex_values=True)
    a = coherent_from_cascade(tree, Fraction(1, 3), 5)
    b = indicator_state(W(1, 0), Fraction(1, 3), 5)
    ab, ba = truncated_inner(a, b), truncated_inner(b, a)
    assert ab == ba.conjugate()
    # direct weighted sum with lambda**(2|K|) = (p t)**|K|
    va, vb = a.reduced_vector(), b.reduced_vector()
    direct = sum((c * vb.coeffs.get(w, 0) * Fraction(2, 3) ** len(w) for w, c in va.coeffs.items()), Fraction(0))
    assert ab == direct


# ---------------------------------------------------------------- eigen


@pytest.mark.parametrize("p", (2, 3))
def test_valid_cascades_are_eigenvectors(p):
    for seed in range(20):
        tree = random_cascade(p, 5, seed, complex_values=seed % 2 == 1)
        assert eigen_residual(coherent_from_cascade(tree, Fraction(1, 2), 5)) == 0
    assert eigen_residual(coherent_from_cascade(random_cascade(2, 1, 0), Fraction(1, 2), 1)) == 0


@pytest.mark.parametrize("p,t", [(2, Fraction(1, 2)), (3, Fraction(1, 3)), (3, Fraction(3, 4))])
def test_single_violation_residual(p, t):
    tree = random_cascade(p, 4, 9)
    eps = Fraction(2, 7)
    # a leaf change breaks the parent node at degree 3
    leaf = Word((1,) * 4, p)
    bad = tree.with_value(leaf, tree[leaf] + eps)
    by_deg = eigen_residual_by_degree(coherent_from_cascade(bad, t, 4))
    assert by_deg == [0, 0, 0, (p * t) ** 4 * eps**2]
    # a root change: sum_j psi_j - psi_root = -eps at degree 0
    root = tree.with_value(Word((), p), tree.root + eps)
    by_deg = eigen_residual_by_degree(coherent_from_cascade(root, t, 4))
    assert by_deg == [p * t * eps**2, 0, 0, 0]


def test_complex_violation_uses_modulus():
    tree = random_cascade(2, 3, 2)
    eps = QComplex(1, 2)
    bad = tree.with_value(W(0, 1), tree[W(0, 1)] + eps)
    by_deg = eigen_residual_by_degree(coherent_from_cascade(bad, Fraction(1, 2), 3))
    # (0,1) is both a broken child (degree 1) and a broken parent (degree 2)
    assert by_deg == [0, abs2(eps), abs2(eps)]


def test_eigen_needs_cascade_state():
    with pytest.raises(ValueError):
        eigen_residual(indicator_state(W(0), Fraction(1, 2), 3))
