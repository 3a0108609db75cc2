"""Degree-truncated free coherent states.

Every state here has the shape ``sum_K lambda**|K| * c_K * A†_K Ω``.  We
store the reduced coefficients ``c_K`` and the parameter ``t = lambda²/p``;
inner products then only involve ``lambda**(2n) = (p*t)**n`` and stay
rational.

Coefficients are held as blocks ``(root, degree) -> c``: every word of
length ``degree`` that extends ``root`` carries ``c``.  An explicit word is
a block whose root has full length.  Indicator states spread uniformly over
whole subtrees, so blocks keep them finite even at degree 60.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Mapping

from .fock import FockVector, annihilation_sum, creation_sum
from .lc_space import CascadeTree, ResolutionError
from .padic import PAdicPoint, Word, same_p, words_of_length
from .scalars import Scalar, abs2, simplify

EXPANSION_CAP = 2_000_000


class StateFamily(enum.Enum):
    CASCADE = "cascade"
    INDICATOR = "indicator"
    DELTA_PATH = "delta_path"


def check_t(t: Fraction | None) -> Fraction | None:
    if t is None:
        return None
    t = Fraction(t)
    if not 0 < t < 1:
        raise ValueError(f"t = lambda^2/p must lie in (0, 1), got {t}")
    return t


@dataclass(frozen=True)
class TruncatedState:
    p: int
    trunc_degree: int
    t: Fraction | None
    family: StateFamily
    label: Word | PAdicPoint | None
    blocks: Mapping[tuple[Word, int], Scalar]

    @property
    def lam(self) -> float:
        """Floating-point eigenvalue ``sqrt(p*t)``."""
        if self.t is None:
            raise ValueError("symbolic state has no numeric lambda")
        return math.sqrt(self.p * self.t)

    def coefficient(self, w: Word) -> Scalar:
        """Reduced coefficient ``c_K``; the Fock coefficient is ``lambda**|K| * c_K``."""
        if len(w) > self.trunc_degree:
            return Fraction(0)
        n = len(w)
        for r in range(n + 1):
            c = self.blocks.get((Word._trusted(w.digits[:r], self.p), n))
            if c is not None:
                return c
        return Fraction(0)

    def iter_blocks(self) -> Iterator[tuple[Word, int, Scalar]]:
        for (root, n), c in self.blocks.items():
            yield root, n, c

    def word_count(self) -> int:
        return sum(self.p ** (n - len(r)) for r, n in self.blocks)

    def reduced_vector(self) -> FockVector:
        """Explicit exact FockVector of the reduced coefficients."""
        if self.word_count() > EXPANSION_CAP:
            raise ValueError(f"state spans {self.word_count()} words; too many to expand")
        out: dict[Word, Scalar] = {}
        for root, n, c in self.iter_blocks():
            for tail in words_of_length(self.p, n - len(root)):
                out[Word._trusted(root.digits + tail.digits, self.p)] = c
        return FockVector(self.p, out)

    def numeric_vector(self) -> FockVector:
        """Explicit floating-point vector with the true ``lambda**|K|`` factors."""
        lam = self.lam
        return self.reduced_vector().map_coeffs(lambda w, c: complex(c) * lam ** len(w))


def _explicit(words: Mapping[Word, Scalar]) -> dict[tuple[Word, int], Scalar]:
    return {(w, len(w)): c for w, c in words.items() if c != 0}


def coherent_from_cascade(tree: CascadeTree, t: Fraction | None, n: int) -> TruncatedState:
    """``sum_{|K| <= n} lambda**|K| Psi_K A†_K Ω``.

    The tree is taken as given (not re-validated) so that broken trees can
    be probed through :func:`eigen_residual`.
    """
    if n > tree.depth:
        raise ResolutionError(f"truncation degree {n} exceeds tree depth {tree.depth}")
    if n < 0:
        raise ValueError("truncation degree must be >= 0")
    words = {w: c for w, c in tree.values.items() if len(w) <= n}
    return TruncatedState(tree.p, n, check_t(t), StateFamily.CASCADE, None, _explicit(words))


def indicator_state(i: Word, t: Fraction | None, n: int) -> TruncatedState:
    """The state X_I truncated at degree n.

    Reduced coefficient of K: 1 if K is a prefix of I, ``p**-(|K|-|I|)``
    if K extends I, else 0.
    """
    if n < len(i):
        raise ValueError(f"truncation degree {n} below |I| = {len(i)}")
    p = i.p
    blocks: dict[tuple[Word, int], Scalar] = {}
    for k in range(len(i)):
        blocks[(i.prefix(k), k)] = Fraction(1)
    for d in range(len(i), n + 1):
        blocks[(i, d)] = Fraction(1, p ** (d - len(i)))
    return TruncatedState(p, n, check_t(t), StateFamily.INDICATOR, i, blocks)


def indicator_state_by_operators(i: Word, n: int) -> FockVector:
    """Reduced vector of X_I obtained by literally applying
    ``(1/p sum A†)**k`` and ``(sum A)**l`` to ``lambda**|I| A†_I Ω``.

    Each summand carries a power of lambda; it must match the degree of
    every word it produces, otherwise the reduced form would be wrong.
    """
    if n < len(i):
        raise ValueError(f"truncation degree {n} below |I| = {len(i)}")
    p = i.p
    seed = FockVector.basis(i)
    total = FockVector.zero(p)

    def add(vec: FockVector, lam_power: int) -> None:
        nonlocal total
        for w in vec.coeffs:
            if len(w) != lam_power:
                raise AssertionError(f"lambda power {lam_power} on degree-{len(w)} word")
        total = total + vec

    v = seed
    for k in range(n - len(i) + 1):
        add(v, len(i) + k)
        v = creation_sum(v).scale(Fraction(1, p))
    u = seed
    l = 1
    while True:
        u = annihilation_sum(u)
        if not u.coeffs:
            break
        add(u, len(i) - l)
        l += 1
    return total


def delta_path_state(x: PAdicPoint, t: Fraction | None, n: int) -> TruncatedState:
    """``sum_{k <= n} lambda**k A†_{x_k} Ω`` along the digit stream of x."""
    if n < 0:
        raise ValueError("truncation degree must be >= 0")
    words = {x.prefix(k): Fraction(1) for k in range(n + 1)}
    return TruncatedState(x.p, n, check_t(t), StateFamily.DELTA_PATH, x, _explicit(words))


# ---------------------------------------------------------------- pairings


def degree_series(a: TruncatedState, b: TruncatedState) -> list[Scalar]:
    """Exact coefficients s_n with ``(a, b) = sum_n s_n t**n``.

    ``s_n = p**n * sum_{|K|=n} c_K * conj(d_K)``, computed block against
    block: two blocks of one degree overlap iff one root extends the
    other, on ``p**(n - longer root)`` words.
    """
    p = same_p(a, b)
    top = min(a.trunc_degree, b.trunc_degree)
    sums: list[Scalar] = [Fraction(0)] * (top + 1)

    for root, n, c in a.iter_blocks():
        if n > top:
            continue
        # b-blocks whose root is a prefix of (or equal to) this root
        for r in range(len(root) + 1):
            d = b.blocks.get((Word._trusted(root.digits[:r], p), n))
            if d is not None:
                sums[n] = sums[n] + c * d.conjugate() * p ** (n - len(root))
    for root, n, d in b.iter_blocks():
        if n > top:
            continue
        # a-blocks whose root is a strict prefix of this root
        for r in range(len(root)):
            c = a.blocks.get((Word._trusted(root.digits[:r], p), n))
            if c is not None:
                sums[n] = sums[n] + c * d.conjugate() * p ** (n - len(root))
    return [simplify(s * p**n) for n, s in enumerate(sums)]


def truncated_inner(a: TruncatedState, b: TruncatedState, t: Fraction | None = None) -> Scalar:
    """Exact Fock inner product of two truncated states at rational t."""
    t = check_t(a.t if t is None else t)
    if t is None:
        raise ValueError("need a numeric t")
    total: Scalar = Fraction(0)
    for n, s in enumerate(degree_series(a, b)):
        total = total + s * t**n
    return simplify(total)


def eigen_residual_by_degree(s: TruncatedState) -> list[Fraction]:
    """Squared norm of ``(A - lambda) s`` split by degree 0..N-1.

    ``(A s)_K = lambda**(|K|+1) sum_j c_{Kj}`` and ``(lambda s)_K =
    lambda**(|K|+1) c_K``, so the degree-n part is
    ``(p t)**(n+1) * sum_{|K|=n} |sum_j c_{Kj} - c_K|**2``.
    """
    if s.family is not StateFamily.CASCADE:
        raise ValueError("eigen_residual applies to cascade states")
    if s.t is None:
        raise ValueError("need a numeric t")
    v = s.reduced_vector()
    diff = annihilation_sum(v) - v
    lam2 = s.p * s.t
    out = [Fraction(0)] * s.trunc_degree
    for w, c in diff.coeffs.items():
        n = len(w)
        if n < s.trunc_degree:
            out[n] += lam2 ** (n + 1) * abs2(c)
    return out


def eigen_residual(s: TruncatedState) -> Fraction:
    """``||P_{<N} (A - lambda) s||²``; zero exactly for a valid cascade."""
    return sum(eigen_residual_by_degree(s), Fraction(0))
