"""Exact pairings of coherent states and their regularized limits.

Every pairing handled here has the form

    value(t) = a_0 + a_1 t + ... + a_{m-1} t**(m-1) + c * t**m / (1 - t)

with ``t = lambda²/p``.  Multiplying by ``1 - t`` and letting ``t -> 1``
kills the polynomial part, so the regularized limit is read off as ``c``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .coherent import TruncatedState, check_t
from .lc_space import CascadeTree, Distribution, LCFunction, ResolutionError, indicator
from .padic import (
    Disk,
    DiskRelation,
    PAdicPoint,
    Word,
    disk_relation,
    haar_measure,
    longest_common_prefix,
    same_p,
)
from .scalars import QComplex, Scalar, simplify, to_json_scalar


@dataclass(frozen=True)
class PairingValue:
    p: int
    case: str
    poly: tuple[Scalar, ...]
    tail_coeff: Scalar
    tail_start: int

    def __post_init__(self) -> None:
        poly = tuple(simplify(Fraction(a) if isinstance(a, int) else a) for a in self.poly)
        if len(poly) > self.tail_start:
            raise ValueError("poly longer than tail_start")
        poly = poly + (Fraction(0),) * (self.tail_start - len(poly))
        object.__setattr__(self, "poly", poly)
        tc = self.tail_coeff
        object.__setattr__(self, "tail_coeff", simplify(Fraction(tc) if isinstance(tc, int) else tc))

    @property
    def limit(self) -> Scalar:
        return self.tail_coeff

    def coefficient(self, n: int) -> Scalar:
        """Coefficient of ``t**n`` in the power series of value(t)."""
        if n < self.tail_start:
            return self.poly[n]
        return self.tail_coeff

    def evaluate(self, t: Fraction) -> Scalar:
        t = check_t(t)
        total: Scalar = Fraction(0)
        for a in reversed(self.poly):
            total = total * t + a
        return simplify(total + self.tail_coeff * t**self.tail_start / (1 - t))

    def truncated(self, t: Fraction, n: int) -> Scalar:
        """Partial sum of the power series through ``t**n``."""
        t = check_t(t)
        total: Scalar = Fraction(0)
        for k in range(n, -1, -1):
            total = total * t + self.coefficient(k)
        return simplify(total)

    def tail_bound(self, t: Fraction, n: int) -> Scalar:
        """``value(t) - truncated(t, n)`` when n >= tail_start - 1."""
        if n < self.tail_start - 1:
            raise ValueError("bound only holds once the tail has started")
        t = check_t(t)
        return simplify(self.tail_coeff * t ** (n + 1) / (1 - t))

    def regularized(self, t: Fraction) -> Scalar:
        """``(1 - t) * value(t)``."""
        t = check_t(t)
        return simplify((1 - t) * self.evaluate(t))

    def error_constant(self) -> Fraction:
        """C with ``|(1 - t) value(t) - limit| <= C (1 - t)`` on (0, 1).

        The difference equals ``(1 - t) * sum_{i<m} (a_i - c) t**i``, so the
        sum of ``|a_i - c|`` works (real and imaginary parts bounded
        separately for complex values).
        """
        total = Fraction(0)
        for a in self.poly:
            d = a - self.tail_coeff
            if isinstance(d, QComplex):
                total += abs(d.re) + abs(d.im)
            else:
                total += abs(Fraction(d))
        return total

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "case": self.case,
            "poly": [to_json_scalar(a) for a in self.poly],
            "tail_coeff": to_json_scalar(self.tail_coeff),
            "tail_start": self.tail_start,
            "limit": to_json_scalar(self.limit),
        }


def regularized_limit(v: PairingValue) -> Scalar:
    """``lim_{t -> 1-} (1 - t) value(t)``, which is exactly the tail coefficient."""
    return v.tail_coeff


def _chain(p: int, n: int) -> list[Fraction]:
    return [Fraction(p**i) for i in range(n)]


def pairing_indicators(i: Word, j: Word) -> PairingValue:
    """``(X_I, X_J)`` as a PairingValue (symmetric in I and J)."""
    p = same_p(i, j)
    if len(i) > len(j):
        i, j = j, i
    if i.is_prefix_of(j):
        poly = _chain(p, len(i)) + [Fraction(p ** len(i))] * (len(j) - len(i))
        return PairingValue(p, "nested", tuple(poly), Fraction(p ** len(i)), len(j))
    # supports meet only on the common-prefix chain
    c = len(longest_common_prefix(i, j))
    return PairingValue(p, "disjoint", tuple(_chain(p, c + 1)), Fraction(0), c + 1)


def pairing_delta(x: PAdicPoint, j: Word) -> PairingValue:
    """``(X_x, X_J)`` for the path state of a point x."""
    p = same_p(x, j)
    head = x.prefix(len(j))
    if head == j:
        return PairingValue(p, "delta", tuple(_chain(p, len(j))), Fraction(p ** len(j)), len(j))
    c = len(longest_common_prefix(head, j))
    return PairingValue(p, "delta", tuple(_chain(p, c + 1)), Fraction(0), c + 1)


def pairing_coherent(tree: CascadeTree, i: Word) -> PairingValue:
    """``(Psi, X_I)`` for a cascade state Psi (bilinear in the tree values).

    Ancestor I_d contributes ``p**d Psi_{I_d} t**d``; from degree |I| on,
    the cascade sums collapse every level to ``p**|I| Psi_I t**n``.
    """
    same_p(tree, i)
    if len(i) > tree.depth:
        raise ResolutionError(f"tree of depth {tree.depth} cannot resolve [{i}]")
    p = tree.p
    poly = [p**d * tree[i.prefix(d)] for d in range(len(i))]
    return PairingValue(p, "cascade", tuple(poly), p ** len(i) * tree[i], len(i))


# ---------------------------------------------------------------- phi


def phi_indicator(i: Word) -> LCFunction:
    """Image of X_I: the indicator of D(I) divided by its measure."""
    return indicator(i, normalized=True)


def phi_coherent(tree: CascadeTree) -> Distribution:
    return Distribution.cascade(tree)


def phi_delta(x: PAdicPoint) -> Distribution:
    return Distribution.delta(x)


def disk_value(tree: CascadeTree, i: Word) -> Scalar:
    """``mu(D_I) * limit (Psi, X_I)``: the distribution evaluated on D(I)."""
    return simplify(haar_measure(Disk(i)) * regularized_limit(pairing_coherent(tree, i)))


def expected_indicator_limit(i: Word, j: Word) -> Fraction:
    """``min(p**|I|, p**|J|)`` for nested disks, 0 for disjoint ones."""
    rel = disk_relation(Disk(i), Disk(j))
    if rel is DiskRelation.DISJOINT:
        return Fraction(0)
    return Fraction(i.p ** min(len(i), len(j)))


# ---------------------------------------------------------------- oracle


def _float_blocks_inner(a: TruncatedState, b: TruncatedState) -> complex:
    p = a.p
    lam = a.lam
    top = min(a.trunc_degree, b.trunc_degree)
    total = 0j
    for root, n, c in a.iter_blocks():
        if n > top:
            continue
        for r in range(len(root) + 1):
            d = b.blocks.get((Word._trusted(root.digits[:r], p), n))
            if d is not None:
                total += (lam**n * complex(c)) * (lam**n * complex(d)).conjugate() * float(
                    p ** (n - len(root))
                )
    for root, n, d in b.iter_blocks():
        if n > top:
            continue
        for r in range(len(root)):
            c = a.blocks.get((Word._trusted(root.digits[:r], p), n))
            if c is not None:
                total += (lam**n * complex(c)) * (lam**n * complex(d)).conjugate() * float(
                    p ** (n - len(root))
                )
    return total


def numeric_oracle(a: TruncatedState, b: TruncatedState, method: str = "auto") -> float | complex:
    """Floating-point Fock inner product of two truncated states.

    ``explicit`` expands both states into float FockVectors and uses
    :func:`fock.inner`; ``blocks`` sums block overlaps directly, which is
    the only option when a state spans too many words.  ``auto`` picks
    explicit whenever it fits.
    """
    from .fock import inner

    same_p(a, b)
    if a.t is None or b.t is None or a.t != b.t:
        raise ValueError("oracle needs both states at the same numeric t")
    if method == "auto":
        small = a.word_count() <= 50_000 and b.word_count() <= 50_000
        method = "explicit" if small else "blocks"
    if method == "explicit":
        val = complex(inner(a.numeric_vector(), b.numeric_vector()))
    elif method == "blocks":
        val = _float_blocks_inner(a, b)
    else:
        raise ValueError(f"unknown oracle method {method!r}")
    return val.real if val.imag == 0 else val


def relative_error(approx: float | complex, exact: Scalar) -> float:
    ex = complex(exact)
    err = abs(complex(approx) - ex)
    if ex == 0:
        return err
    return err / abs(ex)


# ---------------------------------------------------------------- sweeps


@dataclass(frozen=True)
class SweepRow:
    k: int
    t: Fraction
    truncated_value: Scalar
    value: Scalar
    scaled_value: Scalar
    limit: Scalar
    abs_error: Fraction
    error_bound: Fraction


def sweep(v: PairingValue, k_max: int, k_min: int = 2, truncated: Sequence[Scalar] | None = None) -> list[SweepRow]:
    """Rows at ``t = 1 - 2**-k`` for k in [k_min, k_max].

    ``truncated`` optionally supplies an independently computed truncated
    Fock product per row; otherwise the series partial sum through degree
    64 is used.
    """
    rows = []
    c_bound = v.error_constant()
    for idx, k in enumerate(range(k_min, k_max + 1)):
        t = 1 - Fraction(1, 2**k)
        value = v.evaluate(t)
        scaled = simplify((1 - t) * value)
        diff = scaled - v.limit
        err = diff.abs2() if isinstance(diff, QComplex) else abs(Fraction(diff))
        if isinstance(diff, QComplex):
            err = Fraction(math.sqrt(err))
        trunc = truncated[idx] if truncated is not None else v.truncated(t, 64)
        rows.append(SweepRow(k, t, trunc, value, scaled, v.limit, err, c_bound * (1 - t)))
    return rows
