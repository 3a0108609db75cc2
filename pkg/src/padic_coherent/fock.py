"""Free (Boltzmannian) Fock space over p letters.

The one-particle space is spanned by an orthonormal frame ``e_0..e_{p-1}``,
so a word is a complete label for a basis vector: word ``(i_0..i_{k-1})``
stands for ``A†_{i_{k-1}} ... A†_{i_0} Ω``.  Vectors are sparse maps from
words to coefficients; any number type with ``conjugate()`` works, which
lets the same code run exactly (Fraction, QComplex) and in floating point.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping

from .padic import Word, check_prime, same_p
from .scalars import QComplex, Scalar, simplify


@dataclass(frozen=True)
class FockVector:
    p: int
    coeffs: Mapping[Word, Scalar] = field(default_factory=dict)

    def __post_init__(self) -> None:
        check_prime(self.p)
        clean = {}
        for w, c in self.coeffs.items():
            if w.p != self.p:
                raise ValueError(f"word [{w}] has p={w.p}, vector has p={self.p}")
            if c != 0:
                clean[w] = simplify(c) if isinstance(c, QComplex) else c
        object.__setattr__(self, "coeffs", clean)

    @classmethod
    def vacuum(cls, p: int, c: Scalar = 1) -> FockVector:
        return cls(p, {Word((), p): c})

    @classmethod
    def basis(cls, w: Word, c: Scalar = 1) -> FockVector:
        return cls(w.p, {w: c})

    @classmethod
    def zero(cls, p: int) -> FockVector:
        return cls(p, {})

    @property
    def max_degree(self) -> int:
        return max((len(w) for w in self.coeffs), default=0)

    def __getitem__(self, w: Word) -> Scalar:
        return self.coeffs.get(w, 0)

    def __len__(self) -> int:
        return len(self.coeffs)

    def __add__(self, other: FockVector) -> FockVector:
        same_p(self, other)
        out = dict(self.coeffs)
        for w, c in other.coeffs.items():
            out[w] = out.get(w, 0) + c
        return FockVector(self.p, out)

    def __neg__(self) -> FockVector:
        return FockVector(self.p, {w: -c for w, c in self.coeffs.items()})

    def __sub__(self, other: FockVector) -> FockVector:
        return self + (-other)

    def scale(self, alpha: Scalar) -> FockVector:
        return FockVector(self.p, {w: alpha * c for w, c in self.coeffs.items()})

    def __rmul__(self, alpha: Scalar) -> FockVector:
        return self.scale(alpha)

    def map_coeffs(self, fn: Callable[[Word, Scalar], Scalar]) -> FockVector:
        return FockVector(self.p, {w: fn(w, c) for w, c in self.coeffs.items()})

    def project(self, max_degree: int) -> FockVector:
        """Drop every component of degree above ``max_degree``."""
        return FockVector(self.p, {w: c for w, c in self.coeffs.items() if len(w) <= max_degree})

    def degree_part(self, n: int) -> FockVector:
        return FockVector(self.p, {w: c for w, c in self.coeffs.items() if len(w) == n})

    def dump(self) -> str:
        """``[word] -> re=.. im=..`` lines sorted by degree then word."""
        lines = []
        for w in sorted(self.coeffs, key=lambda u: u.sort_key):
            c = self.coeffs[w]
            if isinstance(c, QComplex):
                re, im = c.re, c.im
            elif isinstance(c, complex):
                re, im = c.real, c.imag
            else:
                re, im = c, 0
            lines.append(f"[{w}] -> re={re} im={im}")
        return "\n".join(lines)


def _check_digit(i: int, p: int) -> None:
    if not isinstance(i, int) or not 0 <= i < p:
        raise ValueError(f"digit {i!r} out of range for p={p}")


def create(i: int, v: FockVector) -> FockVector:
    """``A†_i``: basis word I goes to Ii."""
    _check_digit(i, v.p)
    return FockVector(v.p, {Word._trusted(w.digits + (i,), v.p): c for w, c in v.coeffs.items()})


def annihilate(i: int, v: FockVector) -> FockVector:
    """``A_i``: basis word Ij goes to ``delta_ij * I``; the vacuum goes to 0."""
    _check_digit(i, v.p)
    out = {}
    for w, c in v.coeffs.items():
        if w.digits and w.digits[-1] == i:
            out[Word._trusted(w.digits[:-1], v.p)] = c
    return FockVector(v.p, out)


def annihilation_sum(v: FockVector) -> FockVector:
    """``A = sum_i A_i``: strips the last digit of every basis word."""
    out: dict[Word, Scalar] = {}
    for w, c in v.coeffs.items():
        if w.digits:
            u = Word._trusted(w.digits[:-1], v.p)
            out[u] = out.get(u, 0) + c
    return FockVector(v.p, out)


def creation_sum(v: FockVector) -> FockVector:
    """``sum_i A†_i``."""
    out: dict[Word, Scalar] = {}
    for w, c in v.coeffs.items():
        for i in range(v.p):
            out[Word._trusted(w.digits + (i,), v.p)] = c
    return FockVector(v.p, out)


def inner(v: FockVector, w: FockVector) -> Scalar:
    """``sum_I v_I * conj(w_I)``; conjugate-linear in the second slot."""
    same_p(v, w)
    a, b = v.coeffs, w.coeffs
    total: Scalar = 0
    if len(a) <= len(b):
        for k, c in a.items():
            d = b.get(k)
            if d is not None:
                total = total + c * d.conjugate()
    else:
        for k, d in b.items():
            c = a.get(k)
            if c is not None:
                total = total + c * d.conjugate()
    if isinstance(total, int):
        return Fraction(total)
    return simplify(total) if isinstance(total, QComplex) else total
