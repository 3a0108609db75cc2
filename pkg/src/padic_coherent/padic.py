"""Words over {0..p-1}, p-adic norms, disks in Z_p and their Haar measure.

A word ``(i_0, ..., i_{k-1})`` is read little-endian: ``i_0`` is the units
digit of the p-adic integer ``sum(i_j * p**j)``.  Appending a digit on the
right moves to a child disk, so "is a prefix of" and "contains" coincide.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Sequence


class PrimeError(ValueError):
    pass


class MismatchedPrimeError(ValueError):
    pass


@lru_cache(maxsize=None)
def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def check_prime(p: int) -> int:
    if not isinstance(p, int) or isinstance(p, bool) or not is_prime(p):
        raise PrimeError(f"p must be a prime, got {p!r}")
    return p


def same_p(a, b) -> int:
    if a.p != b.p:
        raise MismatchedPrimeError(f"mixing p={a.p} with p={b.p}")
    return a.p


# ---------------------------------------------------------------- norms


def valuation(x: int | Fraction, p: int) -> int:
    """Exact p-exponent gamma of a nonzero rational ``p**gamma * m/n``."""
    check_prime(p)
    x = Fraction(x)
    if x == 0:
        raise ValueError("valuation of 0 is infinite")
    num, den = x.numerator, x.denominator
    gamma = 0
    while num % p == 0:
        num //= p
        gamma += 1
    while den % p == 0:
        den //= p
        gamma -= 1
    return gamma


def padic_norm(x: int | Fraction, p: int) -> Fraction:
    """``||x||_p = p**(-gamma)`` for nonzero rational x."""
    return Fraction(p) ** (-valuation(x, p))


def padic_norm_total(x: int | Fraction, p: int) -> Fraction:
    """Like :func:`padic_norm` but with ``||0||_p = 0``."""
    check_prime(p)
    if Fraction(x) == 0:
        return Fraction(0)
    return padic_norm(x, p)


# ---------------------------------------------------------------- words


@dataclass(frozen=True, order=False)
class Word:
    digits: tuple[int, ...]
    p: int

    def __post_init__(self) -> None:
        check_prime(self.p)
        digits = tuple(self.digits)
        object.__setattr__(self, "digits", digits)
        for d in digits:
            if not isinstance(d, int) or not 0 <= d < self.p:
                raise ValueError(f"digit {d!r} out of range for p={self.p}")

    @classmethod
    def _trusted(cls, digits: tuple[int, ...], p: int) -> Word:
        """Skip validation; only for digits derived from valid words."""
        w = object.__new__(cls)
        object.__setattr__(w, "digits", digits)
        object.__setattr__(w, "p", p)
        return w

    @classmethod
    def empty(cls, p: int) -> Word:
        return cls((), p)

    @classmethod
    def parse(cls, text: str, p: int) -> Word:
        """Comma-separated little-endian digits; ``""`` is the empty word."""
        s = text.strip()
        if not s:
            return cls((), p)
        try:
            digits = tuple(int(tok) for tok in s.split(","))
        except ValueError:
            raise ValueError(f"malformed word {text!r}") from None
        return cls(digits, p)

    def __str__(self) -> str:
        return ",".join(str(d) for d in self.digits)

    def __len__(self) -> int:
        return len(self.digits)

    def __iter__(self) -> Iterator[int]:
        return iter(self.digits)

    def __getitem__(self, i):
        return self.digits[i]

    @property
    def sort_key(self) -> tuple[int, tuple[int, ...]]:
        return (len(self.digits), self.digits)

    def __lt__(self, other: Word) -> bool:
        same_p(self, other)
        return self.sort_key < other.sort_key

    def child(self, i: int) -> Word:
        return Word(self.digits + (i,), self.p)

    def children(self) -> list[Word]:
        return [Word._trusted(self.digits + (i,), self.p) for i in range(self.p)]

    def parent(self) -> Word:
        if not self.digits:
            raise ValueError("the empty word has no parent")
        return Word._trusted(self.digits[:-1], self.p)

    def prefix(self, n: int) -> Word:
        if not 0 <= n <= len(self.digits):
            raise ValueError(f"prefix length {n} outside [0, {len(self.digits)}]")
        return Word._trusted(self.digits[:n], self.p)

    def prefixes(self) -> list[Word]:
        """All prefixes, shortest (empty) first, ending with the word itself."""
        return [Word._trusted(self.digits[:n], self.p) for n in range(len(self.digits) + 1)]

    def is_prefix_of(self, other: Word) -> bool:
        same_p(self, other)
        n = len(self.digits)
        return n <= len(other.digits) and other.digits[:n] == self.digits

    def concat(self, other: Word | Sequence[int]) -> Word:
        tail = other.digits if isinstance(other, Word) else tuple(other)
        if isinstance(other, Word):
            same_p(self, other)
        return Word(self.digits + tail, self.p)

    @property
    def value(self) -> int:
        """The p-adic integer ``sum(i_j * p**j)`` (an ordinary integer)."""
        v = 0
        for d in reversed(self.digits):
            v = v * self.p + d
        return v


def words_of_length(p: int, n: int) -> Iterator[Word]:
    """All ``p**n`` words of length n in lexicographic order."""
    check_prime(p)
    for digits in itertools.product(range(p), repeat=n):
        yield Word._trusted(digits, p)


def words_up_to(p: int, max_len: int) -> list[Word]:
    """Every word of length <= max_len, shortest first."""
    out: list[Word] = []
    for n in range(max_len + 1):
        out.extend(words_of_length(p, n))
    return out


def longest_common_prefix(a: Word, b: Word) -> Word:
    same_p(a, b)
    n = 0
    for x, y in zip(a.digits, b.digits):
        if x != y:
            break
        n += 1
    return Word._trusted(a.digits[:n], a.p)


# ---------------------------------------------------------------- disks


class DiskRelation(enum.Enum):
    EQUAL = "equal"
    A_CONTAINS_B = "a_contains_b"
    B_CONTAINS_A = "b_contains_a"
    DISJOINT = "disjoint"


@dataclass(frozen=True)
class Disk:
    """The ball ``D(center, p**-len(center))`` inside Z_p."""

    center: Word

    @property
    def p(self) -> int:
        return self.center.p

    @property
    def depth(self) -> int:
        return len(self.center)

    @property
    def radius(self) -> Fraction:
        return Fraction(self.p) ** (-self.depth)

    def children(self) -> list[Disk]:
        return [Disk(w) for w in self.center.children()]

    def contains_point(self, x: PAdicPoint) -> bool:
        same_p(self, x)
        return x.prefix(self.depth) == self.center

    def __str__(self) -> str:
        return f"D({self.center})"


def disk_relation(a: Disk, b: Disk) -> DiskRelation:
    same_p(a, b)
    if a.center == b.center:
        return DiskRelation.EQUAL
    if a.center.is_prefix_of(b.center):
        return DiskRelation.A_CONTAINS_B
    if b.center.is_prefix_of(a.center):
        return DiskRelation.B_CONTAINS_A
    return DiskRelation.DISJOINT


def haar_measure(d: Disk) -> Fraction:
    """Haar measure normalised by ``mu(Z_p) = 1``."""
    return Fraction(1, d.p ** d.depth)


# ---------------------------------------------------------------- points


@dataclass(frozen=True)
class PAdicPoint:
    """Eventually periodic digit stream ``preperiod + period*`` in Z_p.

    An empty period pads the stream with zeros.
    """

    preperiod: Word
    period: Word

    def __post_init__(self) -> None:
        same_p(self.preperiod, self.period)

    @property
    def p(self) -> int:
        return self.preperiod.p

    @classmethod
    def parse(cls, text: str, p: int) -> PAdicPoint:
        """``"1,0(0,1)"``: digits 1,0 then 0,1 repeated.  ``"1,0"`` pads zeros."""
        s = text.strip()
        if "(" in s:
            if not s.endswith(")") or s.count("(") != 1:
                raise ValueError(f"malformed p-adic point {text!r}")
            head, tail = s[:-1].split("(")
            head = head.rstrip(",")
            return cls(Word.parse(head, p), Word.parse(tail, p))
        return cls(Word.parse(s, p), Word((), p))

    @classmethod
    def from_rational(cls, x: int | Fraction, p: int) -> PAdicPoint:
        """Digit expansion of a rational with ``||x||_p <= 1``."""
        check_prime(p)
        x = Fraction(x)
        if x != 0 and valuation(x, p) < 0:
            raise ValueError(f"{x} is not a p-adic integer for p={p}")
        seen: dict[Fraction, int] = {}
        digits: list[int] = []
        while x not in seen:
            seen[x] = len(digits)
            d = (x.numerator * pow(x.denominator, -1, p)) % p
            digits.append(d)
            x = (x - d) / p
        start = seen[x]
        pre, per = digits[:start], digits[start:]
        if per == [0]:
            per = []
        return cls(Word(tuple(pre), p), Word(tuple(per), p))

    def __str__(self) -> str:
        if len(self.period) == 0:
            return str(self.preperiod)
        return f"{self.preperiod}({self.period})"

    def digit_at(self, n: int) -> int:
        if n < 0:
            raise ValueError("digit index must be >= 0")
        k = len(self.preperiod)
        if n < k:
            return self.preperiod.digits[n]
        if len(self.period) == 0:
            return 0
        return self.period.digits[(n - k) % len(self.period)]

    def prefix(self, n: int) -> Word:
        return Word(tuple(self.digit_at(j) for j in range(n)), self.p)

    def to_rational(self) -> Fraction:
        """The rational number this digit stream sums to in Q_p."""
        p = self.p
        head = Fraction(self.preperiod.value)
        if len(self.period) == 0:
            return head
        cycle = Fraction(self.period.value, 1 - p ** len(self.period))
        return head + p ** len(self.preperiod) * cycle
