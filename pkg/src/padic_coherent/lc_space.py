"""Locally constant functions on Z_p and distributions acting on them.

A locally constant function is kept as a finite map from disk centres to
scalars (a linear combination of disk indicators).  Distributions are
resolution-bounded: a cascade tree of depth N can be tested against any
function whose disks have depth <= N, and asking for more is an error.
"""

from __future__ import annotations

import enum
import itertools
import json
import random
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from .padic import (
    Disk,
    PAdicPoint,
    Word,
    check_prime,
    haar_measure,
    same_p,
    words_of_length,
)
from .scalars import QComplex, Scalar, from_json_scalar, simplify


class ResolutionError(ValueError):
    """A function is finer than the distribution (or level) can resolve."""


class CascadeViolationError(ValueError):
    def __init__(self, node: Word, expected: Scalar, got: Scalar) -> None:
        self.node = node
        self.expected = expected
        self.got = got
        super().__init__(
            f"cascade violated at node [{node}]: value {expected} but children sum to {got}"
        )


def _as_word(d: Disk | Word) -> Word:
    return d.center if isinstance(d, Disk) else d


def _clean(terms: Mapping[Word, Scalar]) -> dict[Word, Scalar]:
    return {w: simplify(c) for w, c in terms.items() if c != 0}


# ---------------------------------------------------------------- D(Z_p)


@dataclass(frozen=True)
class LCFunction:
    """``sum(coeff * indicator(Disk(word)))`` over a finite set of words."""

    p: int
    terms: Mapping[Word, Scalar] = field(default_factory=dict)

    def __post_init__(self) -> None:
        check_prime(self.p)
        for w in self.terms:
            if w.p != self.p:
                raise ValueError(f"word [{w}] has p={w.p}, function has p={self.p}")
        object.__setattr__(self, "terms", _clean(self.terms))

    @classmethod
    def zero(cls, p: int) -> LCFunction:
        return cls(p, {})

    @classmethod
    def constant(cls, p: int, c: Scalar = 1) -> LCFunction:
        return cls(p, {Word((), p): c})

    @property
    def max_depth(self) -> int:
        return max((len(w) for w in self.terms), default=0)

    def __call__(self, x: PAdicPoint | Word) -> Scalar:
        """Pointwise value; a Word argument must be at least max_depth long."""
        if isinstance(x, PAdicPoint):
            x = x.prefix(self.max_depth)
        elif len(x) < self.max_depth:
            raise ResolutionError(
                f"point [{x}] has {len(x)} digits, need {self.max_depth}"
            )
        total: Scalar = Fraction(0)
        for w, c in self.terms.items():
            if w.is_prefix_of(x):
                total = total + c
        return simplify(total)

    def __add__(self, other: LCFunction) -> LCFunction:
        same_p(self, other)
        out: dict[Word, Scalar] = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out.get(w, 0) + c
        return LCFunction(self.p, out)

    def __neg__(self) -> LCFunction:
        return LCFunction(self.p, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other: LCFunction) -> LCFunction:
        return self + (-other)

    def scale(self, alpha: Scalar) -> LCFunction:
        return LCFunction(self.p, {w: alpha * c for w, c in self.terms.items()})

    def __rmul__(self, alpha: Scalar) -> LCFunction:
        return self.scale(alpha)

    def __eq__(self, other) -> bool:
        """Equality as functions on Z_p, not as term maps."""
        if not isinstance(other, LCFunction):
            return NotImplemented
        if self.p != other.p:
            return False
        level = max(self.max_depth, other.max_depth)
        return refine(self, level).terms == refine(other, level).terms

    def __hash__(self) -> int:
        return hash((self.p, frozenset(refine(self, self.max_depth).terms.items())))


def indicator(d: Disk | Word, normalized: bool = False) -> LCFunction:
    """Indicator of a disk; ``normalized`` divides by its squared L2 norm,
    i.e. multiplies by ``p**depth``."""
    w = _as_word(d)
    c = Fraction(w.p ** len(w)) if normalized else Fraction(1)
    return LCFunction(w.p, {w: c})


def refine(f: LCFunction, level: int) -> LCFunction:
    """Rewrite f over the disjoint depth-``level`` disks."""
    if level < f.max_depth:
        raise ResolutionError(f"cannot refine depth-{f.max_depth} function to level {level}")
    out: dict[Word, Scalar] = {}
    for w, c in f.terms.items():
        if len(w) == level:
            out[w] = out.get(w, 0) + c
            continue
        for tail in itertools.product(range(f.p), repeat=level - len(w)):
            u = Word._trusted(w.digits + tail, f.p)
            out[u] = out.get(u, 0) + c
    return LCFunction(f.p, out)


def l2_inner(f: LCFunction, g: LCFunction) -> Scalar:
    """``integral over Z_p of f * conj(g)`` against Haar measure, exact.

    Both functions are refined to a common level, so every cell has measure
    ``p**-level``.
    """
    p = same_p(f, g)
    level = max(f.max_depth, g.max_depth)
    rf, rg = refine(f, level).terms, refine(g, level).terms
    if len(rf) > len(rg):
        rf, rg = rg, rf
        swap = True
    else:
        swap = False
    total: Scalar = Fraction(0)
    for w, a in rf.items():
        b = rg.get(w)
        if b is None:
            continue
        total = total + (b * a.conjugate() if swap else a * b.conjugate())
    return simplify(total * Fraction(1, p**level))


# ---------------------------------------------------------------- cascades


@dataclass(frozen=True)
class CascadeTree:
    """Values on every disk of depth <= ``depth`` with each value equal to
    the sum over its p children.  Absent words carry the value 0."""

    p: int
    depth: int
    values: Mapping[Word, Scalar]

    def __post_init__(self) -> None:
        check_prime(self.p)
        if self.depth < 0:
            raise ValueError("depth must be >= 0")
        clean = {}
        for w, c in self.values.items():
            if w.p != self.p:
                raise ValueError(f"word [{w}] has p={w.p}, tree has p={self.p}")
            if len(w) > self.depth:
                raise ResolutionError(f"word [{w}] deeper than tree depth {self.depth}")
            clean[w] = simplify(c)
        object.__setattr__(self, "values", clean)

    def __getitem__(self, w: Word) -> Scalar:
        if len(w) > self.depth:
            raise ResolutionError(f"tree of depth {self.depth} cannot resolve [{w}]")
        return self.values.get(w, Fraction(0))

    @property
    def root(self) -> Scalar:
        return self[Word((), self.p)]

    def violations(self) -> list[tuple[Word, Scalar, Scalar]]:
        """``(node, value, sum of children)`` for every failing node."""
        nodes = {w for w in self.values if len(w) < self.depth}
        nodes.update(w.parent() for w in self.values if len(w) > 0)
        bad = []
        for w in sorted(nodes, key=lambda u: u.sort_key):
            s: Scalar = Fraction(0)
            for i in range(self.p):
                s = s + self.values.get(Word._trusted(w.digits + (i,), self.p), 0)
            if s != self[w]:
                bad.append((w, self[w], simplify(s)))
        return bad

    def validate(self) -> CascadeTree:
        bad = self.violations()
        if bad:
            raise CascadeViolationError(*bad[0])
        return self

    def is_valid(self) -> bool:
        return not self.violations()

    def with_value(self, w: Word, value: Scalar) -> CascadeTree:
        """Copy with one node overwritten; the result is not re-validated."""
        vals = dict(self.values)
        vals[w] = value
        return CascadeTree(self.p, self.depth, vals)

    @classmethod
    def from_leaves(cls, p: int, depth: int, leaves: Mapping[Word, Scalar]) -> CascadeTree:
        """Extend an assignment on depth-``depth`` disks upward by summation.

        This is the constructive half of surjectivity: any level-N
        assignment is the restriction of exactly one cascade of depth N.
        """
        vals: dict[Word, Scalar] = {}
        for w, c in leaves.items():
            if len(w) != depth or w.p != p:
                raise ValueError(f"leaf [{w}] is not a depth-{depth} word for p={p}")
            vals[w] = c
        level = dict(vals)
        for _ in range(depth):
            up: dict[Word, Scalar] = defaultdict(lambda: Fraction(0))
            for w, c in level.items():
                up[w.parent()] = up[w.parent()] + c
            vals.update(up)
            level = up
        if depth > 0 and not leaves:
            vals[Word((), p)] = Fraction(0)
        return cls(p, depth, vals)

    @classmethod
    def uniform(cls, p: int, depth: int, root: Scalar = 1) -> CascadeTree:
        """The Haar cascade ``root * p**-|I|``."""
        vals = {}
        for n in range(depth + 1):
            for w in words_of_length(p, n):
                vals[w] = root * Fraction(1, p**n)
        return cls(p, depth, vals)

    # JSON: {p, depth, values: [{word, re_num, re_den, im_num, im_den}]}
    def to_json(self) -> dict:
        rows = []
        for w in sorted(self.values, key=lambda u: u.sort_key):
            v = self.values[w]
            re, im = (v.re, v.im) if isinstance(v, QComplex) else (Fraction(v), Fraction(0))
            rows.append(
                {
                    "word": str(w),
                    "re_num": re.numerator,
                    "re_den": re.denominator,
                    "im_num": im.numerator,
                    "im_den": im.denominator,
                }
            )
        return {"p": self.p, "depth": self.depth, "values": rows}

    @classmethod
    def from_json(cls, obj: Mapping) -> CascadeTree:
        """Parse and re-validate; raises CascadeViolationError on bad trees."""
        for key in ("p", "depth", "values"):
            if key not in obj:
                raise ValueError(f"cascade JSON missing field {key!r}")
        p, depth = obj["p"], obj["depth"]
        if not isinstance(depth, int) or isinstance(depth, bool):
            raise ValueError(f"field 'depth' must be an integer, got {depth!r}")
        vals: dict[Word, Scalar] = {}
        for i, row in enumerate(obj["values"]):
            try:
                w = Word.parse(row["word"], p)
                re = Fraction(int(row["re_num"]), int(row["re_den"]))
                im = Fraction(int(row.get("im_num", 0)), int(row.get("im_den", 1)))
            except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
                raise ValueError(f"values[{i}]: {exc}") from None
            if w in vals:
                raise ValueError(f"values[{i}]: duplicate word [{w}]")
            vals[w] = simplify(QComplex(re, im))
        return cls(p, depth, vals).validate()

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1)

    @classmethod
    def loads(cls, text: str) -> CascadeTree:
        return cls.from_json(json.loads(text))


def _random_fraction(rng: random.Random, bound: int) -> Fraction:
    return Fraction(rng.randint(-bound, bound), rng.randint(1, bound))


def random_cascade(
    p: int,
    depth: int,
    seed: int,
    *,
    complex_values: bool = False,
    dense_depth: int | None = None,
    bound: int = 9,
) -> CascadeTree:
    """Seeded random cascade built top-down.

    Down to ``dense_depth`` (default: the whole tree) each node gets p - 1
    freely drawn children and a last child fixing the sum.  Below it, every
    node hands its whole value to one randomly chosen child, which keeps
    deep trees finitely supported.
    """
    check_prime(p)
    if depth < 0:
        raise ValueError("depth must be >= 0")
    dense = depth if dense_depth is None else min(dense_depth, depth)
    rng = random.Random(seed)

    def draw() -> Scalar:
        re = _random_fraction(rng, bound)
        if complex_values:
            return simplify(QComplex(re, _random_fraction(rng, bound)))
        return re

    root = draw()
    while root == 0:
        root = draw()
    vals: dict[Word, Scalar] = {Word((), p): root}
    level = [Word((), p)]
    for n in range(depth):
        nxt = []
        for w in level:
            v = vals[w]
            if n < dense:
                kids = [draw() for _ in range(p - 1)]
                s: Scalar = Fraction(0)
                for k in kids:
                    s = s + k
                kids.append(simplify(v - s))
                for i, k in enumerate(kids):
                    u = Word._trusted(w.digits + (i,), p)
                    vals[u] = k
                    nxt.append(u)
            elif v != 0:
                u = Word._trusted(w.digits + (rng.randrange(p),), p)
                vals[u] = v
                nxt.append(u)
        level = nxt
    return CascadeTree(p, depth, vals)


# ---------------------------------------------------------------- D'(Z_p)


class DistributionKind(enum.Enum):
    CASCADE = "cascade"
    DELTA = "delta"
    HAAR = "haar"


@dataclass(frozen=True)
class Distribution:
    kind: DistributionKind
    p: int
    tree: CascadeTree | None = None
    point: PAdicPoint | None = None

    @classmethod
    def cascade(cls, tree: CascadeTree) -> Distribution:
        return cls(DistributionKind.CASCADE, tree.p, tree=tree)

    @classmethod
    def delta(cls, x: PAdicPoint) -> Distribution:
        return cls(DistributionKind.DELTA, x.p, point=x)

    @classmethod
    def haar(cls, p: int) -> Distribution:
        return cls(DistributionKind.HAAR, check_prime(p))

    def on_disk(self, w: Word) -> Scalar:
        """Value of the distribution on the indicator of ``Disk(w)``."""
        if w.p != self.p:
            same_p(w, self)
        if self.kind is DistributionKind.CASCADE:
            return self.tree[w]
        if self.kind is DistributionKind.DELTA:
            return Fraction(1) if self.point.prefix(len(w)) == w else Fraction(0)
        return haar_measure(Disk(w))


def act(d: Distribution, f: LCFunction) -> Scalar:
    """Bilinear pairing ``<d, f>``; no complex conjugation is applied."""
    same_p(d, f)
    if d.kind is DistributionKind.CASCADE and f.max_depth > d.tree.depth:
        raise ResolutionError(
            f"function needs depth {f.max_depth}, cascade only resolves {d.tree.depth}"
        )
    total: Scalar = Fraction(0)
    for w, c in f.terms.items():
        total = total + c * d.on_disk(w)
    return simplify(total)


def indicator_sum(words: Iterable[Word], coeffs: Iterable[Scalar]) -> LCFunction:
    words = list(words)
    if not words:
        raise ValueError("need at least one word")
    out: dict[Word, Scalar] = {}
    for w, c in zip(words, coeffs):
        out[w] = out.get(w, 0) + c
    return LCFunction(words[0].p, out)
