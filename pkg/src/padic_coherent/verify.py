"""Verification suites behind ``verify``.

Each suite runs a family of exact checks and returns a :class:`SuiteResult`
holding counts and the first counterexample.  Everything is deterministic
in ``(p, depth, seed)``.
"""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from . import fock
from .coherent import (
    coherent_from_cascade,
    degree_series,
    eigen_residual,
    eigen_residual_by_degree,
    indicator_state,
)
from .fock import FockVector
from .lc_space import CascadeTree, act, indicator, l2_inner, random_cascade
from .limits import (
    disk_value,
    expected_indicator_limit,
    numeric_oracle,
    pairing_coherent,
    pairing_delta,
    pairing_indicators,
    phi_coherent,
    phi_delta,
    phi_indicator,
    regularized_limit,
    relative_error,
)
from .padic import (
    Disk,
    DiskRelation,
    PAdicPoint,
    Word,
    disk_relation,
    haar_measure,
    padic_norm_total,
    words_of_length,
    words_up_to,
)
from .scalars import QComplex

SUITES = ("padic", "fock", "lemma1", "lemma2", "lemma3", "theorem", "eigen")


@dataclass
class SuiteResult:
    name: str
    unit: str
    checked: int = 0
    passed: int = 0
    failure: dict | None = None
    seconds: float = 0.0
    notes: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.failure is None and self.passed == self.checked

    def record(self, good: bool, **details) -> bool:
        self.checked += 1
        if good:
            self.passed += 1
        elif self.failure is None:
            self.failure = {k: str(v) for k, v in details.items()}
        return good

    def summary(self) -> str:
        status = "OK" if self.ok else "FAIL"
        return f"{self.name}: {self.passed}/{self.checked} {self.unit} {status}"

    def to_json(self) -> dict:
        return {
            "suite": self.name,
            "unit": self.unit,
            "checked": self.checked,
            "passed": self.passed,
            "ok": self.ok,
            "failure": self.failure,
            "notes": self.notes,
        }


def _timed(fn: Callable[..., SuiteResult]) -> Callable[..., SuiteResult]:
    def wrapper(*args, **kwargs) -> SuiteResult:
        start = time.perf_counter()
        res = fn(*args, **kwargs)
        res.seconds = time.perf_counter() - start
        return res

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


def tree_seeds(seed: int, count: int) -> list[int]:
    rng = random.Random(seed)
    return [rng.getrandbits(63) for _ in range(count)]


def strided_pairs(words: list[Word], max_pairs: int) -> list[tuple[Word, Word]]:
    """All ordered pairs in lexicographic order, or an evenly strided
    subsequence of them when there are more than ``max_pairs``."""
    w = len(words)
    total = w * w
    if total <= max_pairs:
        return [(a, b) for a in words for b in words]
    stride = -(-total // max_pairs)
    while math.gcd(stride, w) != 1:
        stride += 1
    return [(words[n // w], words[n % w]) for n in range(0, total, stride)]


# ---------------------------------------------------------------- p-adic


def random_rational(rng: random.Random, p: int) -> Fraction:
    num = rng.randint(-50, 50) * p ** rng.randint(0, 4)
    den = rng.randint(1, 50) * p ** rng.randint(0, 3)
    return Fraction(num, den)


def residues(w: Word, level: int) -> frozenset[int]:
    step = w.p ** len(w)
    return frozenset(w.value + step * k for k in range(w.p ** (level - len(w))))


@_timed
def suite_padic(p: int, depth: int = 6, seed: int = 0, triples: int = 10_000, max_pairs: int = 20_000) -> SuiteResult:
    """Strong triangle inequality, norm multiplicativity, disk trichotomy
    against residue sets, and measure additivity."""
    res = SuiteResult("padic", "checks")
    rng = random.Random(seed)
    for _ in range(triples):
        x, y, z = (random_rational(rng, p) for _ in range(3))
        lhs = padic_norm_total(x - y, p)
        rhs = max(padic_norm_total(x - z, p), padic_norm_total(z - y, p))
        res.record(lhs <= rhs, check="strong_triangle", x=x, y=y, z=z, expected=f"<= {rhs}", got=lhs)
        prod = padic_norm_total(x * y, p)
        res.record(
            prod == padic_norm_total(x, p) * padic_norm_total(y, p),
            check="multiplicativity", x=x, y=y, got=prod,
        )

    level = depth
    while level > 0 and sum(p**k for k in range(level + 1)) ** 2 > max_pairs:
        level -= 1
    disks = words_up_to(p, level)
    sets = {w: residues(w, level) for w in disks}
    for a in disks:
        for b in disks:
            sa, sb = sets[a], sets[b]
            if sa == sb:
                oracle = DiskRelation.EQUAL
            elif sb < sa:
                oracle = DiskRelation.A_CONTAINS_B
            elif sa < sb:
                oracle = DiskRelation.B_CONTAINS_A
            elif not sa & sb:
                oracle = DiskRelation.DISJOINT
            else:
                oracle = None  # partial overlap: must never happen
            got = disk_relation(Disk(a), Disk(b))
            res.record(got is oracle, check="trichotomy", I=a, J=b, expected=oracle, got=got)
    res.notes.append(f"trichotomy exhaustive to depth {level} mod p^{level}")

    add_level = depth
    while add_level > 0 and p**add_level > 100_000:
        add_level -= 1
    for w in words_up_to(p, add_level):
        d = Disk(w)
        kids = sum((haar_measure(c) for c in d.children()), Fraction(0))
        res.record(kids == haar_measure(d), check="additivity", I=w, expected=haar_measure(d), got=kids)
    return res


# ---------------------------------------------------------------- Fock


def random_vector(rng: random.Random, p: int, max_len: int, size: int = 8, complex_values: bool = False) -> FockVector:
    coeffs = {}
    for _ in range(rng.randint(1, size)):
        n = rng.randint(0, max_len)
        w = Word(tuple(rng.randrange(p) for _ in range(n)), p)
        c = Fraction(rng.randint(-9, 9), rng.randint(1, 9))
        if complex_values:
            c = QComplex(c, Fraction(rng.randint(-9, 9), rng.randint(1, 9)))
        coeffs[w] = c
    return FockVector(p, coeffs)


@_timed
def suite_fock(p: int, depth: int = 5, seed: int = 0, vectors: int = 100) -> SuiteResult:
    """``A_i A†_j = delta_ij``, adjointness and isometry on random vectors."""
    res = SuiteResult("fock", "vectors")
    rng = random.Random(seed)
    for k in range(vectors):
        v = random_vector(rng, p, depth, complex_values=k % 2 == 1)
        w = random_vector(rng, p, depth, complex_values=k % 3 == 0)
        problem = None
        for i in range(p):
            ci = fock.create(i, v)
            for j in range(p):
                want = v if i == j else FockVector.zero(p)
                if problem is None and fock.annihilate(j, ci) != want:
                    problem = {"check": "A_j A+_i", "i": i, "j": j}
            lhs, rhs = fock.inner(ci, w), fock.inner(v, fock.annihilate(i, w))
            if problem is None and lhs != rhs:
                problem = {"check": "adjoint", "i": i, "expected": rhs, "got": lhs}
            if problem is None and fock.inner(ci, ci) != fock.inner(v, v):
                problem = {"check": "isometry", "i": i}
        res.record(problem is None, vector=k, **(problem or {}))
    # free relations: A†_0 A_0 is not the identity on the vacuum
    omega = FockVector.vacuum(p)
    witness = fock.create(0, fock.annihilate(0, omega))
    res.record(witness != omega, check="non-CCR witness", got=witness.dump())
    return res


# ---------------------------------------------------------------- lemmas


@_timed
def suite_lemma1(p: int, depth: int = 6, seed: int = 0, max_pairs: int = 100_000) -> SuiteResult:
    """Regularized limit of ``(X_I, X_J)`` against min-formula and L2."""
    res = SuiteResult("lemma1", "pairs")
    words = words_up_to(p, depth)
    phi = {w: phi_indicator(w) for w in words}
    for a, b in strided_pairs(words, max_pairs):
        lim = regularized_limit(pairing_indicators(a, b))
        expected = expected_indicator_limit(a, b)
        l2 = l2_inner(phi[a], phi[b])
        res.record(lim == expected == l2, I=a, J=b, expected=expected, got=lim, l2=l2)
    return res


def eventually_periodic_points(p: int, max_len: int = 4) -> list[PAdicPoint]:
    """Distinct points ``pre + period*`` with ``|pre| + |period| <= max_len``."""
    seen: dict[Fraction, PAdicPoint] = {}
    for total in range(max_len + 1):
        for a in range(total + 1):
            b = total - a
            for pre in words_of_length(p, a):
                for per in words_of_length(p, b):
                    x = PAdicPoint(pre, per)
                    seen.setdefault(x.to_rational(), x)
    return list(seen.values())


@_timed
def suite_lemma2(p: int, depth: int = 5, seed: int = 0, max_point_len: int = 4) -> SuiteResult:
    """Delta-path limits against ``p**|J| [x in D(J)]``.

    Membership is decided independently through the p-adic norm of
    ``x - J`` as rationals.
    """
    res = SuiteResult("lemma2", "pairs")
    words = words_up_to(p, depth)
    for x in eventually_periodic_points(p, max_point_len):
        xr = x.to_rational()
        dist = phi_delta(x)
        for j in words:
            inside = padic_norm_total(xr - j.value, p) <= Fraction(1, p ** len(j))
            expected = Fraction(p ** len(j)) if inside else Fraction(0)
            lim = regularized_limit(pairing_delta(x, j))
            acted = act(dist, phi_indicator(j))
            res.record(lim == expected == acted, x=x, J=j, expected=expected, got=lim, act=acted)
    return res


@_timed
def suite_lemma3(
    p: int, depth: int = 5, seed: int = 0, trees: int = 10, word_depth: int = 3, t: Fraction = Fraction(1, 3)
) -> SuiteResult:
    """``(Psi, X_I)``: closed form vs explicit degree series, the 1/p
    level recursion, and the geometric tail bound at a numeric t."""
    res = SuiteResult("lemma3", "pairs")
    for s in tree_seeds(seed, trees):
        tree = random_cascade(p, depth, s)
        psi = coherent_from_cascade(tree, t, depth)
        for i in words_up_to(p, min(word_depth, depth)):
            v = pairing_coherent(tree, i)
            xi = indicator_state(i, t, depth)
            series = degree_series(psi, xi)
            same = all(series[n] == v.coefficient(n) for n in range(depth + 1))
            raw = [series[n] / p**n for n in range(depth + 1)]
            recursion = all(raw[n] == raw[n - 1] / p for n in range(len(i) + 1, depth + 1))
            oracle = numeric_oracle(psi, xi)
            trunc = v.truncated(t, depth)
            close = relative_error(oracle, trunc) <= 1e-9
            gap = abs(complex(oracle) - complex(v.evaluate(t)))
            bound = abs(complex(v.tail_bound(t, depth))) + 1e-9 * abs(complex(v.evaluate(t))) + 1e-12
            res.record(
                same and recursion and close and gap <= bound,
                tree_seed=s, I=i, expected=v.to_json(), got=series,
            )
    return res


@_timed
def suite_theorem(p: int, depth: int = 5, seed: int = 0, trees: int = 100) -> SuiteResult:
    """Round trip ``mu(D_I) * limit (Psi, X_I) = Psi_I`` on every node,
    plus a constructive surjectivity check per tree."""
    res = SuiteResult("theorem", "trees")
    words = words_up_to(p, depth)
    leaves = list(words_of_length(p, depth))
    for s in tree_seeds(seed, trees):
        tree = random_cascade(p, depth, s)
        dist = phi_coherent(tree)
        good, bad = True, None
        for i in words:
            got = disk_value(tree, i)
            if got != tree[i] or act(dist, indicator(i)) != tree[i]:
                good, bad = False, (i, tree[i], got)
                break
        # any depth-N assignment comes from a cascade acting as assigned
        rng = random.Random(s)
        assign = {w: Fraction(rng.randint(-9, 9), rng.randint(1, 9)) for w in leaves}
        ext = CascadeTree.from_leaves(p, depth, assign)
        ext_dist = phi_coherent(ext)
        if not ext.is_valid() or any(act(ext_dist, indicator(w)) != c for w, c in assign.items()):
            good, bad = False, ("surjectivity", None, None)
        if bad:
            res.record(False, tree_seed=s, I=bad[0], expected=bad[1], got=bad[2])
        else:
            res.record(good)
    return res


@_timed
def suite_eigen(p: int, depth: int = 5, seed: int = 0, trees: int = 50, t: Fraction = Fraction(1, 2)) -> SuiteResult:
    """``A Psi = lambda Psi`` below the truncation degree, and a one-node
    violation of size eps at the root showing up as ``p t eps**2``."""
    res = SuiteResult("eigen", "states")
    for s in tree_seeds(seed, trees):
        tree = random_cascade(p, depth, s)
        r = eigen_residual(coherent_from_cascade(tree, t, depth))
        eps = Fraction(1, 1 + s % 7)
        root = Word((), p)
        broken = tree.with_value(root, tree[root] + eps)
        rb = eigen_residual_by_degree(coherent_from_cascade(broken, t, depth))
        expected = [p * t * eps * eps] + [Fraction(0)] * (depth - 1)
        res.record(r == 0 and (depth == 0 or rb == expected), tree_seed=s, expected=expected, got=(r, rb))
    return res


RUNNERS: dict[str, Callable[..., SuiteResult]] = {
    "padic": suite_padic,
    "fock": suite_fock,
    "lemma1": suite_lemma1,
    "lemma2": suite_lemma2,
    "lemma3": suite_lemma3,
    "theorem": suite_theorem,
    "eigen": suite_eigen,
}


def run_suite(name: str, p: int, depth: int, seed: int) -> SuiteResult:
    try:
        runner = RUNNERS[name]
    except KeyError:
        raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES)} or all") from None
    return runner(p, depth=depth, seed=seed)
