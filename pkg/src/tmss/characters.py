"""Exact evaluation of self-similar characters.

A character value is computed by closing the element under the
decomposition recursion

    q * chi(s) = sum over the q x q entries (i, j) of k(i, j) * chi(phi(s)_{i,j})

into finitely many scaling classes, attaching base values where the axioms
pin them (zero maps to 0, scalars map to 1, and for the spread kernel every
single monomial maps to 1), and solving the resulting square linear system
exactly over the rationals.  Group words follow the same scheme through
their wreath recursion with

    q * chi(w) = sum over strands a of k(a, perm(a)) * chi(section_a(w)).

No floating point is used anywhere in this module.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from .algebra import AlgebraElement, omega_generator, sigma
from .group import WreathRecursion
from .verdict import Unknown
from .words import Word, free_reduce, power as word_power


class SingularSystemError(ValueError):
    """The dependency system has no unique solution."""


class ClassExplosionError(RuntimeError):
    """Closure exceeded the class cap; carries the partial class count."""

    def __init__(self, message: str, classes_seen: int):
        super().__init__(message)
        self.classes_seen = classes_seen


class ExperimentalModeError(ValueError):
    """Raised when the unit-embedding mode is pushed past base cases."""


# -- exact value rendering ---------------------------------------------------


def q_power_denominator(value: Fraction, q: int) -> int | None:
    """The k with denominator q^k, or None when there is no such k."""
    den = value.denominator
    k = 0
    while den > 1:
        if den % q:
            return None
        den //= q
        k += 1
    return k


def render_exact(value: Fraction, q: int) -> str:
    k = q_power_denominator(value, q)
    if k is None:
        return f"{value.numerator}/{value.denominator}"
    if k == 0:
        return str(value.numerator)
    return f"{value.numerator}/{q}^{k}"


def exact_json(value: Fraction, q: int, classes_used: int, depth: int) -> dict:
    return {
        "value": render_exact(value, q),
        "num": value.numerator,
        "den": value.denominator,
        "classes_used": classes_used,
        "depth": depth,
    }


# -- base characters on the coefficient ring ---------------------------------


@dataclass(frozen=True)
class RootOfUnity:
    """Exact cyclotomic value exp(2 pi i num / order)."""

    num: int
    order: int

    @staticmethod
    def make(num: int, order: int) -> "RootOfUnity":
        num %= order
        g = math.gcd(num, order)
        if num == 0:
            return RootOfUnity(0, 1)
        return RootOfUnity(num // g, order // g)

    def __mul__(self, other: "RootOfUnity") -> "RootOfUnity":
        order = self.order * other.order // math.gcd(self.order, other.order)
        num = self.num * (order // self.order) + other.num * (order // other.order)
        return RootOfUnity.make(num, order)

    def __str__(self) -> str:
        if self.order == 1:
            return "1"
        if self.order == 2:
            return "-1"
        return f"zeta_{self.order}^{self.num}"


def _primitive_root(p: int) -> int:
    order = p - 1
    factors = set()
    n = order
    d = 2
    while d * d <= n:
        while n % d == 0:
            factors.add(d)
            n //= d
        d += 1
    if n > 1:
        factors.add(n)
    for g in range(2, p):
        if all(pow(g, order // f, p) != 1 for f in factors):
            return g
    raise ValueError(f"no primitive root modulo {p}")


class BaseCharacter:
    """Semigroup character on the coefficient ring."""

    def __init__(self, rule: str, field=None):
        self.rule = rule
        self.field = field
        if rule == "unit-embedding":
            if field is None or not hasattr(field, "p"):
                raise ValueError("unit embedding needs a prime field")
            self._root = _primitive_root(field.p)
            self._dlog = {}
            acc = 1
            for e in range(field.p - 1):
                self._dlog[acc] = e
                acc = acc * self._root % field.p

    @classmethod
    def trivial(cls) -> "BaseCharacter":
        return cls("trivial")

    @classmethod
    def unit_embedding(cls, field) -> "BaseCharacter":
        return cls("unit-embedding", field)

    @property
    def scalar_blind(self) -> bool:
        return self.rule == "trivial"

    def evaluate(self, scalar):
        if self.rule == "trivial":
            return Fraction(0) if scalar == 0 else Fraction(1)
        c = scalar % self.field.p
        if c == 0:
            return Fraction(0)
        return RootOfUnity.make(self._dlog[c], self.field.p - 1)


# -- kernels ------------------------------------------------------------------


class Kernel:
    """q x q weight matrix for the self-similarity recursion."""

    def __init__(self, entries):
        rows = tuple(tuple(Fraction(e) for e in row) for row in entries)
        q = len(rows)
        if any(len(row) != q for row in rows):
            raise ValueError("kernel must be square")
        self.entries = rows
        self.q = q

    @classmethod
    def ones(cls, q: int) -> "Kernel":
        return cls([[1] * q for _ in range(q)])

    @classmethod
    def identity(cls, q: int) -> "Kernel":
        return cls([[1 if i == j else 0 for j in range(q)] for i in range(q)])

    def __getitem__(self, idx: tuple[int, int]) -> Fraction:
        return self.entries[idx[0]][idx[1]]

    def is_ones(self) -> bool:
        return all(e == 1 for row in self.entries for e in row)

    def psd_report(self) -> dict:
        q = self.q
        sym = all(self.entries[i][j] == self.entries[j][i]
                  for i in range(q) for j in range(q))
        s = [[(self.entries[i][j] + self.entries[j][i]) / 2 for j in range(q)]
             for i in range(q)]
        psd = True
        for r in range(1, q + 1):
            for subset in itertools.combinations(range(q), r):
                minor = [[s[i][j] for j in subset] for i in subset]
                if _det(minor) < 0:
                    psd = False
        return {"symmetric": sym, "psd": psd}


def _det(m) -> Fraction:
    n = len(m)
    if n == 1:
        return Fraction(m[0][0])
    out = Fraction(0)
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in m[1:]]
        term = Fraction(m[0][j]) * _det(minor)
        out += term if j % 2 == 0 else -term
    return out


# -- exact linear solving ------------------------------------------------------


def _solve_system(n: int, rows: list[tuple[dict[int, Fraction], Fraction]]):
    """Solve a square exact system given as (coefficient map, rhs) rows."""
    if len(rows) != n:
        raise SingularSystemError(f"system has {len(rows)} rows for {n} variables")
    dense = [[Fraction(0)] * n + [rhs] for _, rhs in rows]
    for r, (coeffs, _) in enumerate(rows):
        for c, val in coeffs.items():
            dense[r][c] = val
    for col in range(n):
        pivot = None
        for r in range(col, n):
            if dense[r][col] != 0:
                pivot = r
                break
        if pivot is None:
            raise SingularSystemError("dependency system is singular")
        dense[col], dense[pivot] = dense[pivot], dense[col]
        inv = 1 / dense[col][col]
        dense[col] = [v * inv for v in dense[col]]
        for r in range(n):
            if r != col and dense[r][col] != 0:
                factor = dense[r][col]
                dense[r] = [a - factor * b for a, b in zip(dense[r], dense[col])]
    return [dense[r][n] for r in range(n)]


# -- algebra characters --------------------------------------------------------


def _closure_algebra(s: AlgebraElement, kernel: Kernel, cap_classes: int,
                     monomial_base: bool):
    """Close ``s`` under phi into scaling classes with equations or bases.

    Returns (index of s, reps, base map, equation map, max depth) or None
    when the element is literally zero.
    """
    if s.is_zero_literal:
        return None
    index: dict = {}
    reps: list[AlgebraElement] = []
    depth_of: list[int] = []
    base: dict[int, Fraction] = {}
    equations: dict[int, dict[int, Fraction]] = {}
    order: list[int] = []

    def register(elem: AlgebraElement, depth: int) -> int:
        key = elem.key()
        if key in index:
            return index[key]
        idx = len(reps)
        if idx >= cap_classes:
            raise _CapReached
        index[key] = idx
        reps.append(elem)
        depth_of.append(depth)
        order.append(idx)
        return idx

    try:
        register(s, 0)
        cursor = 0
        while cursor < len(reps):
            idx = cursor
            cursor += 1
            elem = reps[idx]
            if elem.is_scalar:
                base[idx] = Fraction(1)
                continue
            if monomial_base and elem.is_single_term:
                base[idx] = Fraction(1)
                continue
            block = elem.phi()
            coeffs: dict[int, Fraction] = {}
            for i, row in enumerate(block):
                for j, entry in enumerate(row):
                    weight = kernel[i, j]
                    if weight == 0 or entry.is_zero_literal:
                        continue
                    child = register(entry, depth_of[idx] + 1)
                    coeffs[child] = coeffs.get(child, Fraction(0)) + weight
            equations[idx] = coeffs
    except _CapReached:
        return "cap"
    return 0, reps, base, equations, max(depth_of, default=0)


class _CapReached(Exception):
    pass


def _solve_closure(closure, q: int):
    if closure is None:
        return Fraction(0), {"classes_used": 0, "depth": 0}
    if closure == "cap":
        return None, None
    root, reps, base, equations, depth = closure
    n = len(reps)
    rows: list[tuple[dict[int, Fraction], Fraction]] = []
    for idx in range(n):
        if idx in base:
            rows.append(({idx: Fraction(1)}, base[idx]))
        else:
            coeffs = {idx: Fraction(q)}
            for child, weight in equations[idx].items():
                coeffs[child] = coeffs.get(child, Fraction(0)) - weight
            rows.append((coeffs, Fraction(0)))
    values = _solve_system(n, rows)
    return values[root], {"classes_used": n, "depth": depth}


def algebra_char(s: AlgebraElement, kernel: Kernel, cap_classes: int = 10_000,
                 base_char: BaseCharacter | None = None,
                 monomial_base: bool = False, with_info: bool = False):
    """Character of an algebra element for an arbitrary kernel.

    The kernel delta_{i=j} gives the fixed-point character; the all-ones
    kernel reproduces the spread character.
    """
    if base_char is None:
        base_char = BaseCharacter.trivial()
    if not base_char.scalar_blind:
        # scaling classes are invalid for a scalar-sensitive base character;
        # only direct base cases are evaluated in that mode
        if s.is_zero_literal:
            return Fraction(0)
        if s.is_scalar:
            return base_char.evaluate(s.terms[()])
        raise ExperimentalModeError(
            "unit-embedding mode evaluates zero and scalar base cases only")
    if kernel.q != s.q:
        raise ValueError("kernel size does not match the alphabet")
    closure = _closure_algebra(s, kernel, cap_classes, monomial_base)
    value, info = _solve_closure(closure, s.q)
    if value is None:
        out = Unknown(cap_classes)
        return (out, None) if with_info else out
    return (value, info) if with_info else value


def spread_char(s: AlgebraElement, cap_classes: int = 10_000,
                expand_monomials: bool = False, with_info: bool = False):
    """All-ones kernel character; every single monomial is a base case
    with value 1 unless ``expand_monomials`` forces one more recursion
    level through them."""
    result = algebra_char(s, Kernel.ones(s.q), cap_classes=cap_classes,
                          monomial_base=not expand_monomials, with_info=True)
    value, info = result if isinstance(result, tuple) else (result, None)
    if value is not None and not isinstance(value, Unknown):
        k = q_power_denominator(value, s.q)
        assert value >= 0 and k is not None, (
            f"spread value {value} escapes nonnegative q-power denominators")
    return (value, info) if with_info else value


# -- group characters ----------------------------------------------------------


def group_char(rec: WreathRecursion, word: Word, kernel: Kernel | None = None,
               cap_classes: int = 10_000, with_info: bool = False):
    """Character of a group word from the wreath recursion closure.

    The identity kernel weights only fixed strands and matches the
    fixed-vertex measure; the all-ones kernel gives the trivial character.
    """
    q = rec.q
    if kernel is None:
        kernel = Kernel.identity(q)
    if kernel.q != q:
        raise ValueError("kernel size does not match the alphabet")
    index: dict[Word, int] = {}
    reps: list[Word] = []
    depth_of: list[int] = []
    base: dict[int, Fraction] = {}
    equations: dict[int, dict[int, Fraction]] = {}

    def register(w: Word, depth: int) -> int:
        w = free_reduce(w)
        if w in index:
            return index[w]
        idx = len(reps)
        if idx >= cap_classes:
            raise _CapReached
        index[w] = idx
        reps.append(w)
        depth_of.append(depth)
        return idx

    try:
        register(word, 0)
        cursor = 0
        while cursor < len(reps):
            idx = cursor
            cursor += 1
            w = reps[idx]
            if not w:
                base[idx] = Fraction(1)
                continue
            element = rec.decompose(w)
            coeffs: dict[int, Fraction] = {}
            for a in range(q):
                weight = kernel[a, element.perm(a)]
                if weight == 0:
                    continue
                child = register(element.sections[a], depth_of[idx] + 1)
                coeffs[child] = coeffs.get(child, Fraction(0)) + weight
            equations[idx] = coeffs
    except _CapReached:
        out = Unknown(cap_classes)
        return (out, None) if with_info else out

    n = len(reps)
    rows: list[tuple[dict[int, Fraction], Fraction]] = []
    for idx in range(n):
        if idx in base:
            rows.append(({idx: Fraction(1)}, base[idx]))
        else:
            coeffs = {idx: Fraction(q)}
            for child, weight in equations[idx].items():
                coeffs[child] = coeffs.get(child, Fraction(0)) - weight
            rows.append((coeffs, Fraction(0)))
    values = _solve_system(n, rows)
    info = {"classes_used": n, "depth": max(depth_of, default=0)}
    return (values[0], info) if with_info else values[0]


# -- language counting -----------------------------------------------------------


def _is_countable(entry: AlgebraElement) -> bool:
    """Membership in k^x union k^x x_0 union k^x x_1 after letter collapse."""
    if not entry.is_single_term:
        return False
    word = next(iter(entry.terms))
    return len(word) <= 1


def count_L(s: AlgebraElement, k: int, cap_classes: int = 10_000) -> int:
    """Number of index pairs (u, v) at depth k whose entry is a nonzero
    scalar multiple of 1, x_0 or x_1.

    The multiset of entry scaling classes is evolved k steps without
    materializing the q^k x q^k matrix.  Generators above index 1 are
    collapsed to x_1 throughout; this identification is certified by a
    zero test on the differences x_i - x_1, whose matrix images coincide.
    """
    if k < 0:
        raise ValueError("depth must be nonnegative")
    from .algebra import is_zero as algebra_is_zero

    for i in range(2, s.q):
        diff = (AlgebraElement.generator(s.ring, s.q, i, s.mode)
                - AlgebraElement.generator(s.ring, s.q, 1, s.mode))
        certificate = algebra_is_zero(diff, cap_depth=2)
        assert certificate.is_zero, f"x{i} and x1 have different images"

    collapsed = s.collapse_high_letters()
    if collapsed.is_zero_literal:
        return 0
    index: dict = {}
    reps: list[AlgebraElement] = []
    transitions: list[list[tuple[int, int]]] = []

    def register(elem: AlgebraElement) -> int:
        key = elem.key()
        if key in index:
            return index[key]
        if len(reps) >= cap_classes:
            raise ClassExplosionError(
                f"count closure exceeded {cap_classes} classes", len(reps))
        idx = len(reps)
        index[key] = idx
        reps.append(elem)
        transitions.append([])
        return idx

    root = register(collapsed)
    counts: dict[int, int] = {root: 1}
    expanded: set[int] = set()
    for _ in range(k):
        grown: dict[int, int] = {}
        for idx, multiplicity in counts.items():
            if idx not in expanded:
                expanded.add(idx)
                bucket: dict[int, int] = {}
                for row in reps[idx].phi():
                    for entry in row:
                        if entry.is_zero_literal:
                            continue
                        child = register(entry.collapse_high_letters())
                        bucket[child] = bucket.get(child, 0) + 1
                transitions[idx] = sorted(bucket.items())
            for child, times in transitions[idx]:
                grown[child] = grown.get(child, 0) + multiplicity * times
        counts = grown
    return sum(multiplicity for idx, multiplicity in counts.items()
               if _is_countable(reps[idx]))


def growth_constant(s: AlgebraElement, k_min: int, k_max: int,
                    cap_classes: int = 10_000):
    """The defect q^k * chi_s(s) - count_L(s, k) over a depth range.

    Returns (constant at k_max, stable flag); the defect becomes constant
    once k is large enough.
    """
    if k_min >= k_max:
        raise ValueError("need k_min < k_max")
    chi = spread_char(s, cap_classes=cap_classes)
    if isinstance(chi, Unknown):
        raise ClassExplosionError("character closure exceeded the cap", cap_classes)
    defects = [Fraction(s.q) ** k * chi - count_L(s, k, cap_classes)
               for k in range(k_min, k_max + 1)]
    return defects[-1], all(d == defects[-1] for d in defects)


# -- additivity over the sigma tower ---------------------------------------------


def additivity_check(components, cap_classes: int = 10_000) -> dict:
    """Exact two-sided check of value additivity under sigma, with the
    per-element diagonality and gamma-invariance side conditions."""
    components = list(components)
    q = components[0].q
    combined = sigma(*components)
    sigma_value = spread_char(combined, cap_classes=cap_classes)
    reports = []
    total = Fraction(0)
    for comp in components:
        value = spread_char(comp, cap_classes=cap_classes)
        total += value
        block = comp.phi()
        diagonal = all(block[i][j].is_zero_literal
                       for i in range(q) for j in range(q) if i != j)
        gamma_invariant = all(
            spread_char(comp.gamma_map(i), cap_classes=cap_classes) == value
            for i in range(1, q))
        reports.append({
            "value": value,
            "diagonal": diagonal,
            "gamma_invariant": gamma_invariant,
        })
    return {
        "sigma_value": sigma_value,
        "component_sum": total,
        "additive": sigma_value == total,
        "components": reports,
    }


# -- witness construction ----------------------------------------------------------


@dataclass(frozen=True)
class NotFound:
    """Failed witness search, with the frontier that was examined."""

    target: Fraction
    reason: str

    def __str__(self) -> str:
        return f"NotFound(target={self.target}, reason={self.reason})"


def theorem_witness(target, q: int, ring=None, mode: str = "B",
                    budget_leaves: int = 729, cap_classes: int = 20_000):
    """Search for an element whose spread character equals ``target``.

    Targets 2a/q^k are reached by combining a copies of the level-k tower
    generator through sigma, padding with zeros; every candidate is
    verified by exact evaluation before being returned.  The search is
    best-effort: odd numerators over odd q are out of reach of the sigma
    sums and report NotFound.
    """
    from .algebra import RATIONALS

    if ring is None:
        ring = RATIONALS
    target = Fraction(target)
    if target < 0:
        raise ValueError("target must be nonnegative")
    k = q_power_denominator(target, q)
    if k is None:
        raise ValueError(f"target denominator must be a power of {q}")

    def verified(candidate):
        value = spread_char(candidate, cap_classes=cap_classes)
        if value == target:
            return candidate
        return NotFound(target, "candidate failed exact verification")

    if target == 0:
        return verified(AlgebraElement.zero(ring, q, mode))
    if target == 1:
        return verified(AlgebraElement.generator(ring, q, 0, mode))

    num = target.numerator
    if num % 2 == 1:
        if q % 2 == 1:
            return NotFound(
                target,
                "odd numerator over odd q: sigma sums of tower values "
                "2/q^j keep even numerators")
        num, k = num * q // 2, k + 1
        copies = num
    else:
        copies = num // 2
    if copies > budget_leaves:
        return NotFound(target, f"needs {copies} tower copies, budget "
                                f"{budget_leaves} leaves")
    if copies == 1:
        # the tower element 1 - x_0^{q^{k+1}} evaluates to 2/q^k directly
        word = word_power(((0, 1),), q ** (k + 1))
        one = AlgebraElement.one(ring, q, mode)
        return verified(one - AlgebraElement.monomial(ring, q, word, mode=mode))

    zero = AlgebraElement.zero(ring, q, mode)
    layer = [omega_generator(ring, q, 0, k, mode) for _ in range(copies)]
    while len(layer) > 1:
        grouped = []
        for start in range(0, len(layer), q):
            batch = layer[start:start + q]
            batch += [zero] * (q - len(batch))
            grouped.append(sigma(*batch))
        layer = grouped
    return verified(layer[0])
