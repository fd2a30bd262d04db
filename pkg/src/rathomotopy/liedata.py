"""Static Lie data: simple types, exponents, invariant generators, Kac-basis frames.

A frame lists the canonical coordinate functionals of a Cartan subalgebra (the
ambient variables) and the values of those functionals on the Kac-basis
coroots H_0..H_r (rows). Second-category frames use the coroots of the
twisted affine diagram, expressed through the first-category ones.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, product
from typing import Sequence

from gmpy2 import mpq

from .poly import LinearSubstitution, Polynomial, linear_form_power

FAMILIES = ("A", "B", "C", "D", "G", "F", "E")
_FIXED_RANK = {"G": (2,), "F": (4,), "E": (6, 7, 8)}
_MIN_RANK = {"A": 1, "B": 2, "C": 3, "D": 4}


class LieDataError(ValueError):
    pass


class Unsupported(LieDataError):
    """Data the library deliberately does not provide (E7/E8 invariants)."""


class InvalidCategory(LieDataError):
    pass


@dataclass(frozen=True, order=True)
class SimpleType:
    family: str
    rank: int

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise LieDataError(f"unknown family {self.family!r}")
        if self.family in _FIXED_RANK:
            if self.rank not in _FIXED_RANK[self.family]:
                raise LieDataError(f"no exceptional type {self.family}{self.rank}")
        elif self.rank < _MIN_RANK[self.family]:
            raise LieDataError(f"{self.family}{self.rank} is below the rank bound "
                               f"{self.family}_n, n>={_MIN_RANK[self.family]}")

    @classmethod
    def parse(cls, text: str) -> "SimpleType":
        m = re.fullmatch(r"\s*([ABCDEFG])\s*_?\s*(\d+)\s*", text)
        if not m:
            raise LieDataError(f"cannot parse simple type {text!r}")
        return cls(m.group(1), int(m.group(2)))

    @property
    def is_exceptional(self) -> bool:
        return self.family in _FIXED_RANK

    def __str__(self):
        return f"{self.family}{self.rank}"


@dataclass(frozen=True)
class ExponentMultiset:
    entries: tuple[tuple[int, int], ...]  # (exponent, multiplicity), sorted

    def multiplicity(self, k: int) -> int:
        return dict(self.entries).get(k, 0)

    def weights(self) -> list[int]:
        return [k for k, m in self.entries for _ in range(m)]

    @property
    def rank(self) -> int:
        return sum(m for _, m in self.entries)

    def dimension(self) -> int:
        """Dimension of the group: sum of (2k-1) over the exponents."""
        return sum((2 * k - 1) * m for k, m in self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __contains__(self, k):
        return self.multiplicity(k) > 0


def _raw_exponents(family: str, n: int) -> list[int]:
    if family == "A":
        return list(range(2, n + 2))
    if family in "BC":
        return list(range(2, 2 * n + 1, 2))
    if family == "D":
        return list(range(2, 2 * n - 1, 2)) + [n]
    return {("G", 2): [2, 6], ("F", 4): [2, 6, 8, 12],
            ("E", 6): [2, 5, 6, 8, 9, 12], ("E", 7): [2, 6, 8, 10, 12, 14, 18],
            ("E", 8): [2, 8, 12, 14, 18, 20, 24, 30]}[(family, n)]


def exponents(t: SimpleType) -> ExponentMultiset:
    ks = _raw_exponents(t.family, t.rank)
    return ExponentMultiset(tuple((k, ks.count(k)) for k in sorted(set(ks))))


# -- invariant generators -------------------------------------------------------

Part = tuple[mpq, tuple[tuple[tuple[mpq, ...], int], ...]]


class InvariantGenerator:
    """sum_c coef_c * prod (linear form)^exp, kept factored so restriction stays cheap."""

    __slots__ = ("symbol", "weight", "variables", "parts", "_poly")

    def __init__(self, symbol: str, weight: int, variables: Sequence[str], parts: Sequence[Part]):
        self.symbol = symbol
        self.weight = weight
        self.variables = tuple(variables)
        self.parts = tuple((mpq(c), tuple((tuple(mpq(x) for x in f), e) for f, e in fs))
                           for c, fs in parts)
        self._poly = None

    @property
    def polynomial(self) -> Polynomial:
        if self._poly is None:
            acc: dict = {}
            cache: dict = {}
            for c, factors in self.parts:
                term = Polynomial.constant(self.variables, c)
                for form, e in factors:
                    key = (form, e)
                    if key not in cache:
                        cache[key] = linear_form_power(form, e, self.variables)
                    term = term * cache[key]
                for m, v in term.terms.items():
                    acc[m] = acc.get(m, 0) + v
            self._poly = Polynomial(self.variables, acc)
        return self._poly

    def restrict(self, sigma: LinearSubstitution) -> "InvariantGenerator":
        if sigma.source != self.variables:
            raise LieDataError("substitution does not start from the generator's variables")
        parts = []
        merged: dict = {}
        for c, factors in self.parts:
            new = tuple((sigma.compose_form(f), e) for f, e in factors)
            if any(all(x == 0 for x in f) for f, e in new if e > 0):
                continue
            if len(new) == 1:
                # power sums: merge equal forms
                merged[new[0]] = merged.get(new[0], 0) + c
            else:
                parts.append((c, new))
        parts.extend((c, (key,)) for key, c in merged.items() if c != 0)
        return InvariantGenerator(self.symbol, self.weight, sigma.target, parts)

    def entry(self) -> tuple[str, int, Polynomial]:
        return (self.symbol, self.weight, self.polynomial)


def _unit(n: int, i: int, c=1) -> tuple:
    v = [0] * n
    v[i] = c
    return tuple(v)


def _power_sum(sym: str, k: int, variables, forms, coef=1) -> InvariantGenerator:
    return InvariantGenerator(sym, k, variables, [(coef, ((f, k),)) for f in forms])


def frame_variables(family: str, n: int) -> tuple[str, ...]:
    if family == "A":
        return tuple(f"x{i}" for i in range(1, n + 2))
    if family == "G":
        return ("x1", "x2", "x3")
    if family == "E" and n == 6:
        return tuple(f"x{i}" for i in range(1, 7)) + ("eps",)
    if family == "E":
        return tuple(f"x{i}" for i in range(1, 9))
    return tuple(f"x{i}" for i in range(1, n + 1))


def _e6_standard_forms() -> list[tuple]:
    """The 27 weight forms (x_i +- eps) and (-x_i - x_j) over (x1..x6, eps)."""
    forms = []
    for i in range(6):
        for s in (1, -1):
            v = [0] * 7
            v[i] = 1
            v[6] = s
            forms.append(tuple(v))
    for i, j in combinations(range(6), 2):
        v = [0] * 7
        v[i] = v[j] = -1
        forms.append(tuple(v))
    return forms


def e6_form_vectors() -> list[tuple]:
    """Forms a_i, b_i = -a_{7-i}, c_ij = -a_i + a_{7-j} (i<j) over (a1..a6)."""
    forms = [_unit(6, i) for i in range(6)]
    forms += [_unit(6, 5 - i, -1) for i in range(6)]
    for i, j in combinations(range(6), 2):
        v = [0] * 6
        v[i] -= 1
        v[5 - j] += 1
        forms.append(tuple(v))
    return forms


def _generators_raw(family: str, n: int, variant: str) -> list[InvariantGenerator]:
    if family == "E" and n in (7, 8):
        raise Unsupported(f"invariant generators of E{n} are not provided")
    if variant == "takeuchi":
        if (family, n) != ("E", 6):
            raise LieDataError("the takeuchi generator variant exists only for E6")
        vs = tuple(f"a{i}" for i in range(1, 7))
        forms = e6_form_vectors()
        half = mpq(1, 2)
        return [_power_sum(f"I{k}", k, vs, forms, half) for k in _raw_exponents("E", 6)]
    if variant != "standard":
        raise LieDataError(f"unknown generator variant {variant!r}")
    vs = frame_variables(family, n)
    m = len(vs)
    units = [_unit(m, i) for i in range(m)]
    if family == "A":
        return [_power_sum(f"P{k}", k, vs, units) for k in range(2, n + 2)]
    if family in "BC":
        return [_power_sum(f"P{k}", k, vs, units) for k in range(2, 2 * n + 1, 2)]
    if family == "D":
        gens = [_power_sum(f"P{k}", k, vs, units) for k in range(2, 2 * n - 1, 2)]
        gens.append(InvariantGenerator(f"P{n}'", n, vs, [(1, tuple((u, 1) for u in units))]))
        return sorted(gens, key=lambda g: g.weight)
    if family == "G":
        return [_power_sum(f"P{k}", k, vs, units, 2) for k in (2, 6)]
    if family == "F":
        half = mpq(1, 2)
        forms = [_unit(4, i, s) for i in range(4) for s in (1, -1)]
        forms += [tuple(half * s for s in signs) for signs in product((1, -1), repeat=4)]
        return [_power_sum(f"P{k}", k, vs, forms) for k in (2, 6, 8, 12)]
    if family == "E":
        forms = _e6_standard_forms()
        return [_power_sum(f"P{k}", k, vs, forms) for k in _raw_exponents("E", 6)]
    raise LieDataError(f"no generators for {family}{n}")


def invariant_generators(t: SimpleType, variant: str = "standard"
                         ) -> tuple[tuple[str, ...], list[InvariantGenerator]]:
    gens = _generators_raw(t.family, t.rank, variant)
    return gens[0].variables, gens


# -- Kac-basis frames ---------------------------------------------------------


@dataclass(frozen=True)
class CoordinateFrame:
    simple_type: SimpleType
    category: int
    twist: int
    variant: str
    variables: tuple[str, ...]
    rows: tuple[tuple[mpq, ...], ...]
    labels: tuple[str, ...]

    @property
    def matrix(self) -> list[list[mpq]]:
        return [list(r) for r in self.rows]

    def generators(self) -> list[InvariantGenerator]:
        return _generators_raw(self.simple_type.family, self.simple_type.rank,
                               "takeuchi" if self.variant == "takeuchi" else "standard")

    def gram(self) -> list[list[mpq]]:
        return gram_matrix(self.simple_type.family, self.simple_type.rank, self.variant)


def first_category_rows(family: str, n: int) -> list[tuple]:
    """Rows H_0..H_n: values of the canonical coordinates on the coroots."""
    m = len(frame_variables(family, n))

    def vec(**kw):
        v = [mpq(0)] * m
        for k, c in kw.items():
            v[int(k[1:]) - 1] = mpq(c)
        return v

    def simple(i):  # e_i - e_{i+1}
        v = [mpq(0)] * m
        v[i - 1] = mpq(1)
        v[i] = mpq(-1)
        return v

    rows: list[list[mpq]]
    if family == "A":
        rows = [vec(**{"x1": -1, f"x{n + 1}": 1})] + [simple(i) for i in range(1, n + 1)]
    elif family == "B":
        rows = [vec(x1=-1, x2=-1)] + [simple(i) for i in range(1, n)] + [vec(**{f"x{n}": 2})]
    elif family == "C":
        rows = [vec(x1=-1)] + [simple(i) for i in range(1, n)] + [vec(**{f"x{n}": 1})]
    elif family == "D":
        rows = ([vec(x1=-1, x2=-1)] + [simple(i) for i in range(1, n)]
                + [vec(**{f"x{n - 1}": 1, f"x{n}": 1})])
    elif family == "G":
        rows = [[mpq(x) for x in r] for r in ((-1, 0, 1), (1, -2, 1), (0, 1, -1))]
    elif family == "F":
        rows = [[mpq(x) for x in r] for r in
                ((-1, -1, 0, 0), (1, -1, -1, -1), (0, 0, 0, 2), (0, 0, 1, -1), (0, 1, -1, 0))]
    elif family == "E" and n == 6:
        h = mpq(1, 2)
        rows = ([[mpq(0)] * 6 + [mpq(-1)]] + [simple(i) for i in range(1, 6)]
                + [[-h, -h, -h, h, h, h, h]])
    elif family == "E" and n == 7:
        h = mpq(1, 2)
        rows = [vec(x7=1, x8=-1)] + [simple(i) for i in range(1, 7)] + [[-h] * 4 + [h] * 4]
    elif family == "E" and n == 8:
        t = mpq(1, 3)
        rows = [vec(x1=-1)] + [simple(i) for i in range(1, 8)] + [[-t] * 5 + [2 * t] * 3]
    else:
        raise LieDataError(f"no frame for {family}{n}")
    return [tuple(r) for r in rows]


def _combine(rows: list[tuple], coeffs: dict[int, int]) -> tuple:
    m = len(rows[0])
    return tuple(sum((mpq(c) * rows[i][j] for i, c in coeffs.items()), mpq(0)) for j in range(m))


def second_category_rows(family: str, n: int, twist: int = 2) -> list[tuple]:
    """Rows Hbar_0..Hbar_r of the twisted affine diagram, built from the H_i."""
    H = first_category_rows(family, n)
    if family == "A" and n % 2 == 0:
        r = n // 2
        out = [_combine(H, {i: -1 for i in range(1, n + 1)})]
        out += [_combine(H, {i: 1, n - i + 1: 1}) for i in range(1, r)]
        out.append(_combine(H, {r: 2, r + 1: 2}))
        return out
    if family == "A" and n % 2 == 1 and n >= 3:
        r = (n + 1) // 2
        c = {1: -1, n: -1}
        c.update({i: -2 for i in range(2, n - 1 + 1) if i not in (1, n)})
        out = [_combine(H, c)]
        out += [_combine(H, {i: 1, n + 1 - i: 1}) for i in range(1, r)]
        out.append(_combine(H, {r: 1}))
        return out
    if family == "D" and twist == 3:
        if n != 4:
            raise InvalidCategory("the order-3 twist exists only for D4")
        return [_combine(H, {2: -3, 1: -2, 3: -2, 4: -2}), _combine(H, {1: 1, 3: 1, 4: 1}),
                _combine(H, {2: 1})]
    if family == "D":
        r = n - 1
        c = {i: -2 for i in range(1, r)}
        c.update({r: -1, r + 1: -1})
        return ([_combine(H, c)] + [_combine(H, {i: 1}) for i in range(1, r)]
                + [_combine(H, {r: 1, r + 1: 1})])
    if family == "E" and n == 6:
        return [_combine(H, {1: -2, 2: -3, 3: -4, 4: -3, 5: -2, 6: -2}),
                _combine(H, {1: 1, 5: 1}), _combine(H, {2: 1, 4: 1}),
                _combine(H, {3: 1}), _combine(H, {6: 1})]
    raise InvalidCategory(f"{family}{n} has no second-category diagram")


E6_TAKEUCHI_ROWS = (
    (-2, -1, -1, -1, -1, 0),
    (1, -1, 0, 0, 1, -1),
    (0, 1, -1, 1, -1, 0),
    (0, 0, 1, -1, 0, 0),
    (0, 0, 0, 1, 1, 1),
)


def kac_basis_matrix(t: SimpleType, category: int = 1, *, twist: int | None = None,
                     variant: str | None = None) -> CoordinateFrame:
    """Frame of coordinate values on the Kac basis.

    ``twist`` is the order of the diagram automorphism for category 2 (3 only
    for the D4 triality). ``variant`` selects, for E6 category 2, between the
    forms a1..a6 ("takeuchi", default) and the canonical coordinates ("standard").
    """
    f, n = t.family, t.rank
    if category == 1:
        if twist not in (None, 1):
            raise InvalidCategory("category 1 has no diagram twist")
        if variant not in (None, "standard"):
            raise InvalidCategory("category 1 frames use the standard variant")
        rows = first_category_rows(f, n)
        return CoordinateFrame(t, 1, 1, "standard", frame_variables(f, n), tuple(rows),
                               tuple(f"H{i}" for i in range(len(rows))))
    if category != 2:
        raise InvalidCategory(f"category must be 1 or 2, got {category}")
    twist = 2 if twist is None else twist
    ok = ((f == "A" and n >= 2) or (f == "D" and twist == 2) or (f == "D" and n == 4)
          or (f == "E" and n == 6))
    if not ok or twist not in (2, 3) or (twist == 3 and (f, n) != ("D", 4)):
        raise InvalidCategory(f"{t} has no category-2 diagram with twist {twist}")
    if (f, n) == ("E", 6) and variant in (None, "takeuchi"):
        rows = tuple(tuple(mpq(x) for x in r) for r in E6_TAKEUCHI_ROWS)
        return CoordinateFrame(t, 2, 2, "takeuchi", tuple(f"a{i}" for i in range(1, 7)), rows,
                               tuple(f"Hbar{i}" for i in range(5)))
    if variant not in (None, "standard"):
        raise InvalidCategory(f"variant {variant!r} is not available for {t}")
    rows = tuple(second_category_rows(f, n, twist))
    return CoordinateFrame(t, 2, twist, "standard", frame_variables(f, n), rows,
                           tuple(f"Hbar{i}" for i in range(len(rows))))


# -- bilinear forms and Cartan matrices ----------------------------------------


@lru_cache(maxsize=None)
def _gram_cached(family: str, n: int, variant: str) -> tuple:
    vs = (tuple(f"a{i}" for i in range(1, 7)) if variant == "takeuchi"
          else frame_variables(family, n))
    m = len(vs)
    if family == "E" and n == 7:
        return tuple(tuple(mpq(int(i == j)) for j in range(m)) for i in range(m))
    if family == "E" and n == 8:  # implicit ninth coordinate minus the sum
        return tuple(tuple(mpq(int(i == j) + 1) for j in range(m)) for i in range(m))
    p2 = _generators_raw(family, n, variant)[0].polynomial
    g = [[mpq(0)] * m for _ in range(m)]
    for e, c in p2.terms.items():
        idx = [i for i, k in enumerate(e) for _ in range(k)]
        i, j = idx
        if i == j:
            g[i][i] += c
        else:
            g[i][j] += c / 2
            g[j][i] += c / 2
    return tuple(tuple(r) for r in g)


def gram_matrix(family: str, n: int, variant: str = "standard") -> list[list[mpq]]:
    """Symmetric matrix of an invariant bilinear form in frame coordinates."""
    return [list(r) for r in _gram_cached(family, n, variant)]


def bilinear(g: Sequence[Sequence], u: Sequence, v: Sequence) -> mpq:
    return sum((u[i] * g[i][j] * v[j] for i in range(len(u)) for j in range(len(v))
                if u[i] and v[j]), mpq(0))


def cartan_matrix(rows: Sequence[Sequence], g: Sequence[Sequence]) -> list[list[mpq]]:
    """a_ij = 2 B(H_i, H_j) / B(H_i, H_i) for coroot rows H."""
    n = len(rows)
    b = [[bilinear(g, rows[i], rows[j]) for j in range(n)] for i in range(n)]
    return [[2 * b[i][j] / b[i][i] for j in range(n)] for i in range(n)]
