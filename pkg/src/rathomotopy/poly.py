"""Exact multivariate polynomials over Q and expression in a generator set.

Polynomials live in an explicit ordered namespace of variable names; exponent
vectors are dense tuples over that namespace. Coefficients are ``gmpy2.mpq``.
"""
from __future__ import annotations

from itertools import combinations_with_replacement
from math import factorial
from typing import Iterable, Mapping, Sequence

from gmpy2 import mpq

from .linalg import nullspace


class PolyError(ValueError):
    pass


class NamespaceMismatch(PolyError):
    pass


class UnassignedVariable(PolyError):
    pass


class UnknownSymbol(PolyError):
    pass


class NotInSubring(PolyError):
    """The polynomial is not a polynomial in the given generators."""


class AmbiguousExpression(PolyError):
    """Generators are dependent and the linear part is not determined."""


def _q(x) -> mpq:
    return x if type(x) is type(mpq(0)) else mpq(x)


def _fmt_coef(c: mpq) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


class Polynomial:
    __slots__ = ("variables", "terms")

    def __init__(self, variables: Sequence[str], terms: Mapping[tuple, object] | None = None):
        self.variables = tuple(variables)
        clean = {}
        if terms:
            n = len(self.variables)
            for exps, c in terms.items():
                c = _q(c)
                if c == 0:
                    continue
                exps = tuple(exps)
                if len(exps) != n or any(e < 0 for e in exps):
                    raise PolyError(f"bad exponent vector {exps} for {n} variables")
                clean[exps] = c
        self.terms: dict[tuple, mpq] = clean

    @classmethod
    def _raw(cls, variables: tuple, terms: dict) -> "Polynomial":
        p = cls.__new__(cls)
        p.variables = variables
        p.terms = terms
        return p

    @classmethod
    def zero(cls, variables: Sequence[str]) -> "Polynomial":
        return cls(variables)

    @classmethod
    def constant(cls, variables: Sequence[str], c) -> "Polynomial":
        return cls(variables, {(0,) * len(variables): c})

    @classmethod
    def variable(cls, variables: Sequence[str], name: str) -> "Polynomial":
        variables = tuple(variables)
        if name not in variables:
            raise UnknownSymbol(name)
        e = [0] * len(variables)
        e[variables.index(name)] = 1
        return cls(variables, {tuple(e): 1})

    @classmethod
    def linear(cls, variables: Sequence[str], coeffs: Sequence) -> "Polynomial":
        """Linear form sum(coeffs[i] * variables[i])."""
        variables = tuple(variables)
        if len(coeffs) != len(variables):
            raise NamespaceMismatch("coefficient vector length differs from namespace")
        n = len(variables)
        terms = {}
        for i, c in enumerate(coeffs):
            if c != 0:
                e = [0] * n
                e[i] = 1
                terms[tuple(e)] = _q(c)
        return cls._raw(variables, terms)

    # -- queries -----------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def coefficient(self, exps: Sequence[int]) -> mpq:
        return self.terms.get(tuple(exps), mpq(0))

    def linear_coefficients(self) -> list[mpq]:
        """Coefficients of the degree-1 part, in namespace order."""
        n = len(self.variables)
        out = [mpq(0)] * n
        for e, c in self.terms.items():
            if sum(e) == 1:
                out[e.index(1)] = c
        return out

    def sorted_terms(self) -> list[tuple[tuple, mpq]]:
        """Terms in graded lexicographic order, highest first."""
        return sorted(self.terms.items(), key=lambda t: (sum(t[0]), t[0]), reverse=True)

    def _check(self, other: "Polynomial") -> None:
        if self.variables != other.variables:
            raise NamespaceMismatch(f"{self.variables} vs {other.variables}")

    # -- arithmetic --------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, Polynomial):
            other = Polynomial.constant(self.variables, other)
        self._check(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            v = terms.get(e, 0) + c
            if v == 0:
                terms.pop(e, None)
            else:
                terms[e] = v
        return Polynomial._raw(self.variables, terms)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw(self.variables, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, Polynomial):
            other = Polynomial.constant(self.variables, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "Polynomial":
        c = _q(c)
        if c == 0:
            return Polynomial._raw(self.variables, {})
        return Polynomial._raw(self.variables, {e: v * c for e, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            return self.scale(other)
        self._check(other)
        if len(self.terms) < len(other.terms):
            a, b = self.terms, other.terms
        else:
            a, b = other.terms, self.terms
        terms: dict[tuple, mpq] = {}
        get = terms.get
        for ea, ca in a.items():
            for eb, cb in b.items():
                e = tuple([x + y for x, y in zip(ea, eb)])
                terms[e] = get(e, 0) + ca * cb
        return Polynomial._raw(self.variables, {e: c for e, c in terms.items() if c != 0})

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, k: int):
        if k < 0:
            raise PolyError("negative power")
        result = Polynomial.constant(self.variables, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.variables == other.variables and self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self):
        return hash((self.variables, frozenset(self.terms.items())))

    def __repr__(self):
        return f"Polynomial({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                v if k == 1 else f"{v}^{k}" for v, k in zip(self.variables, e) if k
            )
            if not mono:
                parts.append((c < 0, _fmt_coef(abs(c))))
            elif abs(c) == 1:
                parts.append((c < 0, mono))
            else:
                parts.append((c < 0, f"{_fmt_coef(abs(c))}*{mono}"))
        s = ("-" if parts[0][0] else "") + parts[0][1]
        for neg, body in parts[1:]:
            s += (" - " if neg else " + ") + body
        return s


def add(p: Polynomial, q: Polynomial) -> Polynomial:
    return p + q


def mul(p: Polynomial, q: Polynomial) -> Polynomial:
    return p * q


def pow(p: Polynomial, k: int) -> Polynomial:  # noqa: A001 - mirrors the arithmetic name
    return p ** k


def evaluate(p: Polynomial, point: Mapping[str, object]) -> mpq:
    try:
        vals = [_q(point[v]) for v in p.variables]
    except KeyError as exc:
        raise UnassignedVariable(str(exc)) from None
    total = mpq(0)
    for e, c in p.terms.items():
        t = c
        for v, k in zip(vals, e):
            if k:
                t *= v ** k
        total += t
    return total


def linear_form_power(coeffs: Sequence, k: int, variables: Sequence[str]) -> Polynomial:
    """(sum coeffs[i] x_i)^k by the multinomial theorem."""
    variables = tuple(variables)
    n = len(variables)
    support = [(i, _q(c)) for i, c in enumerate(coeffs) if c != 0]
    if k == 0:
        return Polynomial.constant(variables, 1)
    if not support:
        return Polynomial._raw(variables, {})
    fk = factorial(k)
    terms: dict[tuple, mpq] = {}
    idx = list(range(len(support)))
    for combo in combinations_with_replacement(idx, k):
        counts = [0] * len(support)
        for j in combo:
            counts[j] += 1
        coef = mpq(fk)
        e = [0] * n
        for j, m in enumerate(counts):
            if m:
                i, c = support[j]
                coef = coef / factorial(m) * c ** m
                e[i] = m
        terms[tuple(e)] = coef
    return Polynomial._raw(variables, terms)


class LinearSubstitution:
    """Assignment of a linear form over ``target`` to every variable of ``source``."""

    __slots__ = ("source", "target", "matrix")

    def __init__(self, source: Sequence[str], target: Sequence[str], matrix: Sequence[Sequence]):
        self.source = tuple(source)
        self.target = tuple(target)
        if len(matrix) != len(self.source):
            raise UnassignedVariable("every source variable needs an image")
        self.matrix = tuple(tuple(_q(c) for c in row) for row in matrix)
        if any(len(row) != len(self.target) for row in self.matrix):
            raise NamespaceMismatch("image width differs from target namespace")

    @classmethod
    def from_images(cls, source: Sequence[str], target: Sequence[str],
                    images: Mapping[str, Polynomial]) -> "LinearSubstitution":
        rows = []
        for v in source:
            if v not in images:
                raise UnassignedVariable(v)
            img = images[v]
            if tuple(img.variables) != tuple(target):
                raise NamespaceMismatch(f"image of {v} is over {img.variables}")
            if img.degree() > 1 or img.coefficient((0,) * len(target)) != 0:
                raise PolyError(f"image of {v} is not a linear form")
            rows.append(img.linear_coefficients())
        return cls(source, target, rows)

    def image(self, var: str) -> Polynomial:
        return Polynomial.linear(self.target, self.matrix[self.source.index(var)])

    def compose_form(self, form: Sequence) -> tuple:
        """Pull a linear form over the source back to a linear form over the target."""
        out = [mpq(0)] * len(self.target)
        for c, row in zip(form, self.matrix):
            if c != 0:
                for j, r in enumerate(row):
                    if r != 0:
                        out[j] += c * r
        return tuple(out)

    def then(self, other: "LinearSubstitution") -> "LinearSubstitution":
        """Apply self, then other (other.source must equal self.target)."""
        if other.source != self.target:
            raise NamespaceMismatch("cannot compose substitutions")
        return LinearSubstitution(self.source, other.target,
                                  [other.compose_form(row) for row in self.matrix])

    def apply_point(self, point: Mapping[str, object]) -> dict[str, mpq]:
        """Values of the source variables at a point of the target space."""
        vals = [_q(point[v]) for v in self.target]
        return {s: sum((c * v for c, v in zip(row, vals)), mpq(0))
                for s, row in zip(self.source, self.matrix)}


def substitute_linear(p: Polynomial, sigma: LinearSubstitution) -> Polynomial:
    if p.variables != sigma.source:
        missing = set(p.variables) - set(sigma.source)
        if missing:
            raise UnassignedVariable(", ".join(sorted(missing)))
        raise NamespaceMismatch("substitution source differs from polynomial namespace")
    powers: dict[tuple[int, int], Polynomial] = {}
    result = Polynomial.zero(sigma.target)
    for e, c in p.terms.items():
        term = Polynomial.constant(sigma.target, c)
        for i, k in enumerate(e):
            if k:
                key = (i, k)
                if key not in powers:
                    powers[key] = linear_form_power(sigma.matrix[i], k, sigma.target)
                term = term * powers[key]
                if term.is_zero():
                    break
        result = result + term
    return result


def weighted_monomials(weights: Sequence[int], target: int) -> list[tuple[int, ...]]:
    """All exponent vectors e with sum(e_i * weights_i) == target, descending lex order."""
    weights = list(weights)
    out: list[tuple[int, ...]] = []

    def rec(i: int, rest: int, prefix: list[int]) -> None:
        if i == len(weights):
            if rest == 0:
                out.append(tuple(prefix))
            return
        for k in range(rest // weights[i], -1, -1):
            prefix.append(k)
            rec(i + 1, rest - k * weights[i], prefix)
            prefix.pop()

    if target < 0:
        return []
    rec(0, target, [])
    return out


class GeneratorExpression:
    """A polynomial in named, weighted generator symbols."""

    __slots__ = ("symbols", "weights", "terms")

    def __init__(self, symbols: Sequence[str], weights: Sequence[int],
                 terms: Mapping[tuple, object] | None = None):
        self.symbols = tuple(symbols)
        self.weights = tuple(weights)
        self.terms = {tuple(e): _q(c) for e, c in (terms or {}).items() if c != 0}

    def weight(self) -> int | None:
        ws = {sum(k * w for k, w in zip(e, self.weights)) for e in self.terms}
        if len(ws) > 1:
            raise PolyError("expression is not weighted-homogeneous")
        return ws.pop() if ws else None

    def linear_coefficient(self, symbol: str) -> mpq:
        if symbol not in self.symbols:
            raise UnknownSymbol(symbol)
        i = self.symbols.index(symbol)
        e = [0] * len(self.symbols)
        e[i] = 1
        return self.terms.get(tuple(e), mpq(0))

    def linear_part(self) -> dict[str, mpq]:
        out = {}
        for e, c in self.terms.items():
            if sum(e) == 1:
                out[self.symbols[e.index(1)]] = c
        return out

    def expand(self, polys: Sequence[Polynomial]) -> Polynomial:
        """Substitute generator polynomials (in symbol order) for the symbols."""
        if not polys:
            raise PolyError("no generator polynomials")
        result = Polynomial.zero(polys[0].variables)
        for e, c in self.terms.items():
            t = Polynomial.constant(polys[0].variables, c)
            for p, k in zip(polys, e):
                if k:
                    t = t * p ** k
            result = result + t
        return result

    def __eq__(self, other):
        return (isinstance(other, GeneratorExpression) and self.symbols == other.symbols
                and self.weights == other.weights and self.terms == other.terms)

    def __str__(self):
        if not self.terms:
            return "0"
        items = sorted(self.terms.items(), key=lambda t: (sum(t[0]), t[0]))
        chunks = []
        for e, c in items:
            mono = "*".join(s if k == 1 else f"{s}^{k}" for s, k in zip(self.symbols, e) if k)
            body = mono if abs(c) == 1 and mono else (
                f"{_fmt_coef(abs(c))}*{mono}" if mono else _fmt_coef(abs(c)))
            chunks.append((c < 0, body))
        s = ("-" if chunks[0][0] else "") + chunks[0][1]
        for neg, body in chunks[1:]:
            s += (" - " if neg else " + ") + body
        return s

    __repr__ = __str__


def linear_coefficient(expr: GeneratorExpression, symbol: str) -> mpq:
    return expr.linear_coefficient(symbol)


class GeneratorSet:
    """Named weighted generator polynomials with memoized monomial products."""

    def __init__(self, gens: Sequence[tuple[str, int, Polynomial]]):
        if not gens:
            raise PolyError("empty generator set")
        self.symbols = tuple(g[0] for g in gens)
        self.weights = tuple(int(g[1]) for g in gens)
        self.polys = tuple(g[2] for g in gens)
        self.variables = self.polys[0].variables
        for sym, w, p in gens:
            if p.variables != self.variables:
                raise NamespaceMismatch(f"generator {sym} lives in another namespace")
            if not p.is_homogeneous() or (p.terms and p.degree() != w):
                raise PolyError(f"generator {sym} is not homogeneous of weight {w}")
        self._products: dict[tuple, Polynomial] = {
            (0,) * len(self.symbols): Polynomial.constant(self.variables, 1)}

    def product(self, e: tuple) -> Polynomial:
        got = self._products.get(e)
        if got is not None:
            return got
        i = next(j for j, k in enumerate(e) if k)
        prev = list(e)
        prev[i] -= 1
        got = self.product(tuple(prev)) * self.polys[i]
        self._products[e] = got
        return got


def express_in_generators(R: Polynomial, gens) -> GeneratorExpression:
    """Write R as a polynomial in the generators by exact coefficient matching.

    ``gens`` is a list of (symbol, weight, polynomial) or a GeneratorSet. The
    returned expression expands back to R exactly; this is checked.
    """
    gs = gens if isinstance(gens, GeneratorSet) else GeneratorSet(gens)
    if R.variables != gs.variables:
        raise NamespaceMismatch("polynomial and generators use different namespaces")
    if not R.is_homogeneous():
        raise PolyError("polynomial is not homogeneous")
    if R.is_zero():
        return GeneratorExpression(gs.symbols, gs.weights)
    w = R.degree()
    monos = weighted_monomials(gs.weights, w)
    if not monos:
        raise NotInSubring(f"no generator monomials of weight {w}")
    expansions = [gs.product(e) for e in monos]
    n = len(monos)

    # one equation per polynomial monomial: sum_j a_j [m]expansion_j = [m]R
    columns: dict[tuple, dict[int, mpq]] = {}
    for j, p in enumerate(expansions):
        for m, c in p.terms.items():
            columns.setdefault(m, {})[j] = c
    for m in R.terms:
        columns.setdefault(m, {})

    pivots: dict[int, tuple[dict[int, mpq], mpq]] = {}
    order: list[int] = []
    for m in sorted(columns):
        row = dict(columns[m])
        rhs = R.terms.get(m, mpq(0))
        for pc in order:
            f = row.get(pc)
            if f:
                prow, prhs = pivots[pc]
                for j, v in prow.items():
                    nv = row.get(j, 0) - f * v
                    if nv:
                        row[j] = nv
                    else:
                        row.pop(j, None)
                rhs -= f * prhs
        if not row:
            if rhs != 0:
                raise NotInSubring(f"inconsistent at monomial {m}")
            continue
        pc = min(row)
        inv = 1 / row[pc]
        row = {j: v * inv for j, v in row.items()}
        rhs *= inv
        # keep earlier pivots reduced against the new one
        for qc in order:
            prow, prhs = pivots[qc]
            f = prow.get(pc)
            if f:
                new = dict(prow)
                for j, v in row.items():
                    nv = new.get(j, 0) - f * v
                    if nv:
                        new[j] = nv
                    else:
                        new.pop(j, None)
                pivots[qc] = (new, prhs - f * rhs)
        pivots[pc] = (row, rhs)
        order.append(pc)
        if len(order) == n:
            break

    if len(order) < n:
        dense = [[prow.get(j, mpq(0)) for j in range(n)] for prow, _ in pivots.values()]
        for v in nullspace(dense, n) if dense else [[mpq(1) if i == j else mpq(0) for i in range(n)]
                                                       for j in range(n)]:
            if any(v[j] != 0 and sum(monos[j]) == 1 for j in range(n)):
                raise AmbiguousExpression("linear part not determined by the generators")
    coeffs = [mpq(0)] * n
    for pc, (prow, prhs) in pivots.items():
        coeffs[pc] = prhs  # free columns are set to zero
    expr = GeneratorExpression(gs.symbols, gs.weights,
                               {e: c for e, c in zip(monos, coeffs) if c != 0})
    check = Polynomial.zero(R.variables)
    for e, c in expr.terms.items():
        check = check + gs.product(e).scale(c)
    if check != R:
        raise NotInSubring("coefficient match does not reproduce the polynomial")
    return expr
