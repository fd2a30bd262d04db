"""Cartan algebras of homogeneous spaces and one-pass Sullivan reduction.

A free CGDA here has even generators Q (cohomological degree 2w), odd
generators z (degree 2w - 1) and a differential that sends each z to a
polynomial in the Q's. Only the linear part of the differential matters for
the homotopy ranks: per weight w, the rank of the matrix of linear
coefficients cancels that many even and odd generators.

For a Cartan algebra the differential of z is recorded through its
projections onto the invariant rings of the simple factors of H. Cross terms
between factors are never linear, so the projections carry the whole linear
part. Factors without a generator of the relevant weight are skipped unless
``full=True``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from gmpy2 import mpq

from .embedding import SpaceDescriptor, full_restriction
from .linalg import rank
from .liedata import InvariantGenerator
from .poly import (
    GeneratorExpression,
    GeneratorSet,
    LinearSubstitution,
    PolyError,
    express_in_generators,
)


class CGDAError(ValueError):
    pass


class FixtureParseError(CGDAError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass(frozen=True)
class FreeCGDA:
    even: tuple[tuple[str, int], ...]
    odd: tuple[tuple[str, int], ...]
    differential: Mapping[str, tuple[GeneratorExpression, ...]] = field(default_factory=dict)

    def __post_init__(self):
        evens = {s for s, _ in self.even}
        odds = {s for s, _ in self.odd}
        if len(evens) != len(self.even) or len(odds) != len(self.odd) or evens & odds:
            raise CGDAError("generator symbols must be distinct")
        for s, w in self.odd:
            if w < 2:
                raise CGDAError(f"odd generator {s} of weight {w}: not simply connected")
        for s, w in self.even:
            if w < 1:
                raise CGDAError(f"even generator {s} of weight {w}")
        weight = dict(self.odd)
        for z, parts in self.differential.items():
            if z not in weight:
                raise CGDAError(f"differential given for {z}, which is not an odd generator")
            for e in parts:
                # d lands in the even part only, so d o d = 0 automatically
                if not set(e.symbols) <= evens:
                    raise CGDAError(f"d({z}) involves non-even symbols")
                ew = e.weight()
                if ew is not None and ew != weight[z]:
                    raise CGDAError(f"d({z}) has weight {ew}, expected {weight[z]}")

    def weights(self) -> list[int]:
        return sorted({w for _, w in self.even} | {w for _, w in self.odd})


@dataclass(frozen=True)
class MinimalModelSignature:
    even: Mapping[int, int]  # cohomological degree -> multiplicity
    odd: Mapping[int, int]


class RankTable:
    """q -> dim pi_q (x) Q, zero entries dropped."""

    __slots__ = ("_entries",)

    def __init__(self, entries: Mapping[int, int] | Iterable[tuple[int, int]] = ()):
        items = entries.items() if isinstance(entries, Mapping) else entries
        clean: dict[int, int] = {}
        for q, d in items:
            if d < 0:
                raise CGDAError(f"negative rank at q={q}")
            if d:
                clean[int(q)] = clean.get(int(q), 0) + int(d)
        self._entries = dict(sorted(clean.items()))

    def __getitem__(self, q: int) -> int:
        return self._entries.get(q, 0)

    def items(self):
        return self._entries.items()

    def degrees(self) -> list[int]:
        return list(self._entries)

    def as_dict(self) -> dict[int, int]:
        return dict(self._entries)

    def even_total(self) -> int:
        return sum(d for q, d in self._entries.items() if q % 2 == 0)

    def odd_total(self) -> int:
        return sum(d for q, d in self._entries.items() if q % 2 == 1)

    def first_difference(self, other: "RankTable") -> int | None:
        qs = sorted(set(self._entries) | set(other._entries))
        return next((q for q in qs if self[q] != other[q]), None)

    def __eq__(self, other):
        if isinstance(other, RankTable):
            return self._entries == other._entries
        if isinstance(other, Mapping):
            return self == RankTable(other)
        return NotImplemented

    def __len__(self):
        return len(self._entries)

    def __repr__(self):
        return f"RankTable({self._entries})"


def _even_symbol(gen_symbol: str, summand: int, multi: bool) -> str:
    base = "Q" + gen_symbol[1:]
    return f"{base}_{summand + 1}" if multi else base


def _odd_symbol(gen_symbol: str) -> str:
    return "z" + gen_symbol[1:]


def _block_substitution(sub: LinearSubstitution, names: Sequence[str]) -> LinearSubstitution:
    cols = [sub.target.index(v) for v in names]
    return LinearSubstitution(sub.source, names, [[row[c] for c in cols] for row in sub.matrix])


def build_cartan_algebra(space: SpaceDescriptor, *, full: bool = False,
                         flips: dict | None = None) -> FreeCGDA:
    """Cartan algebra H*(BH) (x) H*(G) with d z = rho*(P) written in H's generators."""
    frame = space.frame()
    ambient_gens = frame.generators()
    rmap = full_restriction(space, flips)
    multi = len(space.summands) > 1
    even: list[tuple[str, int]] = [(u, 1) for u in rmap.torus_variables]
    blocks = []
    for i, (names, sf) in enumerate(zip(rmap.summand_variables, rmap.summand_frames)):
        own = [InvariantGenerator(_even_symbol(g.symbol, i, multi), g.weight, names, g.parts)
               for g in sf.generators()]
        even.extend((g.symbol, g.weight) for g in own)
        gset = GeneratorSet([g.entry() for g in own])
        blocks.append((_block_substitution(rmap.substitution, names), own, gset))
    odd = [(_odd_symbol(g.symbol), g.weight) for g in ambient_gens]
    differential: dict[str, tuple[GeneratorExpression, ...]] = {}
    for g, (z, w) in zip(ambient_gens, odd):
        parts = []
        for sub, own, gset in blocks:
            if not full and all(h.weight != w for h in own):
                continue
            restricted = g.restrict(sub).polynomial
            parts.append(express_in_generators(restricted, gset))
        differential[z] = tuple(parts)
    return FreeCGDA(tuple(even), tuple(odd), differential)


def delta_matrix(c: FreeCGDA, w: int) -> list[list[mpq]]:
    """Linear coefficients of d(z) on the even generators, both of weight w."""
    zs = [s for s, k in c.odd if k == w]
    qs = [s for s, k in c.even if k == w]
    out = []
    for z in zs:
        row = []
        for q in qs:
            coef = mpq(0)
            for e in c.differential.get(z, ()):
                if q in e.symbols:
                    coef += e.linear_coefficient(q)
            row.append(coef)
        out.append(row)
    return out


def sullivan_reduce(c: FreeCGDA) -> MinimalModelSignature:
    """Dimensions of V' per degree from the ranks of the weight-graded delta.

    d vanishes on even generators and sends odd ones into the even part, so
    ker/im of delta in each weight is already the indecomposable part of the
    minimal model; no second pass is needed.
    """
    even: dict[int, int] = {}
    odd: dict[int, int] = {}
    for w in c.weights():
        m = delta_matrix(c, w)
        r = rank(m) if m and m[0] else 0
        ne = sum(1 for _, k in c.even if k == w) - r
        no = sum(1 for _, k in c.odd if k == w) - r
        if ne:
            even[2 * w] = ne
        if no:
            odd[2 * w - 1] = no
    return MinimalModelSignature(even, odd)


def homotopy_ranks(sig: MinimalModelSignature) -> RankTable:
    return RankTable({**sig.even, **sig.odd})


# -- text fixtures --------------------------------------------------------------

_SYMBOL = r"[A-Za-z][A-Za-z0-9_']*"


def _merged(parts: Sequence[GeneratorExpression], evens: Sequence[tuple[str, int]]
            ) -> GeneratorExpression:
    symbols = [s for s, _ in evens]
    weights = [w for _, w in evens]
    terms: dict[tuple, mpq] = {}
    for e in parts:
        pos = [symbols.index(s) for s in e.symbols]
        for exps, coef in e.terms.items():
            full = [0] * len(symbols)
            for p, k in zip(pos, exps):
                full[p] = k
            key = tuple(full)
            terms[key] = terms.get(key, mpq(0)) + coef
    return GeneratorExpression(symbols, weights, terms)


def _render(expr: GeneratorExpression) -> str:
    items = sorted(expr.terms.items(), key=lambda t: (sum(t[0]), [-k for k in t[0]]))
    out = []
    for exps, c in items:
        mono = "*".join(s if k == 1 else f"{s}^{k}" for s, k in zip(expr.symbols, exps) if k)
        mag = abs(c)
        num = str(mag.numerator) if mag.denominator == 1 else f"{mag.numerator}/{mag.denominator}"
        body = mono if mag == 1 else f"{num}*{mono}"
        out.append(("- " if c < 0 else "+ ") + body)
    if not out:
        return "0"
    s = " ".join(out)
    return s[2:] if s.startswith("+ ") else "-" + s[2:]


def dumps(c: FreeCGDA) -> str:
    lines = [f"even {s} {w}" for s, w in c.even]
    lines += [f"odd {s} {w}" for s, w in c.odd]
    for z, _ in c.odd:
        parts = c.differential.get(z, ())
        if parts:
            lines.append(f"d {z} = {_render(_merged(parts, c.even))}")
    return "\n".join(lines) + "\n"


_TOKEN = re.compile(rf"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<sym>{_SYMBOL})|(?P<op>[-+*^]))")


def parse_expression(text: str, evens: Sequence[tuple[str, int]], line: int = 0
                     ) -> GeneratorExpression:
    symbols = [s for s, _ in evens]
    pos = 0
    tokens = []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise FixtureParseError(f"unexpected character at column {pos + 1}: {text[pos:]!r}", line)
        kind = m.lastgroup
        tokens.append((kind, m.group(kind)))
        pos = m.end()
    if tokens == [("num", "0")]:
        return GeneratorExpression(symbols, [w for _, w in evens])
    terms: dict[tuple, mpq] = {}
    i = 0
    sign = 1
    expect_term = True
    while i < len(tokens):
        kind, val = tokens[i]
        if kind == "op" and val in "+-" and expect_term:
            sign = -sign if val == "-" else sign
            i += 1
            continue
        if not expect_term:
            if kind == "op" and val in "+-":
                sign = -1 if val == "-" else 1
                expect_term = True
                i += 1
                continue
            raise FixtureParseError(f"expected + or -, got {val!r}", line)
        coef = mpq(sign)
        exps = [0] * len(symbols)
        need_factor = True
        while i < len(tokens) and need_factor:
            kind, val = tokens[i]
            if kind == "num":
                coef *= mpq(val)
                i += 1
            elif kind == "sym":
                if val not in symbols:
                    raise FixtureParseError(f"unknown even generator {val!r}", line)
                k = 1
                i += 1
                if i < len(tokens) and tokens[i] == ("op", "^"):
                    if i + 1 >= len(tokens) or tokens[i + 1][0] != "num" or "/" in tokens[i + 1][1]:
                        raise FixtureParseError("exponent must be a non-negative integer", line)
                    k = int(tokens[i + 1][1])
                    i += 2
                exps[symbols.index(val)] += k
            else:
                raise FixtureParseError(f"unexpected {val!r}", line)
            if i < len(tokens) and tokens[i] == ("op", "*"):
                i += 1
            else:
                need_factor = False
        key = tuple(exps)
        terms[key] = terms.get(key, mpq(0)) + coef
        sign = 1
        expect_term = False
    if expect_term:
        raise FixtureParseError("expression ends with an operator", line)
    return GeneratorExpression(symbols, [w for _, w in evens], terms)


def loads(text: str) -> FreeCGDA:
    even: list[tuple[str, int]] = []
    odd: list[tuple[str, int]] = []
    diffs: list[tuple[int, str, str]] = []
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = re.fullmatch(rf"(even|odd)\s+({_SYMBOL})\s+(\d+)", line)
        if m:
            (even if m.group(1) == "even" else odd).append((m.group(2), int(m.group(3))))
            continue
        m = re.fullmatch(rf"d\s+({_SYMBOL})\s*=\s*(.+)", line)
        if m:
            diffs.append((n, m.group(1), m.group(2)))
            continue
        raise FixtureParseError(f"cannot parse {raw!r}", n)
    odd_names = {s for s, _ in odd}
    differential = {}
    for n, z, body in diffs:
        if z not in odd_names:
            raise FixtureParseError(f"{z} is not an odd generator", n)
        if z in differential:
            raise FixtureParseError(f"second differential for {z}", n)
        differential[z] = (parse_expression(body, even, n),)
    try:
        return FreeCGDA(tuple(even), tuple(odd), differential)
    except CGDAError as exc:
        raise FixtureParseError(str(exc), 0) from None
