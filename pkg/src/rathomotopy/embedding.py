"""Generalised symmetric spaces as fixed-point data, and coordinate restriction.

A space G/H is described by the ambient simple type, the category of the
automorphism (1: inner, 2: outer), the rank of the centre of H, and the simple
summands of H, each given by the Kac-basis rows that span its Cartan
subalgebra. The restriction map sends every ambient coordinate functional to a
linear form in the torus coordinates and the summands' own coordinates.

Summand blocks are computed rather than tabulated: the m-th chosen Kac row is
identified with the m-th simple coroot of the summand, after checking that the
Cartan matrices agree, and each ambient coordinate is solved for on that basis.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from typing import Callable, Iterable, Sequence

from gmpy2 import mpq

from .linalg import nullspace, rref, solve
from .liedata import (
    CoordinateFrame,
    InvariantGenerator,
    SimpleType,
    Unsupported,
    _generators_raw,
    bilinear,
    cartan_matrix,
    first_category_rows,
    frame_variables,
    gram_matrix,
    kac_basis_matrix,
)
from .poly import LinearSubstitution


class EmbeddingError(ValueError):
    pass


class UnlistedCase(EmbeddingError):
    """The chosen Kac rows do not span a subalgebra of the stated type."""


class RankMismatch(EmbeddingError):
    pass


class NotGeneralisedSymmetric(EmbeddingError):
    pass


class CatalogError(EmbeddingError):
    pass


@dataclass(frozen=True)
class SummandSpec:
    type: SimpleType
    basis_indices: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "basis_indices", tuple(self.basis_indices))
        if len(set(self.basis_indices)) != len(self.basis_indices):
            raise EmbeddingError("repeated basis index")
        if len(self.basis_indices) != self.type.rank:
            raise EmbeddingError(f"{self.type} needs {self.type.rank} basis rows, "
                                 f"got {len(self.basis_indices)}")


@dataclass(frozen=True)
class SpaceDescriptor:
    ambient: SimpleType
    category: int
    torus_rank: int
    summands: tuple[SummandSpec, ...] = ()
    name: str | None = None
    twist: int | None = None
    variant: str | None = None
    kac_type: tuple | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "summands", tuple(self.summands))
        if self.torus_rank < 0:
            raise EmbeddingError("negative torus rank")
        fr = self.frame()  # validates the (type, category, twist) triple
        used: set[int] = set()
        for s in self.summands:
            for i in s.basis_indices:
                if not 0 <= i < len(fr.rows):
                    raise EmbeddingError(f"basis index {i} out of range for {self.ambient}")
                if i in used:
                    raise EmbeddingError(f"basis index {i} used twice")
                used.add(i)
        if self.rank_h > fixed_rank(fr):
            raise EmbeddingError("rank of H exceeds the rank of the fixed Cartan subalgebra")

    def frame(self) -> CoordinateFrame:
        return kac_basis_matrix(self.ambient, self.category, twist=self.twist, variant=self.variant)

    @property
    def rank_h(self) -> int:
        return self.torus_rank + sum(s.type.rank for s in self.summands)

    def label(self) -> str:
        return self.name or render_generic(self)


def render_generic(space: SpaceDescriptor) -> str:
    parts = [f"g={space.ambient}", f"cat={space.category}"]
    if space.twist not in (None, 1, 2):
        parts.append(f"twist={space.twist}")
    if space.variant:
        parts.append(f"variant={space.variant}")
    parts.append(f"torus={space.torus_rank}")
    inner = ",".join(f"({s.type},[{','.join(map(str, s.basis_indices))}])" for s in space.summands)
    parts.append(f"summands=[{inner}]")
    return "; ".join(parts)


def fixed_rank(frame: CoordinateFrame) -> int:
    return len(rref(frame.rows)[1])


# -- summand frames ------------------------------------------------------------


@dataclass(frozen=True)
class SummandFrame:
    """A simple type's own coroots H_1..H_l in an independent set of its coordinates."""
    family: str
    rank: int
    canonical: tuple[str, ...]
    rows: tuple[tuple[mpq, ...], ...]
    reduced: tuple[str, ...]
    reduction: LinearSubstitution  # canonical coordinates -> reduced coordinates
    pivots: tuple[int, ...]

    def cartan(self) -> list[list[mpq]]:
        return cartan_matrix(self.rows, gram_matrix(self.family, self.rank))

    def generators(self) -> list[InvariantGenerator]:
        return [g.restrict(self.reduction) for g in _generators_raw(self.family, self.rank, "standard")]

    @property
    def type_name(self) -> str:
        return f"{self.family}{self.rank}"


def _reduced_name(v: str) -> str:
    return "yeps" if v == "eps" else "y" + v[1:]


@lru_cache(maxsize=None)
def summand_frame(family: str, rank: int) -> SummandFrame:
    canonical = frame_variables(family, rank)
    rows = tuple(first_category_rows(family, rank)[1:])
    cols = list(zip(*rows))
    pivots = tuple(_independent_columns(cols, rank))
    base = [[cols[j][m] for j in pivots] for m in range(rank)]  # l x l
    reduced = tuple(_reduced_name(canonical[j]) for j in pivots)
    matrix = []
    for j in range(len(canonical)):
        matrix.append(solve(base, [cols[j][m] for m in range(rank)]))
    return SummandFrame(family, rank, canonical, rows, reduced,
                        LinearSubstitution(canonical, reduced, matrix), pivots)


def _independent_columns(cols: Sequence[Sequence], rank: int) -> list[int]:
    chosen: list[int] = []
    for j in range(len(cols)):
        trial = [list(cols[i]) for i in chosen + [j]]
        if len(rref(trial)[1]) == len(trial):
            chosen.append(j)
        if len(chosen) == rank:
            return chosen
    raise EmbeddingError("coroot rows are dependent")


def _candidates(l: int) -> list[tuple[str, int]]:
    out = [("A", l)]
    if l >= 2:
        out.append(("B", l))
    if l >= 3:
        out.append(("C", l))
    if l >= 4:
        out.append(("D", l))
    if l == 2:
        out.append(("G", 2))
    if l == 4:
        out.append(("F", 4))
    if l in (6, 7, 8):
        out.append(("E", l))
    return out


def _matchings(big: Sequence[Sequence], nodes: Sequence[int], small: Sequence[Sequence],
               first_only: bool = True) -> list[tuple[int, ...]]:
    """Orderings pi of ``nodes`` with big[pi[a]][pi[b]] == small[a][b]."""
    l = len(small)
    found: list[tuple[int, ...]] = []
    chosen: list[int] = []

    def rec(a: int) -> bool:
        if a == l:
            found.append(tuple(chosen))
            return first_only
        for v in nodes:
            if v in chosen:
                continue
            if big[v][v] != small[a][a]:
                continue
            if all(big[v][chosen[b]] == small[a][b] and big[chosen[b]][v] == small[b][a]
                   for b in range(a)):
                chosen.append(v)
                if rec(a + 1):
                    return True
                chosen.pop()
        return False

    rec(0)
    return found


def affine_cartan(frame: CoordinateFrame) -> list[list[mpq]]:
    return cartan_matrix(frame.rows, frame.gram())


def components(cartan: Sequence[Sequence], nodes: Iterable[int]) -> list[list[int]]:
    nodes = sorted(nodes)
    seen: set[int] = set()
    out = []
    for v in nodes:
        if v in seen:
            continue
        comp, stack = [], [v]
        seen.add(v)
        while stack:
            u = stack.pop()
            comp.append(u)
            for w in nodes:
                if w not in seen and cartan[u][w] != 0:
                    seen.add(w)
                    stack.append(w)
        out.append(sorted(comp))
    return out


def identify(frame: CoordinateFrame, nodes: Iterable[int]) -> list[SummandSpec]:
    """Split kept Kac nodes into simple summands with canonical type and ordering."""
    cart = affine_cartan(frame)
    specs = []
    for comp in components(cart, nodes):
        for fam, rk in _candidates(len(comp)):
            order = _matchings(cart, comp, summand_frame(fam, rk).cartan())
            if order:
                specs.append(SummandSpec(SimpleType(fam, rk), order[0]))
                break
        else:
            raise UnlistedCase(f"nodes {comp} of {frame.simple_type} match no simple type")
    return specs


def diagram_automorphisms(frame: CoordinateFrame) -> list[tuple[int, ...]]:
    cart = affine_cartan(frame)
    nodes = list(range(len(cart)))
    return _matchings(cart, nodes, cart, first_only=False)


# -- restriction ---------------------------------------------------------------


def restriction_block(frame: CoordinateFrame, indices: Sequence[int],
                      family: str, rank: int) -> LinearSubstitution:
    """Ambient coordinates -> reduced coordinates of the summand spanned by ``indices``.

    The summand type may be any (family, rank) with a frame, including the
    small-rank aliases D3, D2, C2, B1 that canonical identification never produces.
    """
    sf = summand_frame(family, rank)
    if len(indices) != rank:
        raise UnlistedCase(f"{family}{rank} needs {rank} rows, got {len(indices)}")
    cart = affine_cartan(frame)
    own = sf.cartan()
    for a, i in enumerate(indices):
        for b, j in enumerate(indices):
            if cart[i][j] != own[a][b]:
                raise UnlistedCase(
                    f"rows {list(indices)} of {frame.simple_type} (category {frame.category}) "
                    f"do not span {family}{rank} in this order")
    base = [[sf.rows[m][j] for j in sf.pivots] for m in range(rank)]
    matrix = []
    for j in range(len(frame.variables)):
        matrix.append(solve(base, [frame.rows[i][j] for i in indices]))
    return LinearSubstitution(frame.variables, sf.reduced, matrix)


def classical_restriction(ambient: SimpleType, category: int, s: SummandSpec,
                          twist: int | None = None) -> LinearSubstitution:
    if ambient.is_exceptional:
        raise UnlistedCase(f"{ambient} is exceptional")
    fr = kac_basis_matrix(ambient, category, twist=twist)
    return restriction_block(fr, s.basis_indices, s.type.family, s.type.rank)


def exceptional_restriction(ambient: SimpleType, category: int, s: SummandSpec,
                            twist: int | None = None, variant: str | None = None
                            ) -> LinearSubstitution:
    if not ambient.is_exceptional and not (twist == 3 and ambient == SimpleType("D", 4)):
        raise UnlistedCase(f"{ambient} is classical")
    fr = kac_basis_matrix(ambient, category, twist=twist, variant=variant)
    return restriction_block(fr, s.basis_indices, s.type.family, s.type.rank)


def torus_basis(frame: CoordinateFrame, summand_rows: Sequence[int]) -> list[list[mpq]]:
    """Basis of the orthogonal complement of the summand coroots in the fixed Cartan."""
    g = frame.gram()
    rows = [list(r) for r in frame.rows]
    if summand_rows:
        eqs = [[bilinear(g, r, rows[s]) for r in rows] for s in summand_rows]
        coeffs = nullspace(eqs, len(rows))
    else:
        coeffs = [[mpq(int(i == j)) for j in range(len(rows))] for i in range(len(rows))]
    vecs = [[sum((c[i] * rows[i][j] for i in range(len(rows))), mpq(0))
             for j in range(len(frame.variables))] for c in coeffs]
    return rref(vecs)[0] if vecs else []


@dataclass(frozen=True)
class RestrictionMap:
    substitution: LinearSubstitution
    torus_variables: tuple[str, ...]
    summand_variables: tuple[tuple[str, ...], ...]
    summand_frames: tuple[SummandFrame, ...]


def flip_allowed(family: str, rank: int, flipped: frozenset | str) -> bool:
    """Coordinate sign changes that act as automorphisms of the invariant ring."""
    if flipped == "all" or not flipped:
        return True
    if len(flipped) == rank:
        return True
    return family in "BCDF" or (family == "A" and rank == 1)


def _summand_vars(i: int, names: Sequence[str], multi: bool) -> tuple[str, ...]:
    return tuple(f"{n}_{i + 1}" if multi else n for n in names)


def full_restriction(space: SpaceDescriptor, flips: dict | None = None) -> RestrictionMap:
    """The map from ambient coordinates to torus plus summand coordinates.

    ``flips`` optionally maps a summand index to the reduced coordinate indices
    whose sign is reversed (or "all").
    """
    fr = space.frame()
    blocks = [restriction_block(fr, s.basis_indices, s.type.family, s.type.rank)
              for s in space.summands]
    used = [i for s in space.summands for i in s.basis_indices]
    if space.torus_rank == 0 and not space.summands:
        xi: list = []
    else:
        xi = torus_basis(fr, used)
        if len(xi) != space.torus_rank:
            raise RankMismatch(f"the fixed Cartan complement has dimension {len(xi)}, "
                               f"descriptor says {space.torus_rank}")
    multi = len(blocks) > 1
    torus_vars = tuple(f"u{a + 1}" for a in range(len(xi)))
    svars = tuple(_summand_vars(i, b.target, multi) for i, b in enumerate(blocks))
    target = torus_vars + tuple(v for names in svars for v in names)
    flips = flips or {}
    matrix = []
    for j in range(len(fr.variables)):
        row = [xi[a][j] for a in range(len(xi))]
        for i, b in enumerate(blocks):
            f = flips.get(i)
            sub = list(b.matrix[j])
            if f:
                s = space.summands[i].type
                if not flip_allowed(s.family, s.rank, f if f == "all" else frozenset(f)):
                    raise EmbeddingError(f"sign change {f} is not a symmetry of {s}")
                idx = range(len(sub)) if f == "all" else f
                for k in idx:
                    sub[k] = -sub[k]
            row.extend(sub)
        matrix.append(row)
    frames = tuple(summand_frame(s.type.family, s.type.rank) for s in space.summands)
    return RestrictionMap(LinearSubstitution(fr.variables, target, matrix), torus_vars, svars, frames)


def check_generalised_symmetric(space: SpaceDescriptor) -> None:
    """Raise unless the data is the fixed-point data of a finite-order automorphism."""
    fr = space.frame()
    cart = affine_cartan(fr)
    used: list[int] = []
    for s in space.summands:
        comp = components(cart, s.basis_indices)
        if len(comp) != 1:
            raise NotGeneralisedSymmetric(f"rows {s.basis_indices} are not connected")
        try:
            restriction_block(fr, s.basis_indices, s.type.family, s.type.rank)
        except UnlistedCase as exc:
            raise NotGeneralisedSymmetric(str(exc)) from None
        used.extend(s.basis_indices)
    for a, b in combinations(range(len(space.summands)), 2):
        for i in space.summands[a].basis_indices:
            for j in space.summands[b].basis_indices:
                if cart[i][j] != 0:
                    raise NotGeneralisedSymmetric("two summands are joined in the Kac diagram")
    removed = len(fr.rows) - len(used)
    if removed < 1:
        raise NotGeneralisedSymmetric("no Kac node removed")
    if space.torus_rank != removed - 1:
        raise NotGeneralisedSymmetric(
            f"torus rank {space.torus_rank} differs from removed nodes minus one ({removed - 1})")


def descriptor_from_removed(ambient: SimpleType, category: int, removed: Iterable[int],
                            twist: int | None = None, name: str | None = None,
                            variant: str | None = None) -> SpaceDescriptor:
    fr = kac_basis_matrix(ambient, category, twist=twist, variant=variant)
    removed = sorted(set(removed))
    if not removed:
        raise EmbeddingError("at least one Kac node must be removed")
    kept = [i for i in range(len(fr.rows)) if i not in removed]
    specs = identify(fr, kept)
    return SpaceDescriptor(ambient, category, len(removed) - 1, tuple(specs), name=name,
                           twist=twist, variant=variant)


def enumerate_fixed_point_data(ambient: SimpleType, category: int = 1,
                               twist: int | None = None) -> list[SpaceDescriptor]:
    """Every removed-node set up to diagram automorphisms."""
    fr = kac_basis_matrix(ambient, category, twist=twist)
    autos = diagram_automorphisms(fr)
    n = len(fr.rows)
    seen = set()
    out = []
    for size in range(1, n + 1):
        for removed in combinations(range(n), size):
            key = min(tuple(sorted(p[i] for i in removed)) for p in autos)
            if key in seen:
                continue
            seen.add(key)
            out.append(descriptor_from_removed(ambient, category, key, twist=twist))
    return out


# -- catalog -------------------------------------------------------------------

T = SimpleType


@dataclass(frozen=True)
class Family:
    key: str
    params: tuple[str, ...]
    constraint: str
    valid: Callable[..., bool]
    build: Callable[..., SpaceDescriptor]
    label: Callable[..., str]
    theorem_only: bool = False
    symmetric: bool = True

    def instantiate(self, **params) -> SpaceDescriptor:
        if set(params) != set(self.params):
            raise CatalogError(f"{self.key} takes parameters {self.params}, got {sorted(params)}")
        if not self.valid(**params):
            raise CatalogError(f"{self.key}: parameters {params} outside {self.constraint}")
        return self.build(**params)

    def display(self) -> str:
        s = self.key + (f" ({self.constraint})" if self.constraint else "")
        return s + (" [theorem only]" if self.theorem_only else "")

    def ambient_rank(self, **params) -> int:
        return self.build(**params).ambient.rank


def _rm(amb, cat, removed, name, twist=None):
    return descriptor_from_removed(amb, cat, removed, twist=twist, name=name)


def _sphere_odd(n: int) -> SpaceDescriptor:
    name = f"SO({2 * n})/SO({2 * n - 1})"
    if n == 2:  # S^3 is the group SU(2) itself
        return SpaceDescriptor(T("A", 1), 1, 0, (), name=name)
    if n == 3:  # SO(6)/SO(5) = SU(4)/Sp(2)
        return _rm(T("A", 3), 2, [0], name)
    return _rm(T("D", n), 2, [0], name)


def _sp_ambient(n: int) -> SimpleType:
    # Sp(2) is realised through the isomorphic Spin(5)
    return T("B", 2) if n == 2 else T("C", n)


def _sp_u(n: int) -> SpaceDescriptor:
    name = f"Sp({n})/U({n})"
    if n == 2:
        return _rm(T("B", 2), 1, [0, 1], name)
    return _rm(T("C", n), 1, [0, n], name)


def _sp_sp(n: int, k: int) -> SpaceDescriptor:
    name = f"Sp({n})/Sp({k})×Sp({n - k})"
    if n == 2:
        return _rm(T("B", 2), 1, [2], name)
    return _rm(T("C", n), 1, [k], name)


def _exceptional(key: str, amb: SimpleType, cat: int, removed: Sequence[int], *, theorem_only=False,
                 twist=None, symmetric=True) -> Family:
    return Family(key, (), "", lambda: True,
                  lambda: _rm(amb, cat, removed, key, twist), lambda: key, theorem_only, symmetric)


def _catalog() -> list[Family]:
    fams = [
        Family("SU(2n+1)/SO(2n+1)", ("n",), "n≥1", lambda n: n >= 1,
               lambda n: _rm(T("A", 2 * n), 2, [0], f"SU({2 * n + 1})/SO({2 * n + 1})"),
               lambda n: f"SU({2 * n + 1})/SO({2 * n + 1})"),
        Family("SU(2n)/SO(2n)", ("n",), "n≥2", lambda n: n >= 2,
               lambda n: _rm(T("A", 2 * n - 1), 2, [n], f"SU({2 * n})/SO({2 * n})"),
               lambda n: f"SU({2 * n})/SO({2 * n})"),
        Family("SU(2n)/Sp(n)", ("n",), "n≥2", lambda n: n >= 2,
               lambda n: _rm(T("A", 2 * n - 1), 2, [0], f"SU({2 * n})/Sp({n})"),
               lambda n: f"SU({2 * n})/Sp({n})"),
        Family("U(n+1)/U(k)×U(n-k+1)", ("n", "k"), "n≥1, 1≤k≤(n+1)/2",
               lambda n, k: n >= 1 and 1 <= k and 2 * k <= n + 1,
               lambda n, k: _rm(T("A", n), 1, [0, k], f"U({n + 1})/U({k})×U({n - k + 1})"),
               lambda n, k: f"U({n + 1})/U({k})×U({n - k + 1})"),
        Family("SO(2n+1)/SO(2)×SO(2n-1)", ("n",), "n≥2", lambda n: n >= 2,
               lambda n: _rm(T("B", n), 1, [0, 1], f"SO({2 * n + 1})/SO(2)×SO({2 * n - 1})"),
               lambda n: f"SO({2 * n + 1})/SO(2)×SO({2 * n - 1})"),
        Family("SO(2n+1)/SO(2k)×SO(2n+1-2k)", ("n", "k"), "n≥3, 2≤k≤(n+1)/2",
               lambda n, k: n >= 3 and 2 <= k and 2 * k <= n + 1,
               lambda n, k: _rm(T("B", n), 1, [k], f"SO({2 * n + 1})/SO({2 * k})×SO({2 * n + 1 - 2 * k})"),
               lambda n, k: f"SO({2 * n + 1})/SO({2 * k})×SO({2 * n + 1 - 2 * k})"),
        Family("SO(2n+1)/SO(2n)", ("n",), "n≥2", lambda n: n >= 2,
               lambda n: _rm(T("B", n), 1, [n], f"SO({2 * n + 1})/SO({2 * n})"),
               lambda n: f"SO({2 * n + 1})/SO({2 * n})"),
        Family("Sp(n)/U(n)", ("n",), "n≥2", lambda n: n >= 2, _sp_u, lambda n: f"Sp({n})/U({n})"),
        Family("Sp(n)/Sp(k)×Sp(n-k)", ("n", "k"), "n≥2, 1≤k≤n/2",
               lambda n, k: n >= 2 and 1 <= k and 2 * k <= n, _sp_sp,
               lambda n, k: f"Sp({n})/Sp({k})×Sp({n - k})"),
        Family("SO(2n)/SO(2)×SO(2n-2)", ("n",), "n≥4", lambda n: n >= 4,
               lambda n: _rm(T("D", n), 1, [0, 1], f"SO({2 * n})/SO(2)×SO({2 * n - 2})"),
               lambda n: f"SO({2 * n})/SO(2)×SO({2 * n - 2})"),
        Family("SO(2n)/SO(2k)×SO(2n-2k)", ("n", "k"), "n≥4, 2≤k≤n/2",
               lambda n, k: n >= 4 and 2 <= k and 2 * k <= n,
               lambda n, k: _rm(T("D", n), 1, [k], f"SO({2 * n})/SO({2 * k})×SO({2 * n - 2 * k})"),
               lambda n, k: f"SO({2 * n})/SO({2 * k})×SO({2 * n - 2 * k})"),
        Family("SO(2n)/SO(2k+1)×SO(2n-2k-1)", ("n", "k"), "n≥4, 1≤k≤(n-1)/2",
               lambda n, k: n >= 4 and 1 <= k and 2 * k <= n - 1,
               lambda n, k: _rm(T("D", n), 2, [k], f"SO({2 * n})/SO({2 * k + 1})×SO({2 * n - 2 * k - 1})"),
               lambda n, k: f"SO({2 * n})/SO({2 * k + 1})×SO({2 * n - 2 * k - 1})"),
        Family("SO(2n)/SO(2n-1)", ("n",), "n≥2", lambda n: n >= 2, _sphere_odd,
               lambda n: f"SO({2 * n})/SO({2 * n - 1})"),
        Family("SO(2n)/U(n)", ("n",), "n≥4", lambda n: n >= 4,
               lambda n: _rm(T("D", n), 1, [0, n], f"SO({2 * n})/U({n})"),
               lambda n: f"SO({2 * n})/U({n})"),
        _exceptional("G2/SO(4)", T("G", 2), 1, [2]),
        _exceptional("F4/SU(2)·Sp(3)", T("F", 4), 1, [4]),
        _exceptional("F4/Spin(9)", T("F", 4), 1, [1]),
        _exceptional("E6/PSp(4)", T("E", 6), 2, [4]),
        _exceptional("E6/F4", T("E", 6), 2, [0]),
        _exceptional("E6/SU(2)·SU(6)", T("E", 6), 1, [6]),
        _exceptional("AdE6/T1·Spin(10)", T("E", 6), 1, [0, 1]),
        _exceptional("E7/SU(8)", T("E", 7), 1, [7], theorem_only=True),
        _exceptional("E7/SU(2)·Spin(12)", T("E", 7), 1, [6], theorem_only=True),
        _exceptional("AdE7/T1·E6", T("E", 7), 1, [0, 1], theorem_only=True),
        _exceptional("E8/SO(16)", T("E", 8), 1, [7], theorem_only=True),
        _exceptional("E8/SU(2)·E7", T("E", 8), 1, [1], theorem_only=True),
        _exceptional("D4/G2", T("D", 4), 2, [0], twist=3, symmetric=False),
    ]
    return fams


_CATALOG: list[Family] | None = None


def catalog() -> list[Family]:
    global _CATALOG
    if _CATALOG is None:
        _CATALOG = _catalog()
    return list(_CATALOG)


def normalize_name(text: str) -> str:
    table = str.maketrans({"×": "x", "·": "x", "*": "x", "−": "-", "₀": "0", "₁": "1", "₂": "2",
                           "₃": "3", "₄": "4", "₅": "5", "₆": "6", "₇": "7", "₈": "8", "₉": "9",
                           "¹": "1"})
    s = re.sub(r"\s+", "", text.translate(table))
    return s.lower()


def find_family(key: str) -> Family:
    want = normalize_name(key)
    for f in catalog():
        if normalize_name(f.key) == want:
            return f
    raise CatalogError(f"unknown family {key!r}")


def instances(max_rank: int) -> list[tuple[Family, dict, SpaceDescriptor]]:
    """All catalog instances whose ambient rank is at most ``max_rank``, in catalog order."""
    out = []
    for fam in catalog():
        if not fam.params:
            d = fam.build()
            if d.ambient.rank <= max_rank:
                out.append((fam, {}, d))
            continue
        for n in range(1, max_rank + 2):
            ks = range(1, n + 2) if "k" in fam.params else [None]
            for k in ks:
                p = {"n": n} if k is None else {"n": n, "k": k}
                if not fam.valid(**p):
                    continue
                d = fam.build(**p)
                if d.ambient.rank <= max_rank:
                    out.append((fam, p, d))
    return out
