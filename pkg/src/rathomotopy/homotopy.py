"""Rational homotopy ranks of generalised symmetric spaces, two ways.

The theorem path reads the ranks off the exponents of G and H. The Cartan
path builds the Cartan algebra and reduces it. ``cross_check`` runs both.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .cgda import RankTable, build_cartan_algebra, delta_matrix, homotopy_ranks, sullivan_reduce
from .embedding import (
    NotGeneralisedSymmetric,
    SpaceDescriptor,
    check_generalised_symmetric,
    instances,
)
from .linalg import rank
from .liedata import ExponentMultiset, SimpleType, Unsupported, exponents

__all__ = [
    "MethodReport", "NotGeneralisedSymmetric", "ranks_via_theorem", "ranks_via_cartan",
    "theorem_with_notes", "cartan_with_notes", "flag_ranks", "tncz_ranks",
    "symmetric_table", "cross_check",
]


@dataclass(frozen=True)
class MethodReport:
    space: SpaceDescriptor
    method: str
    ranks: RankTable
    agreement: bool | None = None
    notes: tuple[str, ...] = field(default=())
    first_difference: int | None = None


def flag_ranks(g: SimpleType, torus_dim: int) -> RankTable:
    if not 0 <= torus_dim <= g.rank:
        raise ValueError(f"torus dimension {torus_dim} outside 0..{g.rank}")
    out = {2: torus_dim}
    for k, m in exponents(g):
        out[2 * k - 1] = m
    return RankTable(out)


def tncz_ranks(g_exp: ExponentMultiset, h_exp: ExponentMultiset) -> RankTable:
    """Odd ranks nu_G(k) - nu_H(k) when H*(G) -> H*(H) is onto."""
    out = {}
    for k, m in h_exp:
        if g_exp.multiplicity(k) < m:
            raise ValueError(f"exponent {k} of H has multiplicity {m} exceeding that in G")
    for k, m in g_exp:
        out[2 * k - 1] = m - h_exp.multiplicity(k)
    return RankTable(out)


def _h_multiplicities(space: SpaceDescriptor) -> dict[int, int]:
    nu: dict[int, int] = {}
    for s in space.summands:
        for k, m in exponents(s.type):
            nu[k] = nu.get(k, 0) + m
    return nu


def theorem_with_notes(space: SpaceDescriptor) -> tuple[RankTable, list[str]]:
    g = space.ambient
    if not space.summands and space.torus_rank == 0:
        return flag_ranks(g, 0), ["H is trivial: the group itself"]
    check_generalised_symmetric(space)
    if not space.summands:
        return flag_ranks(g, space.torus_rank), [f"H is a torus of rank {space.torus_rank}: flag rule"]
    nu_g = dict(exponents(g).entries)
    nu_h = _h_multiplicities(space)
    equal = space.rank_h == g.rank
    notes = [f"pi_2 = centre rank {space.torus_rank}"] if space.torus_rank else []
    out: dict[int, int] = {2: space.torus_rank}
    for p in sorted(set(nu_g) | set(nu_h)):
        a, b = nu_g.get(p, 0), nu_h.get(p, 0)
        if b == 0:
            out[2 * p - 1] = out.get(2 * p - 1, 0) + a
            notes.append(f"p={p}: exponent of G only, pi_{2 * p - 1} += {a}")
            continue
        if a == 0:
            out[2 * p] = out.get(2 * p, 0) + b
            notes.append(f"p={p}: exponent of H only, pi_{2 * p} += {b}")
            continue
        if equal:
            r = min(a, b)
            rule = "equal rank, common exponent"
        elif p % 2:
            r = 0
            rule = "lower rank, odd common exponent (restriction vanishes)"
        else:
            r = 1
            rule = "lower rank, even common exponent"
        out[2 * p] = out.get(2 * p, 0) + b - r
        out[2 * p - 1] = out.get(2 * p - 1, 0) + a - r
        notes.append(f"p={p}: {rule}, delta rank {r}: pi_{2 * p} += {b - r}, pi_{2 * p - 1} += {a - r}")
    return RankTable(out), notes


def ranks_via_theorem(space: SpaceDescriptor) -> RankTable:
    return theorem_with_notes(space)[0]


def cartan_with_notes(space: SpaceDescriptor, flips: dict | None = None
                      ) -> tuple[RankTable, list[str]]:
    c = build_cartan_algebra(space, flips=flips)
    notes = []
    for w in c.weights():
        m = delta_matrix(c, w)
        if m and m[0]:
            notes.append(f"weight {w}: delta is {len(m)}x{len(m[0])} of rank {rank(m)}")
    return homotopy_ranks(sullivan_reduce(c)), notes


def ranks_via_cartan(space: SpaceDescriptor, flips: dict | None = None) -> RankTable:
    return cartan_with_notes(space, flips)[0]


def cross_check(space: SpaceDescriptor) -> MethodReport:
    theo, tnotes = theorem_with_notes(space)
    try:
        cart, cnotes = cartan_with_notes(space)
    except Unsupported as exc:
        return MethodReport(space, "theorem", theo, None,
                            tuple(tnotes + [f"Cartan path unavailable: {exc}"]))
    diff = theo.first_difference(cart)
    notes = tnotes + cnotes
    if diff is not None:
        notes.append(f"paths differ first at q={diff}: theorem {theo[diff]}, cartan {cart[diff]}")
    return MethodReport(space, "both", cart, diff is None, tuple(notes), diff)


def symmetric_table(max_rank: int) -> list[MethodReport]:
    """Every symmetric-space family instance with ambient rank <= max_rank."""
    if max_rank < 2:
        raise ValueError("max_rank must be at least 2")
    out = []
    for fam, _, space in instances(max_rank):
        if not fam.symmetric:
            continue
        if fam.theorem_only:
            t, notes = theorem_with_notes(space)
            out.append(MethodReport(space, "theorem", t, None, tuple(notes + ["theorem path only"])))
        else:
            out.append(cross_check(space))
    return out
