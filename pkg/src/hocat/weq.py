"""Weak equivalence families: axioms, split arrows, split generation.

A weak equivalence family is any set of arrows meant to satisfy two
axioms: it contains the identities, and among f, g, g∘f membership of
any two forces the third (two out of three).  A third, stricter property
is tracked separately: weak invertibility, where f∘g and h∘f both in the
family force f in as well.

An arrow s is split when some r satisfies r∘s = id; then s is a section
and r a retraction.  A family is split-generated when every member
factors as a composite of split members.  The certificate records, for
every member, one shortest such factorization.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .errors import ValidationError
from .fincat import FinCat, resolve_weqs

__all__ = [
    "AxiomReport", "WeqFamily", "SplitCertificate", "SplitGenResult",
    "check_weq_axioms", "find_splits", "check_split_generated",
]


@dataclass(frozen=True)
class AxiomReport:
    """Outcome of the two family axioms plus weak invertibility.

    Witnesses are morphism-index tuples: two_of_three gives (f, g, g∘f)
    with exactly the absent one missing from the family; weak
    invertibility gives (f, g, h) with f∘g and h∘f in the family but f
    not.
    """

    inserted_identities: tuple[int, ...]
    identities_ok: bool
    two_of_three_ok: bool
    two_of_three_witness: tuple[int, int, int] | None
    weak_invertibility_ok: bool
    weak_invertibility_witness: tuple[int, int, int] | None

    @property
    def axioms_ok(self) -> bool:
        return self.identities_ok and self.two_of_three_ok


@dataclass(frozen=True)
class WeqFamily:
    """A checked family: base category, members, axiom report."""

    base: FinCat
    members: frozenset[int]
    report: AxiomReport

    def __contains__(self, f) -> bool:
        return self.base.mor(f) in self.members


def check_weq_axioms(cat: FinCat, weqs: Iterable) -> WeqFamily:
    """Check the family axioms exhaustively over the composition table.

    Missing identities are inserted first and recorded in the report;
    input documents treat them as implicit, so their absence is not a
    failure.  Weak invertibility is reported alongside but does not
    gate anything here.
    """
    members = set(resolve_weqs(cat, weqs))
    inserted = tuple(sorted(set(cat.identity_set) - {cat.mor(w) for w in weqs}))

    two_ok, two_wit = True, None
    for g, f in cat.composable_pairs():
        gf = cat.table[g][f]
        flags = (f in members, g in members, gf in members)
        if sum(flags) == 2:
            two_ok, two_wit = False, (f, g, gf)
            break

    weak_ok, weak_wit = True, None
    if two_ok:
        for f in range(len(cat.morphisms)):
            if f in members:
                continue
            g_hit = next((g for g in cat.incoming[cat.dom(f)]
                          if cat.table[f][g] in members), None)
            if g_hit is None:
                continue
            h_hit = next((h for h in cat.outgoing[cat.cod(f)]
                          if cat.table[h][f] in members), None)
            if h_hit is not None:
                weak_ok, weak_wit = False, (f, g_hit, h_hit)
                break

    report = AxiomReport(
        inserted_identities=inserted,
        identities_ok=True,
        two_of_three_ok=two_ok,
        two_of_three_witness=two_wit,
        weak_invertibility_ok=weak_ok,
        weak_invertibility_witness=weak_wit,
    )
    return WeqFamily(cat, frozenset(members), report)


def find_splits(cat: FinCat) -> frozenset[tuple[int, int]]:
    """All ordered pairs (s, r) with r∘s an identity."""
    out = set()
    for s in range(len(cat.morphisms)):
        for r in cat.incoming[cat.dom(s)]:
            if cat.composable(r, s) and cat.is_identity(cat.table[r][s]):
                out.add((s, r))
    return frozenset(out)


@dataclass(frozen=True)
class SplitCertificate:
    """Witness that a family is generated by its split members.

    ``split_weqs`` holds (member, one-sided inverse, kind) triples, kind
    "section" when inverse∘member = id and "retraction" when
    member∘inverse = id.  ``decompositions`` maps every family member to
    a shortest factorization into split members, first-applied first;
    identities factor as themselves.
    """

    split_weqs: tuple[tuple[int, int, str], ...]
    decompositions: dict[int, tuple[int, ...]]

    def sections_of(self, w: int) -> tuple[int, ...]:
        """Retractions r with r∘w = id, ascending."""
        return tuple(sorted(r for s, r, kind in self.split_weqs
                            if s == w and kind == "section"))

    def retractions_of(self, w: int) -> tuple[int, ...]:
        """Sections t with w∘t = id, ascending."""
        return tuple(sorted(t for r, t, kind in self.split_weqs
                            if r == w and kind == "retraction"))


@dataclass(frozen=True)
class SplitGenResult:
    """Certificate on success, else the lowest-index member left out."""

    certificate: SplitCertificate | None
    missing: int | None

    @property
    def generated(self) -> bool:
        return self.certificate is not None


def check_split_generated(family: WeqFamily) -> SplitGenResult:
    """Decide whether every member factors through split members.

    Breadth-first saturation over the composition table restricted to
    the family: start from the split members, append one split member at
    a time, and memoize the first (hence shortest) factorization of each
    composite reached.  The family axioms keep every such composite
    inside the family, so at most |family| rounds happen.
    """
    if not family.report.axioms_ok:
        raise ValidationError("split generation needs the family axioms to hold")
    cat = family.base
    members = family.members

    splits = find_splits(cat)
    triples = []
    for s, r in sorted(splits):
        if s in members:
            triples.append((s, r, "section"))
        if r in members:
            triples.append((r, s, "retraction"))
    split_members = sorted({t[0] for t in triples})

    decomp: dict[int, tuple[int, ...]] = {}
    frontier = []
    for s in split_members:
        decomp[s] = (s,)
        frontier.append(s)
    while frontier:
        nxt = []
        for x in frontier:
            for s in split_members:
                if not cat.composable(s, x):
                    continue
                c = cat.table[s][x]
                if c in members and c not in decomp:
                    decomp[c] = decomp[x] + (s,)
                    nxt.append(c)
        frontier = nxt

    leftover = sorted(m for m in members if m not in decomp)
    if leftover:
        return SplitGenResult(None, leftover[0])
    cert = SplitCertificate(tuple(triples), {m: decomp[m] for m in sorted(members)})
    return SplitGenResult(cert, None)
