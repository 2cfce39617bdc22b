"""Congruences on finite categories and the quotients they induce.

A precongruence is a bag of unordered relations between parallel arrows,
one relation per hom-set.  A congruence is the certified form: an
equivalence relation on every hom-set that is closed under composition
on both sides, so the quotient category exists.  ``least_congruence``
produces the smallest congruence containing a given precongruence via
union-find plus a worklist that re-fires composition closure until
nothing changes.

Pairs are stored unordered as (min index, max index); symmetry is free.
A precongruence keeps whatever pairs it was given, including degenerate
(f, f) ones, because ``is_congruence`` judges the literal relation.  A
congruence stores a partition instead, where reflexivity is implicit.
"""

from __future__ import annotations

from typing import Iterable

from .errors import ValidationError
from .fincat import CatFunctor, FinCat, Mor

__all__ = [
    "Precongruence", "Congruence", "QuotientResult",
    "close_composition", "least_congruence", "quotient",
    "kernel_congruence", "sigma_of", "is_congruence",
]


class Precongruence:
    """Unordered parallel-pair relations over a fixed base category."""

    def __init__(self, base: FinCat, pairs: Iterable[tuple[int, int]] = ()):
        self.base = base
        canon = set()
        for f, g in pairs:
            fi, gi = base.mor(f), base.mor(g)
            if (base.dom(fi), base.cod(fi)) != (base.dom(gi), base.cod(gi)):
                raise ValidationError(
                    f"pair ({base.mor_name(fi)!r}, {base.mor_name(gi)!r}) is not parallel")
            canon.add((min(fi, gi), max(fi, gi)))
        self.pairs = frozenset(canon)

    @property
    def distinct_pairs(self) -> frozenset[tuple[int, int]]:
        return frozenset(p for p in self.pairs if p[0] != p[1])

    def union(self, other: "Precongruence") -> "Precongruence":
        if other.base is not self.base and other.base != self.base:
            raise ValidationError("cannot union relations over different categories")
        return Precongruence(self.base, self.pairs | other.pairs)

    def __eq__(self, other):
        if not isinstance(other, Precongruence):
            return NotImplemented
        return self.base == other.base and self.pairs == other.pairs

    def __hash__(self):
        return hash(self.pairs)

    def __repr__(self):
        return f"Precongruence({len(self.pairs)} pairs)"


class Congruence:
    """A certified congruence, stored as a partition of each hom-set.

    The constructor checks that the classes partition hom-sets into
    parallel blocks and that the relation is closed under composition on
    both sides; invalid input raises.  Classes are numbered by their
    lowest member, so equal congruences compare equal structurally.
    """

    def __init__(self, base: FinCat, classes: Iterable[Iterable[int]]):
        self.base = base
        n = len(base.morphisms)
        blocks = [tuple(sorted(base.mor(m) for m in cls)) for cls in classes]
        seen: set[int] = set()
        for cls in blocks:
            if not cls:
                raise ValidationError("empty congruence class")
            d, c = base.dom(cls[0]), base.cod(cls[0])
            for m in cls:
                if m in seen:
                    raise ValidationError(
                        f"morphism {base.mor_name(m)!r} appears in two classes")
                seen.add(m)
                if (base.dom(m), base.cod(m)) != (d, c):
                    raise ValidationError(
                        f"class mixing non-parallel arrows at {base.mor_name(m)!r}")
        if len(seen) != n:
            missing = next(i for i in range(n) if i not in seen)
            raise ValidationError(
                f"partition misses morphism {base.mor_name(missing)!r}")
        blocks.sort(key=lambda cls: cls[0])
        self.classes = tuple(blocks)
        class_of = [0] * n
        for ci, cls in enumerate(self.classes):
            for m in cls:
                class_of[m] = ci
        self.class_of = tuple(class_of)
        self._check_closure()

    def _check_closure(self):
        base = self.base
        for cls in self.classes:
            if len(cls) == 1:
                continue
            rep = cls[0]
            d, c = base.dom(rep), base.cod(rep)
            for m in cls[1:]:
                # Closure against the representative suffices: transitivity
                # carries it to every pair in the class.
                for u in base.incoming[d]:
                    ru, mu = base.table[rep][u], base.table[m][u]
                    for v in base.outgoing[c]:
                        if self.class_of[base.table[v][ru]] != self.class_of[base.table[v][mu]]:
                            raise ValidationError(
                                "relation is not closed under composition: "
                                f"({base.mor_name(rep)!r}, {base.mor_name(m)!r}) composed with "
                                f"u={base.mor_name(u)!r}, v={base.mor_name(v)!r}")

    def related(self, f, g) -> bool:
        return self.class_of[self.base.mor(f)] == self.class_of[self.base.mor(g)]

    def class_members(self, f) -> tuple[int, ...]:
        return self.classes[self.class_of[self.base.mor(f)]]

    def nonsingleton_classes(self) -> tuple[tuple[int, ...], ...]:
        return tuple(cls for cls in self.classes if len(cls) > 1)

    def as_pairs(self) -> frozenset[tuple[int, int]]:
        """All distinct related pairs, canonically ordered."""
        out = set()
        for cls in self.classes:
            for i, f in enumerate(cls):
                for g in cls[i + 1:]:
                    out.add((f, g))
        return frozenset(out)

    def contains(self, rel: Precongruence) -> bool:
        return all(self.class_of[f] == self.class_of[g] for f, g in rel.pairs)

    @staticmethod
    def discrete(base: FinCat) -> "Congruence":
        return Congruence(base, [(i,) for i in range(len(base.morphisms))])

    def __eq__(self, other):
        if not isinstance(other, Congruence):
            return NotImplemented
        return self.base == other.base and self.classes == other.classes

    def __hash__(self):
        return hash(self.classes)

    def __repr__(self):
        big = sum(1 for c in self.classes if len(c) > 1)
        return f"Congruence({len(self.classes)} classes, {big} nontrivial)"


def close_composition(rel: Precongruence) -> Precongruence:
    """Close a relation under two-sided composition.

    Every pair (f, g) spawns (v∘f∘u, v∘g∘u) for all composable u, v.
    The output contains the input and the operation is idempotent.
    Degenerate spawned pairs are dropped; degenerate input pairs stay.
    """
    base = rel.base
    out = set(rel.pairs)
    for f, g in rel.pairs:
        d, c = base.dom(f), base.cod(f)
        for u in base.incoming[d]:
            fu, gu = base.table[f][u], base.table[g][u]
            for v in base.outgoing[c]:
                vfu, vgu = base.table[v][fu], base.table[v][gu]
                if vfu != vgu:
                    out.add((min(vfu, vgu), max(vfu, vgu)))
    return Precongruence(base, out)


def least_congruence(rel: Precongruence) -> Congruence:
    """The smallest congruence containing ``rel``.

    Union-find per hom-set with a worklist: each newly merged pair
    re-fires one-sided composition closure, and transitivity inside the
    union-find carries the two-sided consequences to a fixpoint.
    """
    base = rel.base
    n = len(base.morphisms)
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    work = list(rel.pairs)
    while work:
        f, g = work.pop()
        rf, rg = find(f), find(g)
        if rf == rg:
            continue
        if rf > rg:
            rf, rg = rg, rf
        parent[rg] = rf
        d, c = base.dom(f), base.cod(f)
        for u in base.incoming[d]:
            work.append((base.table[f][u], base.table[g][u]))
        for v in base.outgoing[c]:
            work.append((base.table[v][f], base.table[v][g]))

    groups: dict[int, list[int]] = {}
    for m in range(n):
        groups.setdefault(find(m), []).append(m)
    return Congruence(base, groups.values())


class QuotientResult:
    """A quotient category together with its projection functor."""

    def __init__(self, congruence: Congruence):
        base = congruence.base
        self.congruence = congruence
        classes = congruence.classes
        obj_count = len(base.objects)
        morphisms = tuple(
            Mor(f"[{base.mor_name(cls[0])}]", base.dom(cls[0]), base.cod(cls[0]))
            for cls in classes)
        identity = tuple(congruence.class_of[base.identity[x]] for x in range(obj_count))
        k = len(classes)
        table = [[-1] * k for _ in range(k)]
        for gi, gcls in enumerate(classes):
            for fi, fcls in enumerate(classes):
                if base.composable(gcls[0], fcls[0]):
                    table[gi][fi] = congruence.class_of[base.table[gcls[0]][fcls[0]]]
        self.quotient = FinCat(base.objects, morphisms, identity, table)
        self.projection = CatFunctor(
            base, self.quotient,
            on_objects=tuple(range(obj_count)),
            on_morphisms=congruence.class_of)

    def class_name(self, f) -> str:
        return self.quotient.mor_name(self.congruence.class_of[self.congruence.base.mor(f)])


def quotient(cat: FinCat, congruence: Congruence) -> QuotientResult:
    """Quotient ``cat`` by a certified congruence.

    Composition of classes is independent of representatives exactly
    because the congruence is closed; the Congruence constructor has
    already certified that, and CatFunctor validation of the projection
    re-checks the resulting table exhaustively.
    """
    if congruence.base != cat:
        raise ValidationError("congruence was built over a different category")
    return QuotientResult(congruence)


def kernel_congruence(functor: CatFunctor) -> Congruence:
    """Identify parallel arrows with the same image."""
    src = functor.source
    groups: dict[tuple[int, int, int], list[int]] = {}
    for f in range(len(src.morphisms)):
        key = (src.dom(f), src.cod(f), functor.on_morphisms[f])
        groups.setdefault(key, []).append(f)
    return Congruence(src, groups.values())


def sigma_of(cat: FinCat, rel) -> frozenset[int]:
    """Arrows invertible up to the congruence generated by ``rel``.

    f: X -> Y qualifies when some g: Y -> X has g∘f related to id_X and
    f∘g related to id_Y.  ``rel`` may be a Precongruence (its least
    congruence is taken) or an already certified Congruence.  Honest
    isomorphisms always qualify, whatever the relation.
    """
    cong = rel if isinstance(rel, Congruence) else least_congruence(rel)
    if cong.base != cat:
        raise ValidationError("relation was built over a different category")
    out = []
    for f in range(len(cat.morphisms)):
        x, y = cat.dom(f), cat.cod(f)
        idx, idy = cat.identity[x], cat.identity[y]
        for g in cat.hom(y, x):
            if cong.related(cat.table[g][f], idx) and cong.related(cat.table[f][g], idy):
                out.append(f)
                break
    return frozenset(out)


def is_congruence(rel: Precongruence):
    """Judge the literal relation in ``rel``.

    Returns (ok, witness).  The relation must be reflexive (degenerate
    pairs count as part of the stored relation here), transitive, and
    closed under composition on both sides; symmetry is free from the
    unordered storage.  The witness names the first failure in index
    order: ("reflexivity", f), ("transitivity", (f, g, h)), or
    ("composition", (f, g, u, v)).
    """
    base = rel.base
    pairs = rel.pairs
    for f in range(len(base.morphisms)):
        if (f, f) not in pairs:
            return False, ("reflexivity", f)
    # Adjacency per morphism for the transitivity scan.
    adj: dict[int, set[int]] = {}
    for f, g in pairs:
        adj.setdefault(f, set()).add(g)
        adj.setdefault(g, set()).add(f)
    for f in sorted(adj):
        for g in sorted(adj[f]):
            for h in sorted(adj[g]):
                if h != f and (min(f, h), max(f, h)) not in pairs:
                    return False, ("transitivity", (f, g, h))
    for f, g in sorted(pairs):
        if f == g:
            continue
        d, c = base.dom(f), base.cod(f)
        for u in base.incoming[d]:
            fu, gu = base.table[f][u], base.table[g][u]
            for v in base.outgoing[c]:
                vfu, vgu = base.table[v][fu], base.table[v][gu]
                if vfu != vgu and (min(vfu, vgu), max(vfu, vgu)) not in pairs:
                    return False, ("composition", (f, g, u, v))
    return True, None
