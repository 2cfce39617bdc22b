"""Finite categories presented by explicit composition tables.

A category is given by its objects, its arrows, and a total composition
table over the composable pairs.  Arrows are dense integer indices
internally; textual names appear only at the boundary (input documents,
reports, error messages).

Composition convention: ``compose(g, f)`` is "f first, then g", i.e. the
usual g∘f, defined when ``cod(f) == dom(g)``.  Input documents use the
same convention through ``{"after": g, "before": f, "equals": h}``
entries.  Identity arrows carry the reserved name ``id:<object>`` and are
synthesized when a document omits them; they always occupy the lowest
indices, in object order.

Everything here is immutable after construction, so values can be shared
freely between threads or cached without copying.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import FormatError, ValidationError

ID_PREFIX = "id:"

DIRECTIONS = ("left", "right")


def id_name(obj: str) -> str:
    """Reserved name of the identity arrow on ``obj``."""
    return ID_PREFIX + obj


@dataclass(frozen=True)
class Mor:
    """One arrow: display name plus object indices."""

    name: str
    dom: int
    cod: int


class FinCat:
    """A finite category with a validated, total composition table.

    ``table[g][f]`` holds the index of g∘f (f applied first), or -1 when
    the pair is not composable.  Use :func:`validate_category` to build
    instances from untrusted data; the constructor trusts its arguments.
    """

    def __init__(self, objects: Sequence[str], morphisms: Sequence[Mor],
                 identity: Sequence[int], table: Sequence[Sequence[int]]):
        self.objects = tuple(objects)
        self.morphisms = tuple(morphisms)
        self.identity = tuple(identity)
        self.table = tuple(tuple(row) for row in table)
        self._obj_index = {o: i for i, o in enumerate(self.objects)}
        self._mor_index = {m.name: i for i, m in enumerate(self.morphisms)}
        hom: dict[tuple[int, int], list[int]] = {}
        for i, m in enumerate(self.morphisms):
            hom.setdefault((m.dom, m.cod), []).append(i)
        self._hom = {k: tuple(v) for k, v in hom.items()}
        self.identity_set = frozenset(self.identity)
        # incoming[x] / outgoing[x]: arrows with cod x / dom x, by index.
        self.incoming = tuple(
            tuple(i for i, m in enumerate(self.morphisms) if m.cod == x)
            for x in range(len(self.objects)))
        self.outgoing = tuple(
            tuple(i for i, m in enumerate(self.morphisms) if m.dom == x)
            for x in range(len(self.objects)))

    # -- lookups -------------------------------------------------------

    def obj(self, x) -> int:
        """Object index from a name or an index."""
        if isinstance(x, str):
            try:
                return self._obj_index[x]
            except KeyError:
                raise ValidationError(f"unknown object {x!r}") from None
        i = int(x)
        if not 0 <= i < len(self.objects):
            raise ValidationError(f"object index {i} out of range")
        return i

    def mor(self, x) -> int:
        """Morphism index from a name or an index."""
        if isinstance(x, str):
            try:
                return self._mor_index[x]
            except KeyError:
                raise ValidationError(f"unknown morphism {x!r}") from None
        i = int(x)
        if not 0 <= i < len(self.morphisms):
            raise ValidationError(f"morphism index {i} out of range")
        return i

    def obj_name(self, i: int) -> str:
        return self.objects[i]

    def mor_name(self, i: int) -> str:
        return self.morphisms[i].name

    def dom(self, f) -> int:
        return self.morphisms[self.mor(f)].dom

    def cod(self, f) -> int:
        return self.morphisms[self.mor(f)].cod

    def is_identity(self, f) -> bool:
        return self.mor(f) in self.identity_set

    def composable(self, g, f) -> bool:
        return self.cod(f) == self.dom(g)

    def compose(self, g, f) -> int:
        """g∘f (f first).  Raises if the pair is not composable."""
        gi, fi = self.mor(g), self.mor(f)
        h = self.table[gi][fi]
        if h < 0:
            raise ValidationError(
                f"{self.mor_name(gi)} does not compose after {self.mor_name(fi)}")
        return h

    def hom(self, a, b) -> tuple[int, ...]:
        """Arrows from a to b, ascending by index."""
        return self._hom.get((self.obj(a), self.obj(b)), ())

    def hom_pairs(self) -> tuple[tuple[int, int], ...]:
        """Ordered object pairs with at least one arrow."""
        return tuple(sorted(self._hom))

    def parallel_pairs(self):
        """Yield all (f, g) with f < g sharing dom and cod."""
        for arrows in self._hom.values():
            for i, f in enumerate(arrows):
                for g in arrows[i + 1:]:
                    yield f, g

    def composable_pairs(self):
        """Yield all (g, f) with g∘f defined."""
        for g in range(len(self.morphisms)):
            row = self.table[g]
            for f in range(len(self.morphisms)):
                if row[f] >= 0:
                    yield g, f

    def __eq__(self, other):
        if not isinstance(other, FinCat):
            return NotImplemented
        return (self.objects == other.objects
                and self.morphisms == other.morphisms
                and self.identity == other.identity
                and self.table == other.table)

    def __hash__(self):
        return hash((self.objects, self.morphisms))

    def __repr__(self):
        return f"FinCat({len(self.objects)} objects, {len(self.morphisms)} morphisms)"


@dataclass(frozen=True)
class RawCategory:
    """Parsed but unvalidated category document.

    ``morphisms`` lists identities first (object order, reserved names),
    then the declared arrows in declaration order.
    """

    objects: tuple[str, ...]
    morphisms: tuple[tuple[str, str, str], ...]     # (name, dom, cod)
    composition: tuple[tuple[str, str, str], ...]   # (after, before, equals)
    weak_equivalences: tuple[str, ...]
    subcategory: dict | None
    deformation: tuple[dict, ...] | None
    source: str | None = None


def _require(cond: bool, msg: str):
    if not cond:
        raise FormatError(msg)


def load_spec(document) -> RawCategory:
    """Parse a category document into raw, structurally checked data.

    ``document`` is a mapping (already decoded) or a JSON string.  The
    checks here are purely structural: field shapes, duplicate names, and
    dangling references.  Category laws are the business of
    :func:`validate_category`.
    """
    if isinstance(document, (str, bytes)):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as e:
            raise FormatError(f"not valid JSON: {e}") from None
    _require(isinstance(document, dict), "document must be a JSON object")

    known = {"objects", "morphisms", "composition", "weak_equivalences",
             "subcategory", "deformation"}
    for key in document:
        _require(key in known, f"unknown top-level field {key!r}")

    objects = document.get("objects")
    _require(isinstance(objects, list) and objects, "objects: nonempty list required")
    _require(all(isinstance(o, str) and o for o in objects), "objects: names must be nonempty strings")
    _require(len(set(objects)) == len(objects), "duplicate object name")
    for o in objects:
        _require(not o.startswith(ID_PREFIX), f"object name {o!r} uses the reserved prefix {ID_PREFIX!r}")
    obj_set = set(objects)

    declared = document.get("morphisms", [])
    _require(isinstance(declared, list), "morphisms: list required")
    names_seen: set[str] = set()
    identities = {o: (id_name(o), o, o) for o in objects}
    plain: list[tuple[str, str, str]] = []
    for entry in declared:
        _require(isinstance(entry, dict), "morphisms: entries must be objects")
        _require(set(entry) == {"name", "dom", "cod"},
                 f"morphism entry needs exactly name/dom/cod, got {sorted(entry)}")
        name, dom, cod = entry["name"], entry["dom"], entry["cod"]
        _require(isinstance(name, str) and name, "morphism name must be a nonempty string")
        _require(name not in names_seen, f"duplicate morphism name {name!r}")
        names_seen.add(name)
        _require(dom in obj_set, f"morphism {name!r}: unknown dom {dom!r}")
        _require(cod in obj_set, f"morphism {name!r}: unknown cod {cod!r}")
        if name.startswith(ID_PREFIX):
            # A declared identity must sit where synthesis would put it.
            _require(name == id_name(dom) and dom == cod,
                     f"reserved name {name!r} must be the identity of its object")
            continue
        plain.append((name, dom, cod))
    morphisms = tuple(identities[o] for o in objects) + tuple(plain)
    mor_names = {m[0] for m in morphisms}

    composition = document.get("composition", [])
    _require(isinstance(composition, list), "composition: list required")
    comp_entries = []
    for entry in composition:
        _require(isinstance(entry, dict), "composition: entries must be objects")
        _require(set(entry) == {"after", "before", "equals"},
                 f"composition entry needs exactly after/before/equals, got {sorted(entry)}")
        for k in ("after", "before", "equals"):
            _require(entry[k] in mor_names,
                     f"composition entry references unknown morphism {entry[k]!r}")
        comp_entries.append((entry["after"], entry["before"], entry["equals"]))

    weqs = document.get("weak_equivalences", [])
    _require(isinstance(weqs, list), "weak_equivalences: list required")
    for w in weqs:
        _require(w in mor_names, f"weak_equivalences references unknown morphism {w!r}")
    _require(len(set(weqs)) == len(weqs), "duplicate weak equivalence name")

    subcat = document.get("subcategory")
    if subcat is not None:
        _require(isinstance(subcat, dict) and set(subcat) <= {"objects", "morphisms"},
                 "subcategory: object with fields objects/morphisms")
        _require(isinstance(subcat.get("objects"), list) and subcat["objects"],
                 "subcategory.objects: nonempty list required")
        for o in subcat["objects"]:
            _require(o in obj_set, f"subcategory references unknown object {o!r}")
        if "morphisms" in subcat:
            _require(isinstance(subcat["morphisms"], list), "subcategory.morphisms: list required")
            for m in subcat["morphisms"]:
                _require(m in mor_names, f"subcategory references unknown morphism {m!r}")

    deformation = document.get("deformation")
    if deformation is not None:
        if isinstance(deformation, dict):
            deformation = [deformation]
        _require(isinstance(deformation, list) and deformation,
                 "deformation: block or nonempty list of blocks required")
        for block in deformation:
            _require(isinstance(block, dict), "deformation: blocks must be objects")
            _require({"direction", "on_objects", "on_morphisms", "theta"} <= set(block),
                     "deformation block needs direction/on_objects/on_morphisms/theta")
            _require(set(block) <= {"direction", "on_objects", "on_morphisms", "theta", "target"},
                     f"deformation block has unknown fields: {sorted(block)}")
            _require(block["direction"] in DIRECTIONS, "deformation direction must be left or right")
            for field_name in ("on_objects", "theta"):
                m = block[field_name]
                _require(isinstance(m, dict), f"deformation.{field_name}: object map required")
                for k, v in m.items():
                    _require(k in obj_set, f"deformation.{field_name}: unknown object {k!r}")
                    ok = v in obj_set if field_name == "on_objects" else v in mor_names
                    _require(ok, f"deformation.{field_name}: unknown reference {v!r}")
            _require(isinstance(block["on_morphisms"], dict), "deformation.on_morphisms: object map required")
            for k, v in block["on_morphisms"].items():
                _require(k in mor_names, f"deformation.on_morphisms: unknown morphism {k!r}")
                _require(v in mor_names, f"deformation.on_morphisms: unknown morphism {v!r}")
            target = block.get("target")
            if target is not None:
                _require(isinstance(target, dict) and set(target) <= {"objects", "morphisms"},
                         "deformation.target: object with fields objects/morphisms")
                for o in target.get("objects", []):
                    _require(o in obj_set, f"deformation.target: unknown object {o!r}")
                for m in target.get("morphisms", []):
                    _require(m in mor_names, f"deformation.target: unknown morphism {m!r}")
        deformation = tuple(deformation)

    return RawCategory(
        objects=tuple(objects),
        morphisms=morphisms,
        composition=tuple(comp_entries),
        weak_equivalences=tuple(weqs),
        subcategory=subcat,
        deformation=deformation,
    )


def load_file(path) -> RawCategory:
    """Read and parse a category document from ``path``."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise FormatError(f"cannot read {path}: {e}") from None
    raw = load_spec(text)
    return RawCategory(**{**raw.__dict__, "source": str(path)})


def validate_category(raw: RawCategory) -> FinCat:
    """Check the category laws and build the immutable table form.

    Fails on: a composable pair with no declared composite (identity
    composites are derived), an entry that contradicts the identity laws
    or another entry, endpoint mismatches, and associativity violations
    (the error names the witnessing triple).
    """
    objects = raw.objects
    obj_index = {o: i for i, o in enumerate(objects)}
    morphisms = tuple(Mor(n, obj_index[d], obj_index[c]) for n, d, c in raw.morphisms)
    mor_index = {m.name: i for i, m in enumerate(morphisms)}
    n = len(morphisms)
    identity = tuple(mor_index[id_name(o)] for o in objects)

    table = [[-1] * n for _ in range(n)]
    # Identity laws fill the derivable entries first.
    for f, m in enumerate(morphisms):
        table[f][identity[m.dom]] = f
        table[identity[m.cod]][f] = f
    for after, before, equals in raw.composition:
        g, f, h = mor_index[after], mor_index[before], mor_index[equals]
        if morphisms[g].dom != morphisms[f].cod:
            raise ValidationError(
                f"composition entry {after!r} after {before!r}: not composable")
        if morphisms[h].dom != morphisms[f].dom or morphisms[h].cod != morphisms[g].cod:
            raise ValidationError(
                f"composition entry {after!r} after {before!r} = {equals!r}: endpoint mismatch")
        if table[g][f] >= 0 and table[g][f] != h:
            raise ValidationError(
                f"composition entry {after!r} after {before!r} = {equals!r} contradicts "
                f"{morphisms[table[g][f]].name!r} (identity law or duplicate entry)")
        table[g][f] = h

    for g in range(n):
        for f in range(n):
            if morphisms[g].dom == morphisms[f].cod and table[g][f] < 0:
                raise ValidationError(
                    f"missing composite: {morphisms[g].name!r} after {morphisms[f].name!r}")

    # Associativity over every composable triple h∘g∘f.
    for h in range(n):
        for g in range(n):
            if morphisms[h].dom != morphisms[g].cod:
                continue
            hg = table[h][g]
            for f in range(n):
                if morphisms[g].dom != morphisms[f].cod:
                    continue
                if table[h][table[g][f]] != table[hg][f]:
                    raise ValidationError(
                        "associativity violation on triple "
                        f"({morphisms[h].name!r}, {morphisms[g].name!r}, {morphisms[f].name!r})")

    return FinCat(objects, morphisms, identity, table)


def resolve_weqs(cat: FinCat, names: Iterable) -> frozenset[int]:
    """Resolve a declared weak equivalence family; identities are implicit."""
    members = {cat.mor(x) for x in names}
    members.update(cat.identity_set)
    return frozenset(members)


def hom_set(cat: FinCat, a, b) -> frozenset[int]:
    """The set of arrows from a to b."""
    return frozenset(cat.hom(a, b))


def compose_path(cat: FinCat, path: Sequence, at=None) -> int:
    """Fold a path of arrows (first-applied first) into one composite.

    The empty path needs ``at`` to pick the object whose identity it
    denotes.
    """
    idxs = [cat.mor(p) for p in path]
    if not idxs:
        if at is None:
            raise ValidationError("empty path: supply the object via at=")
        return cat.identity[cat.obj(at)]
    acc = idxs[0]
    for nxt in idxs[1:]:
        acc = cat.compose(nxt, acc)
    return acc


def opposite(cat: FinCat, weqs: Iterable[int] = ()) -> tuple[FinCat, frozenset[int]]:
    """The opposite category, arrows keeping their indices and names.

    The table transposes: a pair composable one way round becomes
    composable the other way round.  The weak equivalence family carries
    over unchanged.  Applying this twice gives back an equal category.
    """
    morphisms = tuple(Mor(m.name, m.cod, m.dom) for m in cat.morphisms)
    n = len(morphisms)
    table = [[cat.table[f][g] for f in range(n)] for g in range(n)]
    op = FinCat(cat.objects, morphisms, cat.identity, table)
    return op, frozenset(cat.mor(w) for w in weqs)


class CatFunctor:
    """A functor between finite categories, validated exhaustively."""

    def __init__(self, source: FinCat, target: FinCat,
                 on_objects: Sequence[int], on_morphisms: Sequence[int]):
        self.source = source
        self.target = target
        self.on_objects = tuple(on_objects)
        self.on_morphisms = tuple(on_morphisms)
        if len(self.on_objects) != len(source.objects):
            raise ValidationError("functor: on_objects must cover every object")
        if len(self.on_morphisms) != len(source.morphisms):
            raise ValidationError("functor: on_morphisms must cover every morphism")
        for x in self.on_objects:
            target.obj(x)
        for f, m in enumerate(source.morphisms):
            img = self.on_morphisms[f]
            target.mor(img)
            if (target.dom(img) != self.on_objects[m.dom]
                    or target.cod(img) != self.on_objects[m.cod]):
                raise ValidationError(f"functor breaks endpoints on {m.name!r}")
        for x in range(len(source.objects)):
            if self.on_morphisms[source.identity[x]] != target.identity[self.on_objects[x]]:
                raise ValidationError(
                    f"functor breaks the identity on {source.obj_name(x)!r}")
        for g, f in source.composable_pairs():
            lhs = self.on_morphisms[source.table[g][f]]
            rhs = target.table[self.on_morphisms[g]][self.on_morphisms[f]]
            if lhs != rhs:
                raise ValidationError(
                    "functor breaks composition on "
                    f"({source.mor_name(g)!r}, {source.mor_name(f)!r})")

    def apply_obj(self, x) -> int:
        return self.on_objects[self.source.obj(x)]

    def apply(self, f) -> int:
        return self.on_morphisms[self.source.mor(f)]

    def __repr__(self):
        return f"CatFunctor({self.source!r} -> {self.target!r})"


@dataclass(frozen=True)
class Subcategory:
    """A subcategory of ``parent`` materialized as its own FinCat.

    ``objects`` and ``morphisms`` are ascending parent indices; ``cat``
    is the restricted category reusing the parent's names.
    """

    parent: FinCat
    objects: tuple[int, ...]
    morphisms: tuple[int, ...]
    cat: FinCat

    def to_sub_obj(self, parent_obj: int) -> int:
        return self.objects.index(parent_obj)

    def to_sub_mor(self, parent_mor: int) -> int:
        return self.morphisms.index(parent_mor)

    @property
    def is_full(self) -> bool:
        want = {m for x in self.objects for y in self.objects
                for m in self.parent.hom(x, y)}
        return want == set(self.morphisms)


def subcategory(cat: FinCat, objects: Iterable, morphisms: Iterable | None = None) -> Subcategory:
    """Restrict to a subcategory; morphisms default to the full one.

    Identities of the chosen objects are always included.  Fails if an
    arrow's endpoints fall outside the chosen objects or the selection is
    not closed under composition.
    """
    objs = sorted({cat.obj(x) for x in objects})
    if morphisms is None:
        mors = sorted(m for x in objs for y in objs for m in cat.hom(x, y))
    else:
        chosen = {cat.mor(m) for m in morphisms}
        chosen.update(cat.identity[x] for x in objs)
        mors = sorted(chosen)
    obj_set, mor_set = set(objs), set(mors)
    for m in mors:
        if cat.dom(m) not in obj_set or cat.cod(m) not in obj_set:
            raise ValidationError(
                f"subcategory: {cat.mor_name(m)!r} has an endpoint outside the chosen objects")
    for g in mors:
        for f in mors:
            if cat.composable(g, f) and cat.table[g][f] not in mor_set:
                raise ValidationError(
                    "subcategory not closed under composition: "
                    f"{cat.mor_name(g)!r} after {cat.mor_name(f)!r}")
    sub_obj = {x: i for i, x in enumerate(objs)}
    sub_mor = {m: i for i, m in enumerate(mors)}
    rmorphisms = tuple(Mor(cat.mor_name(m), sub_obj[cat.dom(m)], sub_obj[cat.cod(m)]) for m in mors)
    identity = tuple(sub_mor[cat.identity[x]] for x in objs)
    table = [[-1] * len(mors) for _ in mors]
    for gi, g in enumerate(mors):
        for fi, f in enumerate(mors):
            if cat.composable(g, f):
                table[gi][fi] = sub_mor[cat.table[g][f]]
    sub = FinCat(tuple(cat.obj_name(x) for x in objs), rmorphisms, identity, table)
    return Subcategory(cat, tuple(objs), tuple(mors), sub)


def find_isomorphism(a: FinCat, b: FinCat):
    """Search for an isomorphism of categories a -> b.

    Returns (object map, morphism map) as index tuples, or None.  Pure
    backtracking over object bijections and hom-set bijections; fine at
    the sizes this package targets (tens of arrows).
    """
    if len(a.objects) != len(b.objects) or len(a.morphisms) != len(b.morphisms):
        return None

    def profile(cat, x):
        nobj = len(cat.objects)
        return (len(cat.hom(x, x)),
                tuple(sorted(len(cat.hom(x, y)) for y in range(nobj))),
                tuple(sorted(len(cat.hom(y, x)) for y in range(nobj))))

    prof_a = [profile(a, x) for x in range(len(a.objects))]
    prof_b = [profile(b, x) for x in range(len(b.objects))]

    for perm in itertools.permutations(range(len(b.objects))):
        if any(prof_a[x] != prof_b[perm[x]] for x in range(len(a.objects))):
            continue
        if any(len(a.hom(x, y)) != len(b.hom(perm[x], perm[y]))
               for x in range(len(a.objects)) for y in range(len(a.objects))):
            continue
        mor_map = _match_morphisms(a, b, perm)
        if mor_map is not None:
            return tuple(perm), mor_map
    return None


def _color_sigs(cat: FinCat, colors):
    out = []
    for m in range(len(cat.morphisms)):
        rights = sorted((colors[f], colors[cat.table[m][f]])
                        for f in cat.incoming[cat.dom(m)])
        lefts = sorted((colors[g], colors[cat.table[g][m]])
                       for g in cat.outgoing[cat.cod(m)])
        out.append((colors[m], tuple(rights), tuple(lefts)))
    return out


def _joint_colors(a: FinCat, b: FinCat, perm):
    """Composition-profile colors numbered consistently across a and b.

    Starts from (object pair, identity flag) and refines each color by
    the multiset of composites it enters, until stable.  An isomorphism
    over ``perm`` must preserve these colors, which cuts the matching
    search to within color classes.
    """
    inv = [0] * len(b.objects)
    for x, px in enumerate(perm):
        inv[px] = x
    nm = len(a.morphisms)

    def renumber(sa, sb):
        seen: dict = {}
        out = []
        for sig in (*sa, *sb):
            if sig not in seen:
                seen[sig] = len(seen)
            out.append(seen[sig])
        return out[:nm], out[nm:], len(seen)

    ca, cb, width = renumber(
        [(a.dom(m), a.cod(m), m in a.identity_set) for m in range(nm)],
        [(inv[b.dom(m)], inv[b.cod(m)], m in b.identity_set) for m in range(nm)])
    while True:
        ca, cb, w2 = renumber(_color_sigs(a, ca), _color_sigs(b, cb))
        if w2 == width:
            return ca, cb
        width = w2


def _match_morphisms(a: FinCat, b: FinCat, perm):
    nm = len(a.morphisms)
    ca, cb = _joint_colors(a, b, perm)
    if sorted(ca) != sorted(cb):
        return None
    pool: dict = {}
    for n in range(nm):
        pool.setdefault(cb[n], []).append(n)
    # rarest colors first keeps the branching shallow
    order = sorted(range(nm), key=lambda m: (len(pool[ca[m]]), ca[m], m))
    mapping = [-1] * nm
    used = [False] * nm

    def consistent(m):
        for f in a.incoming[a.dom(m)]:
            if mapping[f] < 0:
                continue
            c = a.table[m][f]
            if mapping[c] >= 0 and mapping[c] != b.table[mapping[m]][mapping[f]]:
                return False
        for g in a.outgoing[a.cod(m)]:
            if mapping[g] < 0:
                continue
            c = a.table[g][m]
            if mapping[c] >= 0 and mapping[c] != b.table[mapping[g]][mapping[m]]:
                return False
        return True

    def place(k):
        if k == nm:
            return all(mapping[a.table[g][f]] == b.table[mapping[g]][mapping[f]]
                       for g, f in a.composable_pairs())
        m = order[k]
        for n in pool[ca[m]]:
            if used[n]:
                continue
            mapping[m] = n
            used[n] = True
            if consistent(m) and place(k + 1):
                return True
            mapping[m] = -1
            used[n] = False
        return False

    if place(0):
        return tuple(mapping)
    return None
