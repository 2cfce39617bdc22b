"""Zigzags and the three moves presenting the localized category.

A zigzag is a word of forward arrows and backward weak equivalences.
Two zigzags name the same arrow of the localization exactly when a
finite sequence of three moves (and their inverses) links them: omit an
identity, compose two adjacent same-direction arrows, cancel a weak
equivalence that immediately reverses itself.

``bounded_equiv`` searches that move graph bidirectionally with a
per-side raw-move budget.  An "equivalent" verdict always carries a
``MoveTrace`` that replays; "unknown" only means the budget ran out.
The search itself walks reduced zigzags (alternating directions, no
identity steps) connected by short macro rewrites, each accounted at
its exact raw-move cost, so budgets stay honest while the state space
stays small.  ``Explorer`` amortizes the same walk over every
single-arrow zigzag of a category at once, which is what the bulk
oracle comparisons need.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .congruence import quotient
from .errors import FormatError, MoveError, ValidationError
from .fincat import FinCat

__all__ = [
    "Zigzag", "Move", "MoveTrace", "EquivResult", "ReductionResult",
    "NonfullnessWitness", "Explorer",
    "make_zigzag", "apply_move", "replay", "bounded_equiv",
    "reduce_backward_splits", "ho_hom", "nonfullness_witness",
    "zigzag_to_json", "zigzag_from_json",
]

FWD, BWD = 0, 1
DIR_NAMES = ("fwd", "bwd")

OMIT = "omit-identity"
COMPOSE = "compose-same-direction"
CANCEL = "cancel-weq-pair"


def _dir(d) -> int:
    if d in (FWD, BWD):
        return d
    if d in ("fwd", "forward"):
        return FWD
    if d in ("bwd", "backward"):
        return BWD
    raise FormatError(f"direction must be fwd or bwd, not {d!r}")


def _wset(cat: FinCat, weqs) -> frozenset[int]:
    return frozenset(cat.mor(w) for w in weqs) | cat.identity_set


@dataclass(frozen=True)
class Zigzag:
    """An immutable zigzag word.

    ``steps`` holds (morphism index, direction) pairs; a backward step
    traverses its morphism from cod to dom.  ``source``/``target`` are
    object indices.  Use :func:`make_zigzag` to build validated values.
    """

    source: int
    target: int
    steps: tuple[tuple[int, int], ...]

    def __len__(self):
        return len(self.steps)


def make_zigzag(cat: FinCat, weqs, start, steps) -> Zigzag:
    """Validate endpoint chaining and backward membership in W."""
    members = _wset(cat, weqs)
    at = cat.obj(start)
    source = at
    norm = []
    for entry in steps:
        m, d = entry
        m, d = cat.mor(m), _dir(d)
        if d == FWD:
            if cat.dom(m) != at:
                raise ValidationError(
                    f"zigzag breaks at {cat.mor_name(m)!r}: expected dom "
                    f"{cat.obj_name(at)!r}")
            at = cat.cod(m)
        else:
            if m not in members:
                raise ValidationError(
                    f"backward step {cat.mor_name(m)!r} is not a weak equivalence")
            if cat.cod(m) != at:
                raise ValidationError(
                    f"zigzag breaks at backward {cat.mor_name(m)!r}: expected cod "
                    f"{cat.obj_name(at)!r}")
            at = cat.dom(m)
        norm.append((m, d))
    return Zigzag(source, at, tuple(norm))


@dataclass(frozen=True)
class Move:
    """One raw move: kind, apply/unapply, position, optional payload.

    Payloads (unapply only): omit-identity (morphism, dir) inserts that
    identity step; compose-same-direction (first, second) splits the
    step at ``position`` into two steps in traversal order;
    cancel-weq-pair (w, first_dir) inserts the pair at a boundary.
    """

    kind: str
    direction: str
    position: int
    payload: tuple | None = None


@dataclass(frozen=True)
class MoveTrace:
    start: Zigzag
    end: Zigzag
    moves: tuple[Move, ...]


def apply_move(cat: FinCat, weqs, z: Zigzag, move: str, position: int,
               direction: str, payload=None) -> Zigzag:
    """Apply one move, validating applicability exactly.

    Composing two backward steps requires the composite to be a weak
    equivalence again, otherwise the output would not be a zigzag.
    """
    members = _wset(cat, weqs)
    steps = z.steps
    n = len(steps)
    if direction not in ("apply", "unapply"):
        raise MoveError(f"direction must be apply or unapply, not {direction!r}")

    def boundary(i: int) -> int:
        at = z.source
        for m, d in steps[:i]:
            at = cat.cod(m) if d == FWD else cat.dom(m)
        return at

    if move == OMIT:
        if direction == "apply":
            if not 0 <= position < n or steps[position][0] not in cat.identity_set:
                raise MoveError(f"no identity step at position {position}")
            out = steps[:position] + steps[position + 1:]
        else:
            if not 0 <= position <= n:
                raise MoveError(f"boundary {position} out of range")
            if payload is None:
                raise MoveError("inserting an identity needs (morphism, dir)")
            m, d = cat.mor(payload[0]), _dir(payload[1])
            if m not in cat.identity_set or cat.dom(m) != boundary(position):
                raise MoveError("inserted step must be the identity of the boundary object")
            out = steps[:position] + ((m, d),) + steps[position:]
    elif move == COMPOSE:
        if direction == "apply":
            if not 0 <= position < n - 1:
                raise MoveError(f"no adjacent pair at position {position}")
            (a, da), (b, db) = steps[position], steps[position + 1]
            if da != db:
                raise MoveError("compose needs two steps in the same direction")
            c = cat.table[b][a] if da == FWD else cat.table[a][b]
            if da == BWD and c not in members:
                raise MoveError(
                    f"composite {cat.mor_name(c)!r} of backward steps is not a weak equivalence")
            out = steps[:position] + ((c, da),) + steps[position + 2:]
        else:
            if not 0 <= position < n:
                raise MoveError(f"no step at position {position}")
            if payload is None:
                raise MoveError("splitting needs (first, second)")
            m, d = steps[position]
            first, second = cat.mor(payload[0]), cat.mor(payload[1])
            want = cat.table[second][first] if d == FWD else cat.table[first][second]
            if want != m:
                raise MoveError(
                    f"({cat.mor_name(first)!r}, {cat.mor_name(second)!r}) does not "
                    f"factor {cat.mor_name(m)!r}")
            if d == BWD and (first not in members or second not in members):
                raise MoveError("backward split factors must be weak equivalences")
            out = steps[:position] + ((first, d), (second, d)) + steps[position + 1:]
    elif move == CANCEL:
        if direction == "apply":
            if not 0 <= position < n - 1:
                raise MoveError(f"no adjacent pair at position {position}")
            (a, da), (b, db) = steps[position], steps[position + 1]
            if a != b or da == db:
                raise MoveError("cancel needs the same morphism in both directions")
            out = steps[:position] + steps[position + 2:]
        else:
            if not 0 <= position <= n:
                raise MoveError(f"boundary {position} out of range")
            if payload is None:
                raise MoveError("inserting a pair needs (w, first_dir)")
            w, fd = cat.mor(payload[0]), _dir(payload[1])
            if w not in members:
                raise MoveError(f"{cat.mor_name(w)!r} is not a weak equivalence")
            obj = boundary(position)
            need = cat.dom(w) if fd == FWD else cat.cod(w)
            if need != obj:
                raise MoveError(
                    f"pair on {cat.mor_name(w)!r} does not fit at object {cat.obj_name(obj)!r}")
            out = steps[:position] + ((w, fd), (w, 1 - fd)) + steps[position:]
    else:
        raise MoveError(f"unknown move {move!r}")
    return Zigzag(z.source, z.target, out)


def replay(cat: FinCat, weqs, trace: MoveTrace) -> Zigzag:
    """Apply a trace from its start; raises MoveError if it does not replay."""
    z = trace.start
    for mv in trace.moves:
        z = apply_move(cat, weqs, z, mv.kind, mv.position, mv.direction, mv.payload)
    if z != trace.end:
        raise MoveError("trace does not reach its recorded end zigzag")
    return z


def _invert(cat: FinCat, weqs, before: Zigzag, mv: Move) -> Move:
    if mv.kind == OMIT:
        if mv.direction == "apply":
            return Move(OMIT, "unapply", mv.position, before.steps[mv.position])
        return Move(OMIT, "apply", mv.position)
    if mv.kind == COMPOSE:
        if mv.direction == "apply":
            a, b = before.steps[mv.position][0], before.steps[mv.position + 1][0]
            return Move(COMPOSE, "unapply", mv.position, (a, b))
        return Move(COMPOSE, "apply", mv.position)
    if mv.kind == CANCEL:
        if mv.direction == "apply":
            w, d = before.steps[mv.position]
            return Move(CANCEL, "unapply", mv.position, (w, d))
        return Move(CANCEL, "apply", mv.position)
    raise MoveError(f"unknown move {mv.kind!r}")


def invert_trace(cat: FinCat, weqs, trace: MoveTrace) -> MoveTrace:
    """The move-by-move inverse, replaying end back to start."""
    inverted = []
    z = trace.start
    for mv in trace.moves:
        inverted.append(_invert(cat, weqs, z, mv))
        z = apply_move(cat, weqs, z, mv.kind, mv.position, mv.direction, mv.payload)
    if z != trace.end:
        raise MoveError("trace does not replay; cannot invert")
    return MoveTrace(trace.end, trace.start, tuple(reversed(inverted)))


# -- reduced-state search engine ----------------------------------------
#
# States are (start_object, encoded_steps) with steps m*2+dir, kept
# reduced: no identity steps, no adjacent same-direction steps (except a
# backward pair whose composite left W, which only happens when the
# family breaks axiom ii).  Macro successors bundle a few raw moves and
# are charged their exact raw-move count, so a path cost in the engine
# is a legal move count in the presentation.


class _Engine:
    def __init__(self, cat: FinCat, members: frozenset[int]):
        self.cat = cat
        self.members = members
        self.table = cat.table
        self.dom = tuple(m.dom for m in cat.morphisms)
        self.cod = tuple(m.cod for m in cat.morphisms)
        self.ids = cat.identity_set
        nobj = len(cat.objects)
        self.w_by_dom = tuple(
            tuple(w for w in sorted(members) if self.dom[w] == x and w not in self.ids)
            for x in range(nobj))
        self.w_by_cod = tuple(
            tuple(w for w in sorted(members) if self.cod[w] == x and w not in self.ids)
            for x in range(nobj))
        self._ldiv: dict[tuple[int, int], tuple[int, ...]] = {}
        self._rdiv: dict[tuple[int, int], tuple[int, ...]] = {}
        self._inv: dict[int, tuple] = {}
        self._winv: dict[int, tuple] = {}
        self._wfact: dict[int, tuple] = {}
        self._fact: dict[int, tuple] = {}

    # b with b after g = m
    def ldiv(self, m: int, g: int) -> tuple[int, ...]:
        key = (m, g)
        got = self._ldiv.get(key)
        if got is None:
            got = tuple(b for b in self.cat.hom(self.cod[g], self.cod[m])
                        if self.table[b][g] == m)
            self._ldiv[key] = got
        return got

    # a with g after a = m
    def rdiv(self, m: int, g: int) -> tuple[int, ...]:
        key = (m, g)
        got = self._rdiv.get(key)
        if got is None:
            got = tuple(a for a in self.cat.hom(self.dom[m], self.dom[g])
                        if self.table[g][a] == m)
            self._rdiv[key] = got
        return got

    # one-sided inverses of w: (left: b∘w = id_dom, right: w∘b = id_cod)
    def inv(self, w: int):
        got = self._inv.get(w)
        if got is None:
            idd = self.cat.identity[self.dom[w]]
            idc = self.cat.identity[self.cod[w]]
            pool = self.cat.hom(self.cod[w], self.dom[w])
            got = (tuple(b for b in pool if self.table[b][w] == idd),
                   tuple(b for b in pool if self.table[w][b] == idc))
            self._inv[w] = got
        return got

    # members w one-sided-inverting a forward step b
    def winv(self, b: int):
        got = self._winv.get(b)
        if got is None:
            idc = self.cat.identity[self.cod[b]]
            idd = self.cat.identity[self.dom[b]]
            pool = [w for w in self.cat.hom(self.cod[b], self.dom[b]) if w in self.members]
            got = (tuple(w for w in pool if self.table[b][w] == idc),
                   tuple(w for w in pool if self.table[w][b] == idd))
            self._winv[b] = got
        return got

    # member-pair factorizations of member w, identity halves excluded
    def wfact(self, w: int):
        got = self._wfact.get(w)
        if got is None:
            out = []
            for b in self.cat.outgoing[self.dom[w]]:
                if b in self.members and b not in self.ids:
                    for a in self.ldiv(w, b):
                        if a in self.members and a not in self.ids:
                            out.append((a, b))
            got = tuple(out)
            self._wfact[w] = got
        return got

    # nontrivial factorizations m = q after p
    def fact(self, m: int):
        got = self._fact.get(m)
        if got is None:
            out = []
            for p in self.cat.outgoing[self.dom[m]]:
                if p in self.ids:
                    continue
                for q in self.ldiv(m, p):
                    if q not in self.ids:
                        out.append((p, q))
            got = tuple(out)
            self._fact[m] = got
        return got

    # -- reduction -------------------------------------------------------

    def reduce_plan(self, steps: tuple[int, ...]):
        """Leftmost-first plan of omit/compose actions to a reduced word."""
        plan = []
        work = list(steps)
        i = 0
        while i < len(work):
            m, d = work[i] >> 1, work[i] & 1
            if m in self.ids:
                plan.append(("omit", i))
                del work[i]
                i = 0
                continue
            if i + 1 < len(work) and (work[i + 1] & 1) == d:
                a, b = m, work[i + 1] >> 1
                c = self.table[b][a] if d == FWD else self.table[a][b]
                if d == FWD or c in self.members:
                    plan.append(("compose", i, a, b))
                    work[i] = c * 2 + d
                    del work[i + 1]
                    i = 0
                    continue
            i += 1
        return tuple(work), tuple(plan)

    def seed(self, start: int, steps: tuple[int, ...]):
        reduced, plan = self.reduce_plan(steps)
        return (start, reduced), len(plan)

    # -- macro successors --------------------------------------------------

    def boundaries(self, state):
        start, steps = state
        objs = [start]
        at = start
        for e in steps:
            m, d = e >> 1, e & 1
            at = self.cod[m] if d == FWD else self.dom[m]
            objs.append(at)
        return objs

    def successors(self, state):
        """Yield (next_state, raw_move_cost, descriptor)."""
        start, steps = state
        n = len(steps)
        objs = self.boundaries(state)
        table = self.table

        def finish(new_steps, core_cost, desc):
            reduced, plan = self.reduce_plan(new_steps)
            return (start, reduced), core_cost + len(plan), desc

        for i in range(n):
            e = steps[i]
            m, d = e >> 1, e & 1
            nxt = steps[i + 1] if i + 1 < n else None
            if nxt is not None and (nxt >> 1) == m and (nxt & 1) != d:
                yield finish(steps[:i] + steps[i + 2:], 1, ("cancel", i))
            if d == FWD and nxt is not None and (nxt & 1) == BWD:
                w = nxt >> 1
                for a in self.rdiv(m, w):
                    yield finish(steps[:i] + (a * 2,) + steps[i + 2:], 2,
                                 ("absorb_r", i, a))
            if d == BWD and nxt is not None and (nxt & 1) == FWD:
                f = nxt >> 1
                for b in self.ldiv(f, m):
                    yield finish(steps[:i] + (b * 2,) + steps[i + 2:], 2,
                                 ("absorb_l", i, b))
            if d == BWD:
                linv, rinv = self.inv(m)
                for var, pool in enumerate((linv, rinv)):
                    for b in pool:
                        yield finish(steps[:i] + (b * 2,) + steps[i + 1:], 3,
                                     ("replace_bf", i, b, var))
                for a, b in self.wfact(m):
                    la, ra = self.inv(a)
                    for var, pool in enumerate((la, ra)):
                        for r in pool:
                            yield finish(
                                steps[:i] + (r * 2, b * 2 + BWD) + steps[i + 1:], 4,
                                ("bsplit", i, a, b, 0, r, var))
                    lb, rb = self.inv(b)
                    for var, pool in enumerate((lb, rb)):
                        for r in pool:
                            yield finish(
                                steps[:i] + (a * 2 + BWD, r * 2) + steps[i + 1:], 4,
                                ("bsplit", i, a, b, 1, r, var))
            else:
                wl, wr = self.winv(m)
                for var, pool in enumerate((wl, wr)):
                    for w in pool:
                        yield finish(steps[:i] + (w * 2 + BWD,) + steps[i + 1:], 3,
                                     ("replace_fb", i, w, var))
                for p, q in self.fact(m):
                    cut = self.cod[p]
                    for w in self.w_by_dom[cut]:
                        yield finish(
                            steps[:i] + (table[w][p] * 2, w * 2 + BWD, q * 2)
                            + steps[i + 1:], 3, ("interior", i, p, q, w, 0))
                    for w in self.w_by_cod[cut]:
                        yield finish(
                            steps[:i] + (p * 2, w * 2 + BWD, table[q][w] * 2)
                            + steps[i + 1:], 3, ("interior", i, p, q, w, 1))
        for i in range(n + 1):
            obj = objs[i]
            for w in self.w_by_dom[obj]:
                yield finish(steps[:i] + (w * 2, w * 2 + BWD) + steps[i:], 1,
                             ("expand", i, w, FWD))
            for w in self.w_by_cod[obj]:
                yield finish(steps[:i] + (w * 2 + BWD, w * 2) + steps[i:], 1,
                             ("expand", i, w, BWD))

    # -- raw-move emission (pair mode only) --------------------------------

    def emit(self, z: Zigzag, desc) -> list[Move]:
        """Raw moves realizing a macro from ``z``, reduction included."""
        kind = desc[0]
        i = desc[1]
        moves: list[Move] = []
        if kind == "cancel":
            moves.append(Move(CANCEL, "apply", i))
        elif kind == "absorb_r":
            a = desc[2]
            w = z.steps[i + 1][0]
            moves.append(Move(COMPOSE, "unapply", i, (a, w)))
            moves.append(Move(CANCEL, "apply", i + 1))
        elif kind == "absorb_l":
            b = desc[2]
            w = z.steps[i][0]
            moves.append(Move(COMPOSE, "unapply", i + 1, (w, b)))
            moves.append(Move(CANCEL, "apply", i))
        elif kind == "replace_bf":
            b, var = desc[2], desc[3]
            w = z.steps[i][0]
            if var == 0:
                idd = self.cat.identity[self.dom[w]]
                moves.append(Move(OMIT, "unapply", i + 1, (idd, FWD)))
                moves.append(Move(COMPOSE, "unapply", i + 1, (w, b)))
                moves.append(Move(CANCEL, "apply", i))
            else:
                idc = self.cat.identity[self.cod[w]]
                moves.append(Move(OMIT, "unapply", i, (idc, FWD)))
                moves.append(Move(COMPOSE, "unapply", i, (b, w)))
                moves.append(Move(CANCEL, "apply", i + 1))
        elif kind == "replace_fb":
            w, var = desc[2], desc[3]
            if var == 0:
                moves.append(Move(CANCEL, "unapply", i, (w, BWD)))
                moves.append(Move(COMPOSE, "apply", i + 1))
                moves.append(Move(OMIT, "apply", i + 1))
            else:
                moves.append(Move(CANCEL, "unapply", i + 1, (w, FWD)))
                moves.append(Move(COMPOSE, "apply", i))
                moves.append(Move(OMIT, "apply", i))
        elif kind == "expand":
            w, fd = desc[2], desc[3]
            moves.append(Move(CANCEL, "unapply", i, (w, fd)))
        elif kind == "interior":
            p, q, w, var = desc[2], desc[3], desc[4], desc[5]
            moves.append(Move(COMPOSE, "unapply", i, (p, q)))
            if var == 0:
                moves.append(Move(CANCEL, "unapply", i + 1, (w, FWD)))
                moves.append(Move(COMPOSE, "apply", i))
            else:
                moves.append(Move(CANCEL, "unapply", i + 1, (w, BWD)))
                moves.append(Move(COMPOSE, "apply", i + 2))
        elif kind == "bsplit":
            a, b, half, r, var = desc[2], desc[3], desc[4], desc[5], desc[6]
            moves.append(Move(COMPOSE, "unapply", i, (a, b)))
            pos = i if half == 0 else i + 1
            w = a if half == 0 else b
            if var == 0:
                idd = self.cat.identity[self.dom[w]]
                moves.append(Move(OMIT, "unapply", pos + 1, (idd, FWD)))
                moves.append(Move(COMPOSE, "unapply", pos + 1, (w, r)))
                moves.append(Move(CANCEL, "apply", pos))
            else:
                idc = self.cat.identity[self.cod[w]]
                moves.append(Move(OMIT, "unapply", pos, (idc, FWD)))
                moves.append(Move(COMPOSE, "unapply", pos, (r, w)))
                moves.append(Move(CANCEL, "apply", pos + 1))
        else:
            raise MoveError(f"unknown macro {kind!r}")
        # Reduction tail: mirror reduce_plan on the live zigzag.
        cur = z
        for mv in moves:
            cur = apply_move(self.cat, self.members, cur, mv.kind, mv.position,
                             mv.direction, mv.payload)
        enc = tuple(m * 2 + d for m, d in cur.steps)
        _, plan = self.reduce_plan(enc)
        for action in plan:
            if action[0] == "omit":
                mv = Move(OMIT, "apply", action[1])
            else:
                mv = Move(COMPOSE, "apply", action[1])
            moves.append(mv)
            cur = apply_move(self.cat, self.members, cur, mv.kind, mv.position,
                             mv.direction, mv.payload)
        return moves


def _to_state(z: Zigzag):
    return (z.source, tuple(m * 2 + d for m, d in z.steps))


def _to_zigzag(cat: FinCat, state) -> Zigzag:
    start, steps = state
    at = start
    out = []
    for e in steps:
        m, d = e >> 1, e & 1
        out.append((m, d))
        at = cat.cod(m) if d == FWD else cat.dom(m)
    return Zigzag(start, at, tuple(out))


@dataclass(frozen=True)
class EquivResult:
    status: str                     # "equivalent" or "unknown"
    trace: MoveTrace | None

    @property
    def equivalent(self) -> bool:
        return self.status == "equivalent"


class Explorer:
    """Shared bounded search over one category's move graph.

    ``pair`` answers a single bounded_equiv question with a replayable
    trace.  ``single_arrow_relation`` seeds every one-arrow zigzag at
    once, applies each rewrite a single time, and unions seeds whose
    rewrites land on the same word; longer derivations compose through
    intermediate seeds, which only ever adds true equivalences.  One
    application per seed suffices: a pair equalized by a member after
    bracketing meets in one rewrite from each side (boundary insertion
    when a bracket is trivial, interior insertion otherwise), and every
    morphism in a derivation chain is itself a seed.
    """

    def __init__(self, cat: FinCat, weqs, budget: int = 8):
        self.cat = cat
        self.members = _wset(cat, weqs)
        self.budget = int(budget)
        if self.budget < 0:
            raise ValidationError("budget must be nonnegative")
        self.engine = _Engine(cat, self.members)

    # -- bulk mode ---------------------------------------------------------

    def single_arrow_relation(self) -> frozenset[tuple[int, int]]:
        eng = self.engine
        nm = len(self.cat.morphisms)
        parent = list(range(nm))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def union(x, y):
            rx, ry = find(x), find(y)
            if rx != ry:
                parent[max(rx, ry)] = min(rx, ry)

        # Seed words stay unreduced so interior rewrites can still split
        # an identity arrow across a section/retraction bracketing.
        visited: dict = {}
        for f in range(nm):
            visited[(self.cat.dom(f), (f * 2,))] = f
        for state, f in list(visited.items()):
            for nstate, mc, _ in eng.successors(state):
                if mc > self.budget:
                    continue
                seen = visited.get(nstate)
                if seen is None:
                    visited[nstate] = f
                else:
                    union(f, seen)
        out = set()
        for f, g in self.cat.parallel_pairs():
            if find(f) == find(g):
                out.add((f, g))
        return frozenset(out)

    # -- pair mode -----------------------------------------------------------

    def pair(self, z1: Zigzag, z2: Zigzag) -> EquivResult:
        if (z1.source, z1.target) != (z2.source, z2.target):
            raise ValidationError("zigzags must share both endpoints")
        if z1 == z2:
            return EquivResult("equivalent", MoveTrace(z1, z2, ()))
        eng = self.engine
        # visited: state -> (side, cost, parent_state, descriptor)
        visited: dict = {}
        buckets: list[list] = [[] for _ in range(self.budget + 1)]
        seed_states = []
        meet = None
        for side, z in enumerate((z1, z2)):
            state, cost = eng.seed(z.source, tuple(m * 2 + d for m, d in z.steps))
            seed_states.append(state if cost <= self.budget else None)
            if cost > self.budget:
                continue
            other = visited.get(state)
            if other is not None and other[0] != side:
                meet = (state, None, None)
                break
            visited[state] = (side, cost, None, None)
            buckets[cost].append((state, side))
        if meet is None:
            for cost in range(self.budget + 1):
                if meet:
                    break
                for state, side in buckets[cost]:
                    for nstate, mc, desc in eng.successors(state):
                        nc = cost + mc
                        if nc > self.budget:
                            continue
                        seen = visited.get(nstate)
                        if seen is None:
                            visited[nstate] = (side, nc, state, desc)
                            buckets[nc].append((nstate, side))
                        elif seen[0] != side:
                            # Edge from `state` on this side into the other
                            # side's territory at `nstate`.
                            meet = (nstate, state, desc)
                            break
                    if meet:
                        break
        if meet is None:
            return EquivResult("unknown", None)
        return EquivResult("equivalent", self._build_trace(z1, z2, visited, meet))

    def _seed_reduce(self, z: Zigzag) -> tuple[Zigzag, list[Move]]:
        moves: list[Move] = []
        enc = tuple(m * 2 + d for m, d in z.steps)
        _, plan = self.engine.reduce_plan(enc)
        for action in plan:
            mv = (Move(OMIT, "apply", action[1]) if action[0] == "omit"
                  else Move(COMPOSE, "apply", action[1]))
            moves.append(mv)
            z = apply_move(self.cat, self.members, z, mv.kind, mv.position,
                           mv.direction, mv.payload)
        return z, moves

    def _side_moves(self, seed: Zigzag, state, visited) -> tuple[Zigzag, list[Move]]:
        """Replay seed -> state, returning the end zigzag and its raw moves."""
        chain = []
        cur = state
        while visited[cur][2] is not None:
            chain.append(visited[cur][3])
            cur = visited[cur][2]
        chain.reverse()
        z, moves = self._seed_reduce(seed)
        for desc in chain:
            emitted = self.engine.emit(z, desc)
            for mv in emitted:
                z = apply_move(self.cat, self.members, z, mv.kind, mv.position,
                               mv.direction, mv.payload)
            moves.extend(emitted)
        return z, moves

    def _build_trace(self, z1: Zigzag, z2: Zigzag, visited, meet) -> MoveTrace:
        meet_state, edge_from, edge_desc = meet
        meet_side = visited[meet_state][0]
        if edge_desc is None:
            # Second seed reduced onto a state the first seed had claimed.
            za, moves_a = self._side_moves(z1, meet_state, visited)
            zb, moves_b = self._seed_reduce(z2)
        elif meet_side == 1:
            # Edge ran from side 0 into side-1 territory.
            za, moves_a = self._side_moves(z1, edge_from, visited)
            emitted = self.engine.emit(za, edge_desc)
            for mv in emitted:
                za = apply_move(self.cat, self.members, za, mv.kind, mv.position,
                                mv.direction, mv.payload)
            moves_a.extend(emitted)
            zb, moves_b = self._side_moves(z2, meet_state, visited)
        else:
            # Edge ran from side 1 into side-0 territory.
            za, moves_a = self._side_moves(z1, meet_state, visited)
            zb, moves_b = self._side_moves(z2, edge_from, visited)
            emitted = self.engine.emit(zb, edge_desc)
            for mv in emitted:
                zb = apply_move(self.cat, self.members, zb, mv.kind, mv.position,
                                mv.direction, mv.payload)
            moves_b.extend(emitted)
        if za != zb:
            raise MoveError("bidirectional search met at inconsistent states")
        back = invert_trace(self.cat, self.members, MoveTrace(z2, zb, tuple(moves_b)))
        full = tuple(moves_a) + back.moves
        trace = MoveTrace(z1, z2, full)
        replay(self.cat, self.members, trace)
        return trace


def bounded_equiv(cat: FinCat, weqs, z1: Zigzag, z2: Zigzag, budget: int = 8) -> EquivResult:
    """Bidirectional bounded search; "equivalent" verdicts carry a trace."""
    return Explorer(cat, weqs, budget).pair(z1, z2)


# -- length-one reduction under a split certificate -----------------------


@dataclass(frozen=True)
class ReductionResult:
    zigzag: Zigzag
    trace: MoveTrace


def reduce_backward_splits(cat: FinCat, weqs, splits, z: Zigzag) -> ReductionResult:
    """Rewrite every backward step away, down to at most one forward arrow.

    Each backward member first expands into its certified split
    factorization; a backward section s then turns into its forward
    retraction (insert the identity, split it as r∘s, cancel), and dually
    for retractions.  Composing the remaining forward run finishes.
    """
    members = _wset(cat, weqs)
    partner = {}
    for m, inv, kind in splits.split_weqs:
        if m not in partner:
            partner[m] = (inv, kind)
    moves: list[Move] = []
    cur = z

    def push(kind, position, direction, payload=None):
        nonlocal cur
        cur = apply_move(cat, members, cur, kind, position, direction, payload)
        moves.append(Move(kind, direction, position, payload))

    # Expand non-split backward members via certificate decompositions.
    i = 0
    while i < len(cur.steps):
        m, d = cur.steps[i]
        if d != BWD or m in cat.identity_set or m in partner:
            i += 1
            continue
        deco = splits.decompositions.get(m)
        if deco is None or len(deco) < 2:
            raise ValidationError(
                f"no split decomposition recorded for {cat.mor_name(m)!r}")
        # Peel the first-applied factor off at each stage: m = rest∘first.
        rest = list(deco)
        while len(rest) > 1:
            first = rest[0]
            rest = rest[1:]
            acc = rest[0]
            for f in rest[1:]:
                acc = cat.table[f][acc]
            push(COMPOSE, i, "unapply", (acc, first))
        i += len(deco)
    # Replace each backward split by its forward partner; drop backward ids.
    i = 0
    while i < len(cur.steps):
        m, d = cur.steps[i]
        if d != BWD:
            i += 1
            continue
        if m in cat.identity_set:
            push(OMIT, i, "apply")
            continue
        inv, kind = partner[m]
        if kind == "section":
            # m = s, inv = r, r∘s = id on dom(s): s backward becomes r forward.
            idd = cat.identity[cat.dom(m)]
            push(OMIT, i + 1, "unapply", (idd, FWD))
            push(COMPOSE, i + 1, "unapply", (m, inv))
            push(CANCEL, i, "apply")
        else:
            # m = r, inv = s, r∘s = id on cod(r): r backward becomes s forward.
            idc = cat.identity[cat.cod(m)]
            push(OMIT, i, "unapply", (idc, FWD))
            push(COMPOSE, i, "unapply", (inv, m))
            push(CANCEL, i + 1, "apply")
        i += 1
    # All steps are forward now; fold them into one arrow.
    while len(cur.steps) > 1:
        push(COMPOSE, 0, "apply")
    if len(cur.steps) == 1 and cur.steps[0][0] in cat.identity_set:
        push(OMIT, 0, "apply")
    trace = MoveTrace(z, cur, tuple(moves))
    replay(cat, members, trace)
    return ReductionResult(cur, trace)


# -- certified hom-sets and non-fullness ----------------------------------


def ho_hom(cat: FinCat, weqs, cert, x, y) -> tuple[int, ...]:
    """Hom-set of the certified homotopy quotient at (x, y).

    Returns quotient-morphism indices; the certificate guarantees the
    quotient is the localization, so these are the localized hom-classes.
    """
    if cert is None:
        raise ValidationError("ho_hom needs a Whitehead certificate")
    q = quotient(cat, cert.congruence)
    return q.quotient.hom(x, y)


@dataclass(frozen=True)
class NonfullnessWitness:
    """Objects connected by a zigzag but with an empty hom-set.

    Any localization functor image of the zigzag would need a preimage
    arrow; there is none, so no congruence quotient can be the
    localization.
    """

    source: int
    target: int
    zigzag: Zigzag


def nonfullness_witness(cat: FinCat, weqs) -> NonfullnessWitness | None:
    """First (source, target) pair, in index order, proving non-fullness."""
    members = _wset(cat, weqs)
    nobj = len(cat.objects)
    for x in range(nobj):
        # BFS over forward arrows and backward members.
        parents: dict[int, tuple[int, int, int]] = {x: None}
        frontier = [x]
        while frontier:
            nxt = []
            for at in frontier:
                for m in cat.outgoing[at]:
                    if cat.cod(m) not in parents:
                        parents[cat.cod(m)] = (at, m, FWD)
                        nxt.append(cat.cod(m))
                for m in cat.incoming[at]:
                    if m in members and cat.dom(m) not in parents:
                        parents[cat.dom(m)] = (at, m, BWD)
                        nxt.append(cat.dom(m))
            frontier = nxt
        for y in range(nobj):
            if y in parents and not cat.hom(x, y):
                steps = []
                at = y
                while parents[at] is not None:
                    prev, m, d = parents[at]
                    steps.append((m, d))
                    at = prev
                steps.reverse()
                return NonfullnessWitness(x, y, Zigzag(x, y, tuple(steps)))
    return None


# -- serialization ---------------------------------------------------------


def zigzag_to_json(cat: FinCat, z: Zigzag) -> dict:
    return {
        "source": cat.obj_name(z.source),
        "target": cat.obj_name(z.target),
        "steps": [[cat.mor_name(m), DIR_NAMES[d]] for m, d in z.steps],
    }


def zigzag_from_json(cat: FinCat, weqs, document) -> Zigzag:
    """Read a zigzag from a mapping or JSON text: {"start", "steps"}."""
    if isinstance(document, (str, bytes)):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as e:
            raise FormatError(f"not valid JSON: {e}") from None
    if not isinstance(document, dict) or "start" not in document:
        raise FormatError('zigzag document needs "start" and "steps"')
    steps = document.get("steps", [])
    if not isinstance(steps, list):
        raise FormatError("zigzag steps: list required")
    parsed = []
    for entry in steps:
        if not isinstance(entry, (list, tuple)) or len(entry) != 2:
            raise FormatError("zigzag step must be [morphism, direction]")
        parsed.append((entry[0], entry[1]))
    return make_zigzag(cat, weqs, document["start"], parsed)


def move_to_json(cat: FinCat, mv: Move) -> dict:
    doc = {"move": mv.kind, "direction": mv.direction, "position": mv.position}
    if mv.payload is not None:
        if mv.kind == OMIT:
            doc["payload"] = [cat.mor_name(mv.payload[0]), DIR_NAMES[mv.payload[1]]]
        elif mv.kind == COMPOSE:
            doc["payload"] = [cat.mor_name(mv.payload[0]), cat.mor_name(mv.payload[1])]
        else:
            doc["payload"] = [cat.mor_name(mv.payload[0]), DIR_NAMES[mv.payload[1]]]
    return doc


def trace_to_json(cat: FinCat, trace: MoveTrace) -> dict:
    return {
        "start": zigzag_to_json(cat, trace.start),
        "end": zigzag_to_json(cat, trace.end),
        "moves": [move_to_json(cat, mv) for mv in trace.moves],
    }
