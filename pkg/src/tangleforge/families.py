"""Forbidden-set families as witness-producing membership oracles.

A family never materializes its members: it answers "does this set contain a
member, and show one".  Witness choice is deterministic (lexicographically
least by sorted oriented-id sequence) so golden files stay stable.  Each
family also exposes ``is_member`` as the direct definitional test, which the
tests use as an independent re-check of every witness.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import product

from .errors import MissingCapability, ValidationError
from .grounds import GraphRealization, SideRealization
from .system import SeparationSystem, inverse


@dataclass(frozen=True)
class Witness:
    """A member of the family found inside a queried set.

    ``evidence`` carries the family-specific proof data (intersection sets,
    bounding joins) so membership can be re-verified without re-running the
    scan that found it.
    """

    members: frozenset[int]
    kind: str
    evidence: dict

    def to_json_dict(self):
        return {
            "members": sorted(self.members),
            "kind": self.kind,
            "evidence": {k: v for k, v in sorted(self.evidence.items())},
        }


class ForbiddenFamily:
    """Base class: bound to a system, queried with sets of oriented ids."""

    kind = "abstract"
    arity: int | None = 3  # max member size; None means unbounded

    def __init__(self, system: SeparationSystem | None):
        self.system = system

    # -- mapping between the caller's system and the bound one ----------------

    def _translate(self, system: SeparationSystem, members):
        if self.system is None or system is self.system:
            return sorted(members), None
        up = system.oriented_into(self.system)
        down = {up[o]: o for o in range(len(up))}
        return sorted(up[x] for x in members), down

    # -- family-specific hooks -------------------------------------------------

    def is_member(self, members) -> bool:
        """Direct definitional test against the bound system's ids."""
        raise NotImplementedError

    def evidence(self, members) -> dict:
        return {}

    def _search(self, work: list[int]):
        """Lexicographically least member among subsets of ``work``."""
        if self.is_member(frozenset()):
            return frozenset()
        cap = self.arity if self.arity is not None else len(work)

        def rec(prefix, start):
            fp = frozenset(prefix)
            if prefix and self.is_member(fp):
                return fp
            if len(prefix) >= cap:
                return None
            for i in range(start, len(work)):
                hit = rec(prefix + [work[i]], i + 1)
                if hit is not None:
                    return hit
            return None

        return rec([], 0)

    # -- public API --------------------------------------------------------------

    def forbidden_subset(self, system: SeparationSystem, members) -> Witness | None:
        """Some member inside ``members``, or None; deterministic choice."""
        work, down = self._translate(system, members)
        hit = self._search(work)
        if hit is None:
            return None
        out = hit if down is None else frozenset(down[x] for x in hit)
        return Witness(out, self.kind, self.evidence(hit))

    def extends_member(self, system: SeparationSystem, members, new: int) -> bool:
        """Does adding ``new`` to a member-free set create a member?

        Default falls back to a full subset search; subclasses override with
        an incremental scan so enumeration stays cheap.
        """
        return self.forbidden_subset(system, frozenset(members) | {new}) is not None

    def to_json_dict(self):
        return {"format": "family/v1", "kind": self.kind}


class EmptyFamily(ForbiddenFamily):
    kind = "empty"
    arity = 0

    def __init__(self):
        super().__init__(None)

    def is_member(self, members):
        return False

    def forbidden_subset(self, system, members):
        return None

    def extends_member(self, system, members, new):
        return False


class ExplicitFamily(ForbiddenFamily):
    """A finite, explicitly listed family of member sets."""

    kind = "explicit"

    def __init__(self, members, system: SeparationSystem):
        super().__init__(system)
        self.members = frozenset(frozenset(m) for m in members)
        for m in self.members:
            for o in m:
                if not (0 <= o < system.n_oriented):
                    raise ValidationError(f"member id {o} out of range")
        self.arity = max((len(m) for m in self.members), default=0)

    def is_member(self, members):
        return frozenset(members) in self.members

    def _search(self, work):
        ws = set(work)
        inside = [m for m in self.members if m <= ws]
        if not inside:
            return None
        return min(inside, key=lambda m: sorted(m))

    def extends_member(self, system, members, new):
        work, _ = self._translate(system, frozenset(members) | {new})
        ws = set(work)
        n = self._translate(system, {new})[0][0]
        return any(n in m and m <= ws for m in self.members)

    def to_json_dict(self):
        return {
            "format": "family/v1",
            "kind": "explicit",
            "explicit_members": sorted([sorted(m) for m in self.members]),
        }


class BlocksFamily(ForbiddenFamily):
    """Sets whose big-side intersection has fewer than k vertices.

    Superset-closed, so containment of a member is decided by the set itself;
    witnesses are minimized greedily to the lexicographically least member.
    """

    kind = "blocks"
    arity = None

    def __init__(self, k: int, system: SeparationSystem):
        if not isinstance(system.ground, GraphRealization):
            raise MissingCapability("blocks family needs a graph-ground system")
        super().__init__(system)
        self.k = int(k)
        self._ground = system.ground

    def _intersection(self, members) -> frozenset:
        out = frozenset(self._ground.graph.vertices())
        for o in sorted(members):
            out &= self._ground.big_side(o)
        return out

    def is_member(self, members):
        return len(self._intersection(members)) < self.k

    def evidence(self, members):
        return {"big_side_intersection": sorted(self._intersection(members)),
                "k": self.k}

    def _search(self, work):
        if self.is_member(frozenset()):
            return frozenset()
        if not self.is_member(frozenset(work)):
            return None  # superset-closed: the whole set decides
        # Superset closure makes the lexicographically least member the
        # shortest member prefix of the sorted candidate sequence.
        chosen: list[int] = []
        for x in work:
            chosen.append(x)
            if self.is_member(frozenset(chosen)):
                break
        return frozenset(chosen)

    def extends_member(self, system, members, new):
        work, _ = self._translate(system, frozenset(members) | {new})
        return self.is_member(frozenset(work))

    def to_json_dict(self):
        return {"format": "family/v1", "kind": "blocks", "k": self.k}


class ClusterFamily(ForbiddenFamily):
    """Triples of sides (repetition allowed) agreeing on fewer than n points."""

    kind = "cluster"
    arity = 3

    def __init__(self, n: int, system: SeparationSystem):
        if not isinstance(system.ground, SideRealization):
            raise MissingCapability("cluster family needs a subset-ground system")
        super().__init__(system)
        self.n = int(n)
        self._ground = system.ground

    def _agree(self, members) -> frozenset:
        out = frozenset(range(self._ground.size))
        for o in sorted(members):
            out &= self._ground.side(o)
        return out

    def is_member(self, members):
        # a member is {r, s, t} as a set: 1..3 sides with small agreement
        return 0 < len(members) <= 3 and len(self._agree(members)) < self.n

    def evidence(self, members):
        return {"agreement_set": sorted(self._agree(members)), "n": self.n}

    def extends_member(self, system, members, new):
        work, _ = self._translate(system, members)
        x = self._translate(system, {new})[0][0]
        pool = [x] + work
        side = self._ground.side
        sx = side(x)
        for y in pool:
            sxy = sx & side(y)
            for z in pool:
                if len(sxy & side(z)) < self.n:
                    return True
        return False

    def to_json_dict(self):
        return {"format": "family/v1", "kind": "cluster", "n": self.n}


class ProfileFamily(ForbiddenFamily):
    """Pairs together with the join of their inverses."""

    kind = "profile"
    arity = 3

    def __init__(self, system: SeparationSystem):
        if not system.has_universe():
            raise MissingCapability("profile family needs lattice operations")
        super().__init__(system)

    def _third(self, x, y):
        return int(self.system.join[inverse(x), inverse(y)])

    def is_member(self, members):
        ms = sorted(members)
        if not 0 < len(ms) <= 3:
            return False
        fs = frozenset(self.system.canon(m) for m in ms)
        for x in ms:
            for y in ms:
                trip = frozenset(self.system.canon(v)
                                 for v in (x, y, self._third(x, y)))
                if trip == fs:
                    return True
        return False

    def evidence(self, members):
        ms = sorted(members)
        fs = frozenset(self.system.canon(m) for m in ms)
        for x in ms:
            for y in ms:
                if frozenset(self.system.canon(v)
                             for v in (x, y, self._third(x, y))) == fs:
                    return {"pair": [x, y], "join_of_inverses": self._third(x, y)}
        return {}

    def extends_member(self, system, members, new):
        work, _ = self._translate(system, members)
        x = self._translate(system, {new})[0][0]
        pool = [x] + work
        have = set(pool)
        for y in pool:
            if self._third(x, y) in have:
                return True
        for y in work:
            for z in work:
                if self._third(y, z) == x:
                    return True
        return False

    def to_json_dict(self):
        return {"format": "family/v1", "kind": "profile"}


class StrongProfileFamily(ForbiddenFamily):
    """Pairs with any element below the join of their inverses."""

    kind = "strong_profile"
    arity = 3

    def __init__(self, system: SeparationSystem):
        if not system.has_universe():
            raise MissingCapability("strong-profile family needs lattice operations")
        super().__init__(system)

    def is_member(self, members):
        ms = sorted(members)
        if not 0 < len(ms) <= 3:
            return False
        fs = frozenset(self.system.canon(m) for m in ms)
        J = self.system.join
        L = self.system.leq
        for x in ms:
            for y in ms:
                bound = J[inverse(x), inverse(y)]
                for z in ms:
                    if L[z, bound] and frozenset(
                            self.system.canon(v) for v in (x, y, z)) == fs:
                        return True
        return False

    def evidence(self, members):
        ms = sorted(members)
        fs = frozenset(self.system.canon(m) for m in ms)
        J, L = self.system.join, self.system.leq
        for x in ms:
            for y in ms:
                bound = J[inverse(x), inverse(y)]
                for z in ms:
                    if L[z, bound] and frozenset(
                            self.system.canon(v) for v in (x, y, z)) == fs:
                        return {"pair": [x, y], "bounded": z,
                                "join_of_inverses": int(bound)}
        return {}

    def extends_member(self, system, members, new):
        work, _ = self._translate(system, members)
        x = self._translate(system, {new})[0][0]
        pool = [x] + work
        J, L = self.system.join, self.system.leq
        # new element in the pair position
        for y in pool:
            bound = J[inverse(x), inverse(y)]
            for z in pool:
                if L[z, bound]:
                    return True
        # new element in the bounded position
        for y in work:
            for z in work:
                if L[x, J[inverse(y), inverse(z)]]:
                    return True
        return False

    def to_json_dict(self):
        return {"format": "family/v1", "kind": "strong_profile"}


class GraphTangleFamily(ForbiddenFamily):
    """Triples of small sides whose induced subgraphs cover the whole graph."""

    kind = "graph_tangle"
    arity = 3

    def __init__(self, system: SeparationSystem):
        if not isinstance(system.ground, GraphRealization):
            raise MissingCapability("graph-tangle family needs a graph-ground system")
        super().__init__(system)
        self._ground = system.ground

    def _covers(self, members) -> bool:
        g = self._ground.graph
        verts = set()
        edges = set()
        for o in members:
            A = self._ground.side_pair(o)[0]
            verts |= A
            edges |= g.induced_edges(A)
        return len(verts) == g.n and edges == set(g.edges)

    def is_member(self, members):
        return 0 < len(members) <= 3 and self._covers(members)

    def evidence(self, members):
        return {"covering_sides": [sorted(self._ground.side_pair(o)[0])
                                   for o in sorted(members)]}

    def extends_member(self, system, members, new):
        work, _ = self._translate(system, members)
        x = self._translate(system, {new})[0][0]
        pool = [x] + work
        for y in pool:
            for z in pool:
                if self._covers({x, y, z}):
                    return True
        return False

    def to_json_dict(self):
        return {"format": "family/v1", "kind": "graph_tangle"}


# -- constructors -----------------------------------------------------------


def make_empty() -> EmptyFamily:
    return EmptyFamily()


def make_explicit(members, system) -> ExplicitFamily:
    return ExplicitFamily(members, system)


def make_blocks(k, system) -> BlocksFamily:
    return BlocksFamily(k, system)


def make_cluster(n, system) -> ClusterFamily:
    return ClusterFamily(n, system)


def make_profile(universe) -> ProfileFamily:
    return ProfileFamily(universe)


def make_strong_profile(universe) -> StrongProfileFamily:
    return StrongProfileFamily(universe)


def make_graph_tangle(system) -> GraphTangleFamily:
    return GraphTangleFamily(system)


def family_from_json(d: dict, system: SeparationSystem) -> ForbiddenFamily:
    if d.get("format", "family/v1") != "family/v1":
        raise ValidationError(f"unsupported family format {d.get('format')!r}")
    kind = d["kind"]
    if kind == "empty":
        return make_empty()
    if kind == "explicit":
        return make_explicit([frozenset(m) for m in d.get("explicit_members", [])],
                             system)
    if kind == "blocks":
        return make_blocks(int(d["k"]), system)
    if kind == "cluster":
        return make_cluster(int(d["n"]), system)
    if kind == "profile":
        return make_profile(system)
    if kind == "strong_profile":
        return make_strong_profile(system)
    if kind == "graph_tangle":
        return make_graph_tangle(system)
    raise ValidationError(f"unknown family kind {kind!r}")


def dump_family(family: ForbiddenFamily) -> str:
    return json.dumps(family.to_json_dict(), sort_keys=True, indent=1)


def load_family(text: str, system: SeparationSystem) -> ForbiddenFamily:
    return family_from_json(json.loads(text), system)


# -- desk-scale certifiers -----------------------------------------------------
#
# These encode the theory-side conditions as testable artifacts.  They are
# exponential by design and never called during construction.


def is_standard(family: ForbiddenFamily, system: SeparationSystem):
    """Singletons of co-trivial orientations must be members.

    Returns (ok, counterexamples) where counterexamples lists trivial
    oriented ids whose inverse singleton is not in the family.
    """
    bad = []
    for o in system.trivial_orienteds():
        fam_sys = family.system or system
        up = system.oriented_into(fam_sys)
        if not family.is_member(frozenset({up[inverse(o)]})):
            bad.append(o)
    return (not bad, bad)


def _downset(system, o):
    return [y for y in system.all_oriented() if system.leq[y, o]]


def is_closed_under_minimization(family: ForbiddenFamily,
                                 system: SeparationSystem,
                                 max_size: int | None = None):
    """Every pointwise lowering of every (small) member is again a member.

    Members are enumerated up to the family's witness arity (or ``max_size``);
    unbounded families get a default cap of 3, which keeps this a desk-scale
    spot check rather than a proof.
    """
    cap = max_size if max_size is not None else (family.arity or 3)
    fam_sys = family.system or system
    up = system.oriented_into(fam_sys)
    ids = sorted(system.all_oriented())
    bad = []

    def subsets(start, size, acc):
        yield acc
        if size == 0:
            return
        for i in range(start, len(ids)):
            yield from subsets(i + 1, size - 1, acc + [ids[i]])

    for sub in subsets(0, cap, []):
        if not sub:
            continue
        member = frozenset(sub)
        if not family.is_member(frozenset(up[x] for x in member)):
            continue
        downs = [_downset(system, x) for x in sub]
        for choice in product(*downs):
            lowered = frozenset(choice)
            if not family.is_member(frozenset(up[x] for x in lowered)):
                bad.append((member, lowered))
                if len(bad) >= 5:
                    return (False, bad)
    return (not bad, bad)


def is_rich(family: ForbiddenFamily, system: SeparationSystem, budget=None):
    """Forbidden-containing consistent orientations must contain strongly
    efficient forbidden subsets.  Decided by exhaustive enumeration."""
    from .oracle import all_consistent_orientations
    bad = []
    for tau in all_consistent_orientations(system, budget):
        if family.forbidden_subset(system, tau) is None:
            continue
        survivors = frozenset(tau) - system.eclipsed_elements(tau, weak=True)
        if family.forbidden_subset(system, survivors) is None:
            bad.append(tau)
    return (not bad, bad)
