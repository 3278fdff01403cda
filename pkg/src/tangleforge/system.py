"""Finite separation systems.

A system holds ``count`` unoriented separations.  Each separation ``s`` has two
orientations encoded as integers: ``2*s`` (forward) and ``2*s + 1`` (backward).
The involution flips the low bit.  The partial order is stored explicitly as a
boolean ``(2n, 2n)`` matrix, precomputed and validated at load; desk-scale
sizes make the quadratic storage cheap and every comparison O(1).

Partial orientations are plain ``frozenset``s of oriented ids throughout the
package.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import GroundMismatch, InconsistentInput, ValidationError

# Above this many oriented elements, the cubic lattice-law checks switch from
# exhaustive to deterministic sampling (the report says which one ran).
LATTICE_EXHAUSTIVE_LIMIT = 260
_SAMPLED_TRIPLES = 20000


def inverse(o: int) -> int:
    """The other orientation of the same separation."""
    return o ^ 1


def sep_of(o: int) -> int:
    """Unoriented separation id underlying an oriented id."""
    return o >> 1


def forward(s: int) -> int:
    return 2 * s


def backward(s: int) -> int:
    return 2 * s + 1


def fmt_oriented(o: int) -> str:
    """Human-readable oriented id: separation index plus side marker."""
    return f"{sep_of(o)}{'+' if o % 2 == 0 else '-'}"


@dataclass
class ValidationIssue:
    code: str
    detail: str

    def __str__(self):
        return f"{self.code}: {self.detail}"


@dataclass
class ValidationReport:
    """Axioms checked and every violation found; empty issues means well-formed."""

    issues: list[ValidationIssue] = field(default_factory=list)
    checked: dict[str, str] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.issues

    def __bool__(self) -> bool:
        return self.ok

    def add(self, code, detail):
        self.issues.append(ValidationIssue(code, detail))

    def summary(self) -> str:
        if self.ok:
            return "ok"
        return "; ".join(str(i) for i in self.issues[:10])


class SeparationSystem:
    """A finite set of oriented separations with order, involution and orders.

    Parameters
    ----------
    leq : (2n, 2n) boolean matrix; ``leq[a, b]`` means ``a <= b``.
    orders : length-n reals; the order ``|s|`` attaches to the unoriented id.
    join, meet : optional (2n, 2n) integer tables of oriented ids making the
        system a lattice ("universe").  Both or neither.
    distributive : claim that the lattice is distributive (validated).
    ground : optional realization payload (graph side pairs, subset sides)
        used by concrete forbidden families.
    parent, back_map : when this system was carved out of another one,
        ``back_map[s]`` is the parent's unoriented id for local id ``s``.
    allow_degenerate : admit separations whose two orientations coincide
        (both ids then alias one element; rejected by default).
    """

    def __init__(self, leq, orders, *, join=None, meet=None, distributive=False,
                 ground=None, parent=None, back_map=None,
                 allow_degenerate=False, check=True):
        leq = np.array(leq, dtype=bool)
        orders = np.array(orders, dtype=float)
        n2 = leq.shape[0]
        if leq.ndim != 2 or leq.shape[1] != n2 or n2 % 2 != 0:
            raise ValidationError(f"leq must be square with even side, got {leq.shape}")
        if orders.shape != (n2 // 2,):
            raise ValidationError(
                f"orders must have one entry per separation, got {orders.shape}")
        self.count = n2 // 2
        self.leq = leq
        self.orders = orders
        self.join = None if join is None else np.array(join, dtype=np.int64)
        self.meet = None if meet is None else np.array(meet, dtype=np.int64)
        self.distributive = bool(distributive)
        self.ground = ground
        self.parent = parent
        self.back_map = None if back_map is None else tuple(back_map)
        self.allow_degenerate = bool(allow_degenerate)
        self.leq.setflags(write=False)
        self.orders.setflags(write=False)
        if self.join is not None:
            self.join.setflags(write=False)
        if self.meet is not None:
            self.meet.setflags(write=False)
        if check:
            report = validate(self)
            if not report.ok:
                raise ValidationError(
                    f"invalid separation system: {report.summary()}", report.issues)

    # -- basic structure ---------------------------------------------------

    @property
    def n_oriented(self) -> int:
        return 2 * self.count

    def all_oriented(self):
        return range(self.n_oriented)

    def seps(self):
        return range(self.count)

    def has_universe(self) -> bool:
        return self.join is not None and self.meet is not None

    def order(self, s: int) -> float:
        return float(self.orders[s])

    def order_of(self, o: int) -> float:
        return float(self.orders[sep_of(o)])

    def le(self, a: int, b: int) -> bool:
        return bool(self.leq[a, b])

    def lt(self, a: int, b: int) -> bool:
        return bool(self.leq[a, b]) and not bool(self.leq[b, a])

    def is_degenerate(self, s: int) -> bool:
        return bool(self.leq[forward(s), backward(s)]) and \
            bool(self.leq[backward(s), forward(s)])

    def canon(self, o: int) -> int:
        """Canonical id: the even one when the separation is degenerate."""
        return o & ~1 if self.is_degenerate(sep_of(o)) else o

    def orientations_of(self, s: int) -> tuple[int, ...]:
        if self.is_degenerate(s):
            return (forward(s),)
        return (forward(s), backward(s))

    def injective_orders(self) -> bool:
        return len(set(self.orders.tolist())) == self.count

    # -- element predicates ------------------------------------------------

    def is_small(self, o: int) -> bool:
        return bool(self.leq[o, inverse(o)])

    def is_large(self, o: int) -> bool:
        return self.is_small(inverse(o))

    def is_trivial(self, o: int) -> bool:
        """Both orientations of some other separation lie strictly below ``o``."""
        for r in self.seps():
            if r == sep_of(o):
                continue
            if self.lt(forward(r), o) and self.lt(backward(r), o):
                return True
        return False

    def is_cotrivial(self, o: int) -> bool:
        return self.is_trivial(inverse(o))

    def trivial_orienteds(self) -> list[int]:
        return [o for o in self.all_oriented() if self.is_trivial(o)]

    def points_towards(self, o: int, s: int) -> bool:
        return bool(self.leq[forward(s), o]) or bool(self.leq[backward(s), o])

    def points_away(self, o: int, s: int) -> bool:
        return self.points_towards(inverse(o), s)

    def is_nested(self, r: int, s: int) -> bool:
        if r == s:
            return True
        for a in (forward(r), backward(r)):
            for b in (forward(s), backward(s)):
                if self.leq[a, b] or self.leq[b, a]:
                    return True
        return False

    # -- sets of oriented separations ---------------------------------------

    def inconsistent_pair(self, members) -> tuple[int, int] | None:
        """Two elements of distinct separations pointing away from each other."""
        ms = sorted(members)
        for i, x in enumerate(ms):
            for y in ms[i + 1:]:
                if sep_of(x) != sep_of(y) and self.leq[x, inverse(y)]:
                    return (x, y)
        return None

    def is_consistent(self, members) -> bool:
        return self.inconsistent_pair(members) is None

    def _closure_raw(self, members) -> frozenset[int]:
        # Upward requirement set: everything strictly above an element of a
        # distinct separation.  Works on any set; no consistency guard.
        out = set(self.canon(x) for x in members)
        for x in members:
            above = np.flatnonzero(self.leq[x])
            for y in above.tolist():
                if sep_of(y) != sep_of(x) and not self.leq[y, x]:
                    out.add(self.canon(y))
        return frozenset(out)

    def closure(self, members) -> frozenset[int]:
        """The input plus every separation it requires; input must be consistent."""
        pair = self.inconsistent_pair(members)
        if pair is not None:
            raise InconsistentInput(
                f"closure of inconsistent set: {fmt_oriented(pair[0])} and "
                f"{fmt_oriented(pair[1])} point away from each other")
        return self._closure_raw(members)

    def is_star(self, members) -> bool:
        ms = sorted(members)
        for x in ms:
            if self.is_degenerate(sep_of(x)):
                return False
        for i, x in enumerate(ms):
            for y in ms[i + 1:]:
                if sep_of(x) == sep_of(y):
                    # Both orientations present: admissible only when one of
                    # them is small (the orientations are comparable).
                    if not (self.leq[x, y] or self.leq[y, x]):
                        return False
                elif not self.leq[inverse(y), x]:
                    return False
        return True

    def oriented_sep_set(self, members) -> set[int]:
        return {sep_of(x) for x in members}

    def orients_all(self, members) -> bool:
        """One orientation per separation, every separation covered."""
        seen = {}
        for x in members:
            s = sep_of(x)
            c = self.canon(x)
            if s in seen and seen[s] != c:
                return False
            seen[s] = c
        return len(seen) == self.count

    def eclipsed_elements(self, members, weak: bool) -> set[int]:
        """Elements with a strictly smaller element of the set below them.

        ``weak=True`` admits equal orders for the eclipsing element.
        """
        ms = sorted(members)
        out = set()
        for x in ms:
            for y in ms:
                if y == x or not self.lt(y, x):
                    continue
                if self.order_of(y) < self.order_of(x) or \
                        (weak and self.order_of(y) <= self.order_of(x)):
                    out.add(x)
                    break
        return out

    # -- derived systems -----------------------------------------------------

    def subsystem(self, sep_ids) -> "SeparationSystem":
        """The system induced on the given separations, parent-linked."""
        sep_ids = tuple(sep_ids)
        idx = [o for s in sep_ids for o in (forward(s), backward(s))]
        leq = self.leq[np.ix_(idx, idx)]
        orders = self.orders[list(sep_ids)]
        join = meet = None
        if self.has_universe():
            keep = set(idx)
            jvals = self.join[np.ix_(idx, idx)]
            mvals = self.meet[np.ix_(idx, idx)]
            if all(int(v) in keep for v in jvals.flat) and \
                    all(int(v) in keep for v in mvals.flat):
                lut = np.full(self.n_oriented, -1, dtype=np.int64)
                lut[list(idx)] = np.arange(len(idx))
                join, meet = lut[jvals], lut[mvals]
        ground = self.ground.subset(idx) if self.ground is not None else None
        return SeparationSystem(
            leq, orders, join=join, meet=meet,
            distributive=self.distributive and join is not None,
            ground=ground, parent=self, back_map=sep_ids,
            allow_degenerate=self.allow_degenerate, check=False)

    def restrict_below(self, k: float) -> "SeparationSystem":
        """Subsystem of all separations of order strictly below ``k``."""
        keep = [s for s in self.seps() if self.orders[s] < k]
        return self.subsystem(keep)

    def oriented_into(self, ancestor: "SeparationSystem") -> list[int]:
        """Map of local oriented ids into an ancestor system's oriented ids."""
        if ancestor is self:
            return list(self.all_oriented())
        chain = []
        node = self
        while node is not None and node is not ancestor:
            chain.append(node)
            node = node.parent
        if node is not ancestor:
            raise GroundMismatch("system does not descend from the family's system")
        out = list(self.all_oriented())
        for link in chain:
            out = [2 * link.back_map[sep_of(o)] + (o & 1) for o in out]
        return out


# -- validation --------------------------------------------------------------


def validate(system: SeparationSystem) -> ValidationReport:
    """Check every structural axiom; the report carries all violations found."""
    rep = ValidationReport()
    L = system.leq
    n2 = system.n_oriented
    ids = np.arange(n2)

    if not np.all(np.isfinite(system.orders)):
        bad = np.flatnonzero(~np.isfinite(system.orders)).tolist()
        rep.add("order-function", f"non-finite order at separations {bad}")
    rep.checked["order-function"] = "exhaustive"

    if n2 and not L.diagonal().all():
        bad = np.flatnonzero(~L.diagonal()).tolist()
        rep.add("reflexivity", f"missing a <= a for oriented ids {bad}")
    rep.checked["reflexivity"] = "exhaustive"

    mutual = L & L.T
    np.fill_diagonal(mutual, False)
    for a, b in zip(*np.nonzero(mutual)):
        if a >= b:
            continue
        if sep_of(int(a)) == sep_of(int(b)):
            if not system.allow_degenerate:
                rep.add("degenerate",
                        f"separation {sep_of(int(a))} has equal orientations "
                        "(pass allow_degenerate to admit)")
            elif not (np.array_equal(L[a], L[b]) and np.array_equal(L[:, a], L[:, b])):
                rep.add("degenerate",
                        f"degenerate separation {sep_of(int(a))} has diverging rows")
        else:
            rep.add("antisymmetry",
                    f"{fmt_oriented(int(a))} <= {fmt_oriented(int(b))} and back")
    rep.checked["antisymmetry"] = "exhaustive"

    if n2:
        closure = (L.astype(np.uint8) @ L.astype(np.uint8)) > 0
        viol = closure & ~L
        if viol.any():
            a, b = map(int, np.argwhere(viol)[0])
            rep.add("transitivity",
                    f"{fmt_oriented(a)} <= ... <= {fmt_oriented(b)} but not directly")
    rep.checked["transitivity"] = "exhaustive"

    if n2:
        perm = ids ^ 1
        mirrored = L[np.ix_(perm, perm)].T
        if not np.array_equal(L, mirrored):
            a, b = map(int, np.argwhere(L != mirrored)[0])
            rep.add("involution",
                    f"a <= b disagrees with b* <= a* at ({fmt_oriented(a)}, {fmt_oriented(b)})")
    rep.checked["involution"] = "exhaustive"

    if (system.join is None) != (system.meet is None):
        rep.add("universe", "join and meet tables must come together")
    if system.has_universe():
        _validate_universe(system, rep)
    elif system.distributive:
        rep.add("universe", "distributive flag without join/meet tables")
    return rep


def _validate_universe(system, rep):
    L, J, M = system.leq, system.join, system.meet
    n2 = system.n_oriented
    if J.shape != (n2, n2) or M.shape != (n2, n2):
        rep.add("universe", f"join/meet tables must be ({n2},{n2})")
        return
    if n2 == 0:
        return
    if J.min() < 0 or J.max() >= n2 or M.min() < 0 or M.max() >= n2:
        rep.add("universe", "join/meet values out of range")
        return
    canon = np.arange(n2)
    for s in system.seps():
        if system.is_degenerate(s):
            canon[backward(s)] = forward(s)

    def eq(a, b):
        return np.array_equal(canon[a], canon[b])

    if not (eq(J, J.T) and eq(M, M.T)):
        rep.add("universe", "join or meet not commutative")
    if not (eq(J.diagonal(), np.arange(n2)) and eq(M.diagonal(), np.arange(n2))):
        rep.add("universe", "join or meet not idempotent")
    inv = np.arange(n2) ^ 1
    if not eq(inv[J], M[np.ix_(inv, inv)]):
        rep.add("universe", "involution does not swap join and meet")
    # order compatibility: a <= b iff a v b = b iff a ^ b = a
    rows = np.arange(n2)[:, None]
    if not np.array_equal(L, canon[J] == canon[None, :]):
        rep.add("universe", "a <= b does not match join(a,b) == b")
    if not np.array_equal(L, canon[M] == canon[:, None]):
        rep.add("universe", "a <= b does not match meet(a,b) == a")
    # bounds
    if not (L[rows, J].all() and L[M, rows].all()):
        rep.add("universe", "join not an upper bound or meet not a lower bound")

    if n2 <= LATTICE_EXHAUSTIVE_LIMIT:
        mode = "exhaustive"
        for a in range(n2):
            ub = L[a][None, :] & L  # ub[b, c]: c is a common upper bound of a, b
            if not (~ub | L[J[a]]).all():
                rep.add("universe", f"join({fmt_oriented(a)}, .) not least upper bound")
                break
            lb = L.T[a][None, :] & L.T  # lb[b, c]: c is a common lower bound of a, b
            if not (~lb | L.T[M[a]]).all():
                rep.add("universe", f"meet({fmt_oriented(a)}, .) not greatest lower bound")
                break
        if system.distributive:
            for a in range(n2):
                lhs = M[a][J]  # meet(a, join(b,c))
                rhs = J[M[a][:, None], M[a][None, :]]
                if not np.array_equal(canon[lhs], canon[rhs]):
                    rep.add("distributivity",
                            f"meet({fmt_oriented(a)}, join(b,c)) != "
                            "join(meet(a,b), meet(a,c)) for some b, c")
                    break
            rep.checked["distributivity"] = mode
    else:
        mode = f"sampled(n={_SAMPLED_TRIPLES})"
        rng = np.random.default_rng(n2)
        abc = rng.integers(0, n2, size=(_SAMPLED_TRIPLES, 3))
        a, b, c = abc[:, 0], abc[:, 1], abc[:, 2]
        if not np.array_equal(canon[J[J[a, b], c]], canon[J[a, J[b, c]]]):
            rep.add("universe", "join not associative on sampled triples")
        if not np.array_equal(canon[M[M[a, b], c]], canon[M[a, M[b, c]]]):
            rep.add("universe", "meet not associative on sampled triples")
        if system.distributive:
            if not np.array_equal(canon[M[a, J[b, c]]], canon[J[M[a, b], M[a, c]]]):
                rep.add("distributivity", "fails on sampled triples")
            rep.checked["distributivity"] = mode
    rep.checked["universe"] = mode


# -- JSON (format "sepsys/v1") -------------------------------------------------


def to_json_dict(system: SeparationSystem) -> dict:
    """Canonical JSON form; reflexive pairs omitted, keys sorted on dump."""
    n2 = system.n_oriented
    pairs = [[int(a), int(b)]
             for a in range(n2) for b in range(n2)
             if a != b and system.leq[a, b]]
    out = {
        "format": "sepsys/v1",
        "count": system.count,
        "orders": [float(x) for x in system.orders],
        "leq": pairs,
    }
    if system.has_universe():
        out["universe"] = {
            "join": [[int(v) for v in row] for row in system.join],
            "meet": [[int(v) for v in row] for row in system.meet],
        }
        out["distributive"] = system.distributive
    if system.allow_degenerate:
        out["allow_degenerate"] = True
    if system.ground is not None:
        out["ground"] = system.ground.to_json_dict()
    return out


def from_json_dict(d: dict, *, transitive_close: bool = False,
                   check: bool = True) -> SeparationSystem:
    """Load a sepsys/v1 object.

    The relation must already be transitively closed unless
    ``transitive_close`` asks for closure to be computed at load.
    """
    if d.get("format", "sepsys/v1") != "sepsys/v1":
        raise ValidationError(f"unsupported system format {d.get('format')!r}")
    count = int(d["count"])
    n2 = 2 * count
    orders = [float(x) for x in d["orders"]]
    if len(orders) != count:
        raise ValidationError("orders length does not match count")
    leq = np.zeros((n2, n2), dtype=bool)
    np.fill_diagonal(leq, True)
    for pair in d.get("leq", []):
        a, b = int(pair[0]), int(pair[1])
        if not (0 <= a < n2 and 0 <= b < n2):
            raise ValidationError(f"leq pair {pair} out of range")
        leq[a, b] = True
    if transitive_close:
        prev = None
        while prev is None or not np.array_equal(prev, leq):
            prev = leq
            leq = leq | ((leq.astype(np.uint8) @ leq.astype(np.uint8)) > 0)
    join = meet = None
    if "universe" in d:
        join = d["universe"]["join"]
        meet = d["universe"]["meet"]
    ground = None
    if "ground" in d:
        from . import grounds
        ground = grounds.realization_from_json(d["ground"])
    return SeparationSystem(
        leq, orders, join=join, meet=meet,
        distributive=bool(d.get("distributive", False)),
        ground=ground,
        allow_degenerate=bool(d.get("allow_degenerate", False)),
        check=check)


def dump_system(system: SeparationSystem) -> str:
    return json.dumps(to_json_dict(system), sort_keys=True, indent=1)


def load_system(text: str, **kwargs) -> SeparationSystem:
    return from_json_dict(json.loads(text), **kwargs)
