"""Assignment trail and slack-counter propagation over a constraint database."""

from __future__ import annotations

from collections.abc import Mapping

from .constraint import PBConstraint, lit_str, slack

DECISION = -1
# reason tag for the flipped branch of a decision when search runs without learning
FLIPPED = -2


class TrailView(Mapping):
    """Read-only mapping ``var -> 0/1`` over the first ``end`` trail entries."""

    __slots__ = ("_e", "end")

    def __init__(self, engine: "Engine", end: int | None = None):
        self._e = engine
        self.end = len(engine.trail) if end is None else end

    def get(self, var, default=None):
        e = self._e
        if not 0 < var < len(e.value):
            return default
        v = e.value[var]
        if v < 0 or e.pos[var] >= self.end:
            return default
        return v

    def __getitem__(self, var):
        v = self.get(var)
        if v is None:
            raise KeyError(var)
        return v

    def __contains__(self, var):
        return self.get(var) is not None

    def __len__(self):
        return self.end

    def __iter__(self):
        return (abs(l) for l in self._e.trail[: self.end])


class Engine:
    """Trail with decision levels and reasons plus cached slacks for every stored constraint.

    Constraint ids are indices into ``constraints``; a deleted constraint
    leaves ``None`` behind so ids stay stable.
    """

    def __init__(self, num_vars: int):
        self.num_vars = num_vars
        n1 = num_vars + 1
        self.value = [-1] * n1
        self.level = [-1] * n1
        self.reason = [DECISION] * n1
        self.pos = [-1] * n1
        self.trail = []
        self.trail_lim = []
        self.qhead = 0
        self.constraints = []
        self.slack = []
        self.max_coef = []
        self.prop_count = []
        self.occ = {}
        self.pending = []
        self.propagations = 0
        self.on_propagate = None

    # -- database -------------------------------------------------------------

    def add_constraint(self, c: PBConstraint, origin: str | None = None) -> int:
        if c.is_tautology():
            raise ValueError("tautologies are never stored")
        cid = len(self.constraints)
        for l, _ in c.items:
            if abs(l) > self.num_vars:
                raise ValueError(f"{lit_str(l)} exceeds the {self.num_vars} declared variables")
        c = c.with_id(cid, origin)
        self.constraints.append(c)
        self.slack.append(slack(c, TrailView(self)))
        self.max_coef.append(c.max_coef)
        self.prop_count.append(0)
        occ = self.occ
        for l, a in c.items:
            occ.setdefault(l, []).append((cid, a))
        self.pending.append(cid)
        return cid

    def remove_constraint(self, cid: int):
        c = self.constraints[cid]
        for l, _ in c.items:
            self.occ[l] = [t for t in self.occ[l] if t[0] != cid]
        self.constraints[cid] = None

    def is_locked(self, cid: int) -> bool:
        """True if the constraint is the reason of a current assignment."""
        c = self.constraints[cid]
        for l, _ in c.items:
            v = abs(l)
            if self.value[v] >= 0 and self.reason[v] == cid:
                return True
        return False

    # -- assignment -----------------------------------------------------------

    @property
    def decision_level(self) -> int:
        return len(self.trail_lim)

    def lit_value(self, l: int):
        v = self.value[abs(l)]
        if v < 0:
            return None
        return v if l > 0 else 1 - v

    def assign(self, l: int, reason: int = DECISION):
        var = abs(l)
        if self.value[var] >= 0:
            raise ValueError(f"variable {var} is already assigned")
        self.value[var] = 1 if l > 0 else 0
        self.level[var] = len(self.trail_lim)
        self.reason[var] = reason
        self.pos[var] = len(self.trail)
        self.trail.append(l)
        sl = self.slack
        for cid, a in self.occ.get(-l, ()):
            sl[cid] -= a

    def decide(self, l: int):
        self.trail_lim.append(len(self.trail))
        self.assign(l, DECISION)

    def _unassign_last(self):
        l = self.trail.pop()
        var = abs(l)
        self.value[var] = -1
        self.level[var] = -1
        self.reason[var] = DECISION
        self.pos[var] = -1
        sl = self.slack
        for cid, a in self.occ.get(-l, ()):
            sl[cid] += a
        return l

    def backjump_to(self, level: int, on_unassign=None):
        """Undo every assignment above ``level`` in reverse chronological order."""
        if level < 0 or level > self.decision_level:
            raise ValueError(f"cannot backjump to level {level} from {self.decision_level}")
        if level == self.decision_level:
            return
        target = self.trail_lim[level]
        while len(self.trail) > target:
            l = self._unassign_last()
            if on_unassign is not None:
                on_unassign(l)
        del self.trail_lim[level:]
        self.qhead = min(self.qhead, len(self.trail))

    # -- propagation ----------------------------------------------------------

    def _check(self, cid: int):
        s = self.slack[cid]
        if s < 0:
            return cid
        if self.max_coef[cid] <= s:
            return None
        value = self.value
        for l, a in self.constraints[cid].items:
            if a > s and value[l if l > 0 else -l] < 0:
                self.assign(l, cid)
                self.propagations += 1
                self.prop_count[cid] += 1
                if self.on_propagate is not None:
                    self.on_propagate(cid)
        return None

    def propagate(self):
        """Propagate to fixpoint; return the id of a falsified constraint, or None.

        Newly added constraints are checked first in ascending id, then
        assignments are processed breadth-first in trail order, visiting the
        constraints that contain the falsified literal in ascending id.
        """
        pending = self.pending
        while pending:
            pending.sort()
            cid = pending.pop(0)
            if self.constraints[cid] is None:
                continue
            conflict = self._check(cid)
            if conflict is not None:
                return conflict
        trail = self.trail
        occ = self.occ
        constraints = self.constraints
        while self.qhead < len(trail):
            l = trail[self.qhead]
            self.qhead += 1
            for cid, _ in occ.get(-l, ()):
                if constraints[cid] is None:
                    continue
                conflict = self._check(cid)
                if conflict is not None:
                    return conflict
        return None

    # -- inspection -----------------------------------------------------------

    def view(self, end: int | None = None) -> TrailView:
        return TrailView(self, end)

    def assignment(self) -> dict:
        return {abs(l): (1 if l > 0 else 0) for l in self.trail}

    def free_vars(self):
        return [v for v in range(1, self.num_vars + 1) if self.value[v] < 0]

    def check_invariants(self, fixpoint: bool = False):
        """Recompute every slack from the trail and compare with the cache.

        With ``fixpoint`` also require that no stored constraint still propagates.
        """
        rho = TrailView(self)
        for cid, c in enumerate(self.constraints):
            if c is None:
                continue
            s = slack(c, rho)
            if s != self.slack[cid]:
                raise AssertionError(f"cached slack {self.slack[cid]} != {s} for constraint {cid}: {c}")
            if fixpoint and s >= 0:
                for l, a in c.items:
                    if a > s and self.value[abs(l)] < 0:
                        raise AssertionError(f"constraint {cid} still propagates {lit_str(l)}")
        for i, lim in enumerate(self.trail_lim):
            if self.reason[abs(self.trail[lim])] != DECISION:
                raise AssertionError(f"level {i + 1} does not start with a decision")
        for p, l in enumerate(self.trail):
            var = abs(l)
            if self.pos[var] != p:
                raise AssertionError(f"position of variable {var} is stale")
            r = self.reason[var]
            if r >= 0:
                reason = self.constraints[r]
                s = slack(reason, TrailView(self, p))
                if not 0 <= s < reason.coef(l):
                    raise AssertionError(f"reason {r} does not propagate {lit_str(l)} at position {p}")
