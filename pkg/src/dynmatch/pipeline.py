"""The maintained layered-augmentation state: base matching M_0, rank
partitions S_i, per-level vertex roles, second-stage graphs G_i with their
matchings M_i, and the final matching over the union.

One edge update runs four steps in order:

1. update the base matching and collect the list of matched edges that moved;
   if nothing moved, reflect the edge itself in the one level graph it may
   belong to;
2. recompute the role of every vertex whose base match status changed (a
   vertex's role at each level is a pure function of its matching edge);
3. replay role changes onto the level graphs: departing vertices drop their
   incident level edges, arriving vertices pull candidate neighbors from the
   base eliminator index above the trigger threshold and keep those passing
   the role filter -- levels deeper than the trigger are provably untouched;
4. forward every matching delta into the union matcher.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from enum import Enum

from .core import EdgeKey, Instance, Rank, edge_key
from .finalmatch import UnionMatcher
from .rgmm import DeltaList, MatchingState


class Role(Enum):
    """Level-i role of a vertex (V-prime sides come from sampled S_i edges)."""

    U_A = "UA"
    U_B = "UB"
    V_A = "VA"
    V_B = "VB"
    ABSENT = "-"


#: The four edge admissions of the level filter: (V side, matching U side).
_PAIR_OK = {
    (Role.V_A, Role.U_A),
    (Role.U_A, Role.V_A),
    (Role.V_B, Role.U_B),
    (Role.U_B, Role.V_B),
}

RoleDeltas = dict[int, list[tuple[int, Role, Role]]]


@dataclass
class LevelState:
    """Everything level i owns: its slice of M_0 and its second-stage graph."""

    level: int
    members: set[EdgeKey] = field(default_factory=set)
    state: MatchingState = field(default_factory=MatchingState)


@dataclass
class UpdateReport:
    """What one update did, for metrics and tests."""

    op: str
    key: EdgeKey
    base_delta: DeltaList
    level_deltas: dict[int, DeltaList]
    answer_delta: DeltaList
    trigger_level: int | None = None
    role_changes: int = 0
    candidate_probes: int = 0
    cascade_pops: int = 0
    elapsed_ns: int = 0

    def adjustment_complexity(self) -> int:
        return self.base_delta.size()


class Pipeline:
    """Maintains the full layered state of one instance under edge updates.

    Single-writer: updates form a critical section; queries are safe between
    them.
    """

    def __init__(self, instance: Instance):
        self.inst = instance
        self.base = MatchingState()
        self.levels: dict[int, LevelState] = {
            i: LevelState(i) for i in range(1, instance.levels + 1)
        }
        # On the empty graph every vertex is unmatched, hence on the U side
        # of every level, split by its partition coin.
        self.role: dict[int, list[Role]] = {
            i: [
                Role.U_A if instance.partition(v, i) == 0 else Role.U_B
                for v in range(instance.n)
            ]
            for i in range(1, instance.levels + 1)
        }
        self.union = UnionMatcher(instance.config.answer_depth())

    # -- queries ---------------------------------------------------------

    def current_answer(self) -> set[EdgeKey]:
        """The maintained matching over M_0 u M_1 u ... u M_L."""
        return self.union.matching()

    def level_sizes(self) -> dict[int, int]:
        return {i: len(ls.members) for i, ls in self.levels.items()}

    def snapshot(self) -> dict:
        """Full comparable state (the shape the static reference also builds)."""
        return {
            "m0": self.base.snapshot(),
            "members": {i: frozenset(ls.members) for i, ls in self.levels.items()},
            "roles": {i: tuple(self.role[i]) for i in self.role},
            "g_edges": {i: dict(ls.state.rank_of) for i, ls in self.levels.items()},
            "m_i": {i: ls.state.snapshot() for i, ls in self.levels.items()},
            "union": dict(self.union.mult),
        }

    # -- updates ---------------------------------------------------------

    def handle_update(self, op: str, u: int, v: int) -> UpdateReport:
        if op not in ("ins", "del"):
            raise ValueError(f"unknown op {op!r}")
        t0 = time.perf_counter_ns()
        pops0 = self.base.counters["pops"]
        key = edge_key(u, v)
        level_deltas: dict[int, DeltaList] = {}
        # Union updates must replay in operation order: one pipeline update
        # can make an edge join a level matching and then leave it again.
        op_log: list[DeltaList] = []
        trigger = None
        probes = 0
        role_changes = 0

        # Step 1: base matching.
        if op == "ins":
            record = self.inst.admit_edge(u, v)
            base_delta = self.base.apply_insert(key, record.ranks[0])
        else:
            record = self.inst.retire_edge(u, v)
            base_delta = self.base.apply_delete(key)

        if not base_delta:
            # M_0 unchanged: the updated edge itself may still belong to a
            # level graph; reflect exactly that.
            if op == "ins":
                i = self._membership_level(key)
                if i is not None:
                    d = self.levels[i].state.apply_insert(key, record.ranks[i])
                    self._merge(level_deltas, i, d, op_log)
            else:
                for i, ls in self.levels.items():
                    if key in ls.state.rank_of:
                        d = ls.state.apply_delete(key)
                        self._merge(level_deltas, i, d, op_log)
                        break
        else:
            self._update_members(base_delta)
            # Step 2: roles of every endpoint the base delta touched.
            changed: set[int] = set()
            for moved in (base_delta.left, base_delta.joined):
                for a, b in moved:
                    changed.add(a)
                    changed.add(b)
            role_deltas = self.update_roles(changed)
            role_changes = sum(len(v) for v in role_deltas.values())
            # Step 3: level graph memberships, pruned by the trigger level.
            rmin = base_delta.min_rank()
            trigger = self.inst.level_of_rank(rmin)
            alpha = self.inst.alpha_for_level(trigger)
            probes = self.rebuild_memberships(role_deltas, alpha, level_deltas, op_log)

        # Step 4: forward all deltas to the final matcher, in operation order.
        answer_delta = DeltaList()
        for delta in [base_delta, *op_log]:
            for k_ in delta.left:
                answer_delta.extend(self.union.remove(k_))
            for k_ in delta.joined:
                answer_delta.extend(self.union.add(k_))

        return UpdateReport(
            op=op,
            key=key,
            base_delta=base_delta,
            level_deltas=level_deltas,
            answer_delta=answer_delta,
            trigger_level=trigger,
            role_changes=role_changes,
            candidate_probes=probes,
            cascade_pops=self.base.counters["pops"] - pops0,
            elapsed_ns=time.perf_counter_ns() - t0,
        )

    def update_roles(self, changed: set[int]) -> RoleDeltas:
        """Recompute the role case table for every vertex whose match status moved."""
        deltas: RoleDeltas = {}
        for v in sorted(changed):
            lv = self._match_level(v)
            for i in range(1, self.inst.levels + 1):
                new = self._role_for(v, i, lv)
                old = self.role[i][v]
                if new is not old:
                    self.role[i][v] = new
                    deltas.setdefault(i, []).append((v, old, new))
        return deltas

    def rebuild_memberships(
        self,
        role_deltas: RoleDeltas,
        alpha: Rank,
        level_deltas: dict[int, DeltaList],
        op_log: list[DeltaList] | None = None,
    ) -> int:
        """Replay role changes onto the level graphs: vertex-set leaves first,
        then joins, levels in increasing order.  Returns the total
        candidate-list size probed."""
        probes = 0
        for i in sorted(role_deltas):
            ls = self.levels[i]
            for v, old, new in role_deltas[i]:
                if old is Role.ABSENT:
                    continue
                for key in ls.state.incident(v):
                    self._merge(level_deltas, i, ls.state.apply_delete(key), op_log)
        for i in sorted(role_deltas):
            ls = self.levels[i]
            role = self.role[i]
            for v, old, new in role_deltas[i]:
                if new is Role.ABSENT:
                    continue
                candidates = self.base.neighbors_above(v, alpha)
                probes += len(candidates)
                for key, _ in candidates:
                    if key in ls.state.rank_of:
                        continue
                    x = key[0] if key[1] == v else key[1]
                    if (role[v], role[x]) in _PAIR_OK:
                        rec = self.inst.records[key]
                        d = ls.state.apply_insert(key, rec.ranks[i])
                        self._merge(level_deltas, i, d, op_log)
        return probes

    # -- internals -------------------------------------------------------

    @staticmethod
    def _merge(
        level_deltas: dict[int, DeltaList],
        i: int,
        d: DeltaList,
        op_log: list[DeltaList] | None = None,
    ) -> None:
        if not d:
            return
        level_deltas.setdefault(i, DeltaList()).extend(d)
        if op_log is not None:
            op_log.append(d)

    def _match_level(self, v: int) -> int:
        """0 when v is unmatched in M_0, else the level of its matched edge."""
        if v not in self.base.matched:
            return 0
        return self.inst.level_of_rank(self.base.k[v])

    def _role_for(self, v: int, i: int, lv: int) -> Role:
        if lv < i:
            return Role.U_A if self.inst.partition(v, i) == 0 else Role.U_B
        if lv > i:
            return Role.ABSENT
        key = self.base.matched[v]
        if not self.inst.records[key].sampled[i - 1]:
            return Role.ABSENT
        return Role.V_A if v == key[0] else Role.V_B

    def _membership_level(self, key: EdgeKey) -> int | None:
        """The unique level graph the edge belongs to under current roles."""
        u, v = key
        for i in range(1, self.inst.levels + 1):
            if (self.role[i][u], self.role[i][v]) in _PAIR_OK:
                return i
        return None

    def _update_members(self, base_delta: DeltaList) -> None:
        for key in base_delta.left:
            level = self.inst.level_of_rank(base_delta.ranks[key])
            self.levels[level].members.discard(key)
        for key in base_delta.joined:
            level = self.inst.level_of_rank(base_delta.ranks[key])
            self.levels[level].members.add(key)
