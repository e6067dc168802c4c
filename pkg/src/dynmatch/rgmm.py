"""Random-greedy maximal matching, maintained exactly under edge updates.

The maintained object is the greedy matching obtained by scanning edges in
increasing rank order and taking every edge whose endpoints are still free.
After any update the state is identical to rebuilding from scratch over the
current edge set -- the defining contract, which the test suite checks by
brute force.

Alongside the matching itself the state keeps, per edge, the rank of its
*eliminator* (the lowest-rank matched edge touching it; itself if matched)
and, per vertex, an adjacency index ordered by eliminator rank.  Since a
matching has at most one edge per vertex, the eliminator rank of edge uv is
simply min(k(u), k(v)) where k(.) is the matched rank (sentinel 1 when free).
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Iterable

from sortedcontainers import SortedDict

from .core import UNMATCHED_RANK, EdgeKey, Rank
from .errors import DuplicateEdgeError, EdgeNotFoundError

# Index keys are (eliminator_rank, edge_key); this lower bound sorts below
# every real entry with the same rank, making range scans inclusive.
_KEY_FLOOR: EdgeKey = (-1, -1)


@dataclass
class DeltaList:
    """Edges that left / joined the matching during one update, in cascade order.

    `ranks` records the rank each listed edge had at the moment it moved,
    which callers need for level bookkeeping after deletions.
    """

    left: list[EdgeKey] = field(default_factory=list)
    joined: list[EdgeKey] = field(default_factory=list)

    ranks: dict[EdgeKey, Rank] = field(default_factory=dict)

    def __bool__(self) -> bool:
        return bool(self.left or self.joined)

    def size(self) -> int:
        """Adjustment complexity: number of matching edges changed."""
        return len(self.left) + len(self.joined)

    def min_rank(self) -> Rank | None:
        return min(self.ranks.values()) if self.ranks else None

    def extend(self, other: "DeltaList") -> None:
        self.left.extend(other.left)
        self.joined.extend(other.joined)
        self.ranks.update(other.ranks)


class MatchingState:
    """Greedy maximal matching of one (graph, ranking) pair plus its indexes.

    Attributes
    ----------
    rank_of : rank of every present edge.
    matched : vertex -> its matching edge (absent when unmatched).
    k : vertex -> rank of its matching edge (absent when unmatched; read
        through `matched_rank`, which returns the sentinel for free vertices).
    matching : the set of matched edges.
    elim : edge -> eliminator rank.
    index : vertex -> SortedDict mapping (eliminator rank, edge) -> neighbor.

    Single-writer; `apply_insert` / `apply_delete` restore all invariants
    before returning.
    """

    def __init__(self) -> None:
        self.rank_of: dict[EdgeKey, Rank] = {}
        self.matched: dict[int, EdgeKey] = {}
        self.k: dict[int, Rank] = {}
        self.matching: set[EdgeKey] = set()
        self.elim: dict[EdgeKey, Rank] = {}
        self.index: dict[int, SortedDict] = {}
        self.counters = {"pops": 0, "scans": 0}

    # -- queries ---------------------------------------------------------

    def matched_rank(self, v: int) -> Rank:
        return self.k.get(v, UNMATCHED_RANK)

    def incident(self, v: int) -> list[EdgeKey]:
        idx = self.index.get(v)
        return [key for (_, key) in idx] if idx else []

    def neighbors_above(self, v: int, threshold: Rank) -> list[tuple[EdgeKey, Rank]]:
        """Incident edges whose eliminator rank is >= threshold.

        Served by a range scan of the ordered index, so the cost is
        proportional to the output size plus a log factor.
        """
        idx = self.index.get(v)
        if not idx:
            return []
        out = [(key, erank) for (erank, key) in idx.irange(minimum=(threshold, _KEY_FLOOR))]
        self.counters["scans"] += len(out)
        return out

    def is_maximal(self) -> bool:
        return all(
            u in self.matched or v in self.matched for (u, v) in self.rank_of
        )

    def snapshot(self) -> dict:
        return {
            "edges": dict(self.rank_of),
            "matching": set(self.matching),
            "k": dict(self.k),
            "elim": dict(self.elim),
        }

    def index_contents(self) -> dict[int, tuple]:
        return {v: tuple(sd.items()) for v, sd in self.index.items()}

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MatchingState):
            return NotImplemented
        return (
            self.rank_of == other.rank_of
            and self.matching == other.matching
            and self.k == other.k
            and self.elim == other.elim
            and self.index_contents() == other.index_contents()
        )

    # -- updates ---------------------------------------------------------

    def apply_insert(self, key: EdgeKey, rank: Rank) -> DeltaList:
        """Insert an edge; returns exactly the matching changes it caused."""
        if key in self.rank_of:
            raise DuplicateEdgeError(f"edge {key} already present")
        u, v = key
        self.rank_of[key] = rank
        delta = DeltaList()
        joins = self.matched_rank(u) > rank and self.matched_rank(v) > rank
        # Eliminator of the new edge: itself if it joins, else the smaller
        # matched rank at its endpoints (final unless the cascade moves them,
        # in which case re-indexing below recomputes it).
        if joins:
            self._index_add(key, rank)
            seeds = []
            for w in (u, v):
                old = self.matched.get(w)
                if old is not None:
                    self._record_left(delta, old)
                    seeds.append(old[0] if old[1] == w else old[1])
            self._match(key, rank)
            delta.joined.append(key)
            delta.ranks[key] = rank
            self._cascade(seeds, delta)
            self._reindex(delta)
        else:
            self._index_add(key, min(self.matched_rank(u), self.matched_rank(v)))
        return delta

    def apply_delete(self, key: EdgeKey) -> DeltaList:
        """Delete an edge; returns exactly the matching changes it caused."""
        rank = self.rank_of.pop(key, None)
        if rank is None:
            raise EdgeNotFoundError(f"edge {key} not present")
        self._index_remove(key)
        delta = DeltaList()
        if key in self.matching:
            self._unmatch(key)
            delta.left.append(key)
            delta.ranks[key] = rank
            self._cascade(list(key), delta)
            self._reindex(delta)
        return delta

    # -- internals -------------------------------------------------------

    def _match(self, key: EdgeKey, rank: Rank) -> None:
        u, v = key
        self.matched[u] = key
        self.matched[v] = key
        self.k[u] = rank
        self.k[v] = rank
        self.matching.add(key)

    def _unmatch(self, key: EdgeKey) -> None:
        u, v = key
        del self.matched[u], self.matched[v]
        del self.k[u], self.k[v]
        self.matching.remove(key)

    def _record_left(self, delta: DeltaList, key: EdgeKey) -> None:
        delta.ranks[key] = self.rank_of[key]
        delta.left.append(key)
        self._unmatch(key)

    def _index_add(self, key: EdgeKey, erank: Rank) -> None:
        self.elim[key] = erank
        u, v = key
        self.index.setdefault(u, SortedDict())[(erank, key)] = v
        self.index.setdefault(v, SortedDict())[(erank, key)] = u

    def _index_remove(self, key: EdgeKey) -> None:
        erank = self.elim.pop(key)
        for w in key:
            sd = self.index[w]
            del sd[(erank, key)]
            if not sd:
                del self.index[w]

    def _index_rekey(self, key: EdgeKey, old: Rank, new: Rank) -> None:
        self.elim[key] = new
        u, v = key
        sd = self.index[u]
        del sd[(old, key)]
        sd[(new, key)] = v
        sd = self.index[v]
        del sd[(old, key)]
        sd[(new, key)] = u

    def _best_candidate(self, w: int) -> tuple[Rank, EdgeKey, int] | None:
        """Minimum-rank incident edge whose far endpoint is free or matched
        at a higher rank -- the edge w takes when the greedy replay reaches it."""
        idx = self.index.get(w)
        if not idx:
            return None
        best: tuple[Rank, EdgeKey, int] | None = None
        rank_of = self.rank_of
        k = self.k
        self.counters["scans"] += len(idx)
        for (_, key), x in idx.items():
            r = rank_of[key]
            if (best is None or r < best[0]) and k.get(x, UNMATCHED_RANK) > r:
                best = (r, key, x)
        return best

    def _cascade(self, seeds: Iterable[int], delta: DeltaList) -> None:
        """Settle freed vertices in globally increasing candidate-rank order.

        Each heap entry is a lower bound for its vertex's true candidate; a
        vertex commits only when its recomputed candidate is no larger than
        every other pending entry, which reproduces the static greedy order.
        """
        heap: list[tuple[Rank, EdgeKey, int, int]] = []

        def push(w: int) -> None:
            best = self._best_candidate(w)
            if best is not None:
                heapq.heappush(heap, (best[0], best[1], w, best[2]))

        for w in seeds:
            push(w)
        while heap:
            _, _, w, _ = heapq.heappop(heap)
            self.counters["pops"] += 1
            if w in self.matched:
                continue
            best = self._best_candidate(w)
            if best is None:
                continue
            rank, key, x = best
            if heap and heap[0][0] < rank:
                heapq.heappush(heap, (rank, key, w, x))
                continue
            old = self.matched.get(x)
            if old is not None:
                self._record_left(delta, old)
            self._match(key, rank)
            delta.joined.append(key)
            delta.ranks[key] = rank
            if old is not None:
                push(old[0] if old[1] == x else old[1])

    def _reindex(self, delta: DeltaList) -> None:
        """Recompute eliminators invalidated by a matching change.

        Only edges incident to a vertex whose matched rank moved can change,
        and their prior eliminator rank is at least the smallest rank in the
        delta, so a range scan from that rank finds every stale entry.
        """
        rmin = delta.min_rank()
        if rmin is None:
            return
        touched: set[int] = set()
        for key in delta.left:
            touched.update(key)
        for key in delta.joined:
            touched.update(key)
        floor = (rmin, _KEY_FLOOR)
        for w in touched:
            idx = self.index.get(w)
            if not idx:
                continue
            stale = list(idx.irange(minimum=floor))
            self.counters["scans"] += len(stale)
            for erank, key in stale:
                if self.elim.get(key) != erank:
                    continue  # already re-keyed via the other endpoint
                a, b = key
                new = min(self.matched_rank(a), self.matched_rank(b))
                if new != erank:
                    self._index_rekey(key, erank, new)


def build_static(edges: Iterable[tuple[EdgeKey, Rank]]) -> MatchingState:
    """Construct the greedy matching of an edge set from scratch.

    A pure function of the (edge set, ranking) input: edges are scanned in
    increasing rank order and an edge joins whenever both endpoints are free.
    """
    state = MatchingState()
    items = sorted(edges, key=lambda item: item[1])
    rank_of = state.rank_of
    matched = state.matched
    for key, rank in items:
        rank_of[key] = rank
        u, v = key
        if u not in matched and v not in matched:
            state._match(key, rank)
    for key, rank in items:
        u, v = key
        state._index_add(key, min(state.matched_rank(u), state.matched_rank(v)))
    return state
