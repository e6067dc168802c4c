"""Near-maximum matching of the union of the maintained matchings.

The union graph M_0 u M_1 u ... u M_L has degree at most L + 1, so a
bounded-depth augmenting-path search is enough to keep an answer matching
with no augmenting path of length <= 2k - 1, which pins its size to at least
k/(k+1) of the union's maximum.  Repairs after an edge change stay local to
the changed edge, so their cost depends on (L, k) only, not on n.

Searches enumerate simple alternating paths with backtracking (matched hops
are forced, so the branching factor is the degree once per unmatched hop);
exhaustive enumeration at bounded depth side-steps the parity traps that
bite marked-vertex searches in non-bipartite graphs.
"""

from __future__ import annotations

from collections import deque

from .core import EdgeKey
from .errors import ConsistencyError
from .rgmm import DeltaList


class UnionMatcher:
    """Maintains the union graph (with multiplicities) and the answer matching.

    `depth` is k: after every update no augmenting path of length <= 2k - 1
    survives.  Single-writer, driven synchronously by the pipeline.
    """

    def __init__(self, depth: int):
        if depth < 1:
            raise ValueError("search depth must be at least 1")
        self.depth = depth
        self.mult: dict[EdgeKey, int] = {}
        self.adj: dict[int, set[int]] = {}
        self.mate: dict[int, int] = {}

    # -- queries ---------------------------------------------------------

    @property
    def max_path_len(self) -> int:
        return 2 * self.depth - 1

    def size(self) -> int:
        return len(self.mate) // 2

    def matching(self) -> set[EdgeKey]:
        return {(v, m) for v, m in self.mate.items() if v < m}

    def edges(self) -> set[EdgeKey]:
        return set(self.mult)

    def degree(self, v: int) -> int:
        return len(self.adj.get(v, ()))

    # -- updates ---------------------------------------------------------

    def add(self, key: EdgeKey) -> DeltaList:
        """An edge joined one of the maintained matchings."""
        count = self.mult.get(key, 0)
        self.mult[key] = count + 1
        delta = DeltaList()
        if count:
            return delta  # already present in the union graph
        u, v = key
        self.adj.setdefault(u, set()).add(v)
        self.adj.setdefault(v, set()).add(u)
        mate = self.mate
        if u not in mate and v not in mate:
            # Maximality held before, so matching the edge cannot open any
            # short augmenting path elsewhere.
            mate[u] = v
            mate[v] = u
            delta.joined.append(key)
            return delta
        path = self._shortest_through(key)
        if path is not None:
            self._flip(path, delta)
        return delta

    def remove(self, key: EdgeKey) -> DeltaList:
        """An edge left one of the maintained matchings."""
        count = self.mult.get(key, 0)
        if count == 0:
            raise ConsistencyError(f"union multiplicity underflow for {key}")
        delta = DeltaList()
        if count > 1:
            self.mult[key] = count - 1
            return delta
        del self.mult[key]
        u, v = key
        self._drop_adj(u, v)
        self._drop_adj(v, u)
        if self.mate.get(u) == v:
            del self.mate[u], self.mate[v]
            delta.left.append(key)
            self._repair([u, v], delta)
        return delta

    # -- internals -------------------------------------------------------

    def _drop_adj(self, a: int, b: int) -> None:
        nbrs = self.adj[a]
        nbrs.discard(b)
        if not nbrs:
            del self.adj[a]

    def _flip(self, path: list[int], delta: DeltaList) -> None:
        """Augment along a path given as a vertex list (odd edge count)."""
        mate = self.mate
        for i in range(1, len(path) - 1, 2):
            a, b = path[i], path[i + 1]
            del mate[a], mate[b]
            delta.left.append((a, b) if a < b else (b, a))
        for i in range(0, len(path) - 1, 2):
            a, b = path[i], path[i + 1]
            mate[a] = b
            mate[b] = a
            delta.joined.append((a, b) if a < b else (b, a))

    def _repair(self, seeds: list[int], delta: DeltaList) -> None:
        """Re-establish the no-short-augmenting-path invariant.

        Any path that appears after a flip intersects that flip, so its free
        endpoints lie within 2k hops of it; reseeding that ball until nothing
        is found restores the invariant globally.
        """
        queue = deque(seeds)
        while queue:
            s = queue.popleft()
            if s in self.mate or s not in self.adj:
                continue
            path = self._shortest_from(s)
            if path is None:
                continue
            self._flip(path, delta)
            queue.extend(self._free_ball(path))

    def _free_ball(self, path: list[int]) -> list[int]:
        radius = 2 * self.depth
        seen = set(path)
        frontier = list(path)
        free = [v for v in path if v not in self.mate]
        for _ in range(radius):
            nxt = []
            for v in frontier:
                for x in self.adj.get(v, ()):
                    if x not in seen:
                        seen.add(x)
                        nxt.append(x)
                        if x not in self.mate:
                            free.append(x)
            frontier = nxt
            if not frontier:
                break
        return free

    def _shortest_from(self, s: int) -> list[int] | None:
        """Shortest augmenting path from free vertex s, up to 2k - 1 edges."""
        for limit in range(1, self.max_path_len + 1, 2):
            path = self._bounded_dfs(s, limit)
            if path is not None:
                return path
        return None

    def _bounded_dfs(self, s: int, limit: int) -> list[int] | None:
        mate = self.mate
        adj = self.adj
        visited = {s}
        path = [s]

        def grow(v: int, remaining: int) -> bool:
            for x in sorted(adj.get(v, ())):
                if x in visited:
                    continue
                partner = mate.get(x)
                if partner is None:
                    path.append(x)
                    return True
                if remaining >= 3 and partner not in visited:
                    visited.add(x)
                    visited.add(partner)
                    path.append(x)
                    path.append(partner)
                    if grow(partner, remaining - 2):
                        return True
                    visited.discard(x)
                    visited.discard(partner)
                    path.pop()
                    path.pop()
            return False

        return path if grow(s, limit) else None

    def _halves(self, v: int, budget: int) -> list[tuple[list[int], frozenset[int]]]:
        """Even alternating paths leaving v through its matched edge and ending
        free; the zero-length half exists when v itself is free."""
        out: list[tuple[list[int], frozenset[int]]] = []
        mate = self.mate
        adj = self.adj
        path = [v]
        visited = {v}

        def grow(w: int, remaining: int) -> None:
            partner = mate.get(w)
            if partner is None:
                out.append((list(path), frozenset(visited)))
                return
            if remaining < 2 or partner in visited:
                return
            visited.add(partner)
            path.append(partner)
            for x in sorted(adj.get(partner, ())):
                if x in visited:
                    continue
                visited.add(x)
                path.append(x)
                grow(x, remaining - 2)
                visited.discard(x)
                path.pop()
            visited.discard(partner)
            path.pop()

        grow(v, budget)
        return out

    def _shortest_through(self, key: EdgeKey) -> list[int] | None:
        """Shortest augmenting path that uses `key` as an unmatched edge."""
        u, v = key
        budget = self.max_path_len - 1
        halves_u = sorted(self._halves(u, budget), key=lambda h: len(h[0]))
        if not halves_u:
            return None
        halves_v = sorted(self._halves(v, budget), key=lambda h: len(h[0]))
        best: list[int] | None = None
        best_len = self.max_path_len + 1
        for pu, su in halves_u:
            len_u = len(pu) - 1
            if len_u + 1 >= best_len:
                break
            for pv, sv in halves_v:
                total = len_u + 1 + len(pv) - 1
                if total >= best_len:
                    break
                if su & sv:
                    continue
                best = list(reversed(pu)) + pv
                best_len = total
        return best
