"""Exact maximum matching: blossom search for general graphs, layered BFS
for bipartite ones, and an incrementally maintained variant for per-update
oracle checks.

The blossom routine is the classic array-based single-root search (grow an
alternating tree, contract odd cycles via base pointers, walk parent links to
augment).  It is quadratic-ish per augmentation, which is all the desk-scale
harness needs.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

from .core import EdgeKey, edge_key
from .errors import OracleLimitError

DEFAULT_ORACLE_LIMIT = 2000


@dataclass(frozen=True)
class ExactMatchingResult:
    size: int
    witness: frozenset[EdgeKey]


def _lca(match: list[int], base: list[int], p: list[int], a: int, b: int) -> int:
    used = set()
    while True:
        a = base[a]
        used.add(a)
        if match[a] == -1:
            break
        a = p[match[a]]
    while True:
        b = base[b]
        if b in used:
            return b
        b = p[match[b]]


def _mark_path(
    match: list[int],
    base: list[int],
    blossom: list[bool],
    p: list[int],
    v: int,
    b: int,
    child: int,
) -> None:
    while base[v] != b:
        blossom[base[v]] = True
        blossom[base[match[v]]] = True
        p[v] = child
        child = match[v]
        v = p[match[v]]


def _find_path(adj: Sequence[Iterable[int]], match: list[int], root: int) -> tuple[int, list[int]]:
    """Search one alternating tree from `root`; returns (exposed vertex, parents)
    with exposed == -1 when no augmenting path from root exists."""
    n = len(adj)
    used = [False] * n
    p = [-1] * n
    base = list(range(n))
    used[root] = True
    q = deque([root])
    while q:
        v = q.popleft()
        for to in adj[v]:
            if base[v] == base[to] or match[v] == to:
                continue
            if to == root or (match[to] != -1 and p[match[to]] != -1):
                curbase = _lca(match, base, p, v, to)
                blossom = [False] * n
                _mark_path(match, base, blossom, p, v, curbase, to)
                _mark_path(match, base, blossom, p, to, curbase, v)
                for i in range(n):
                    if blossom[base[i]]:
                        base[i] = curbase
                        if not used[i]:
                            used[i] = True
                            q.append(i)
            elif p[to] == -1:
                p[to] = v
                if match[to] == -1:
                    return to, p
                used[match[to]] = True
                q.append(match[to])
    return -1, p


def _augment(match: list[int], p: list[int], v: int) -> None:
    while v != -1:
        pv = p[v]
        ppv = match[pv]
        match[v] = pv
        match[pv] = v
        v = ppv


def _blossom_matching(adj: Sequence[Iterable[int]]) -> list[int]:
    n = len(adj)
    match = [-1] * n
    # Cheap greedy seed cuts the number of full searches roughly in half.
    for v in range(n):
        if match[v] == -1:
            for to in adj[v]:
                if match[to] == -1:
                    match[v] = to
                    match[to] = v
                    break
    for v in range(n):
        if match[v] == -1:
            exposed, p = _find_path(adj, match, v)
            if exposed != -1:
                _augment(match, p, exposed)
    return match


def _two_color(adj: Sequence[Iterable[int]]) -> list[int] | None:
    """2-coloring by BFS, or None if an odd cycle exists."""
    n = len(adj)
    color = [-1] * n
    for s in range(n):
        if color[s] != -1:
            continue
        color[s] = 0
        q = deque([s])
        while q:
            v = q.popleft()
            for to in adj[v]:
                if color[to] == -1:
                    color[to] = color[v] ^ 1
                    q.append(to)
                elif color[to] == color[v]:
                    return None
    return color


def hopcroft_karp(adj: Sequence[Iterable[int]], left: Iterable[int]) -> list[int]:
    """Maximum bipartite matching via alternating BFS layering.

    `left` must be one side of a bipartition of `adj`.  Returns the mate
    array (-1 for unmatched).
    """
    n = len(adj)
    left = list(left)
    match = [-1] * n
    INF = float("inf")
    dist: dict[int, float] = {}

    def bfs() -> bool:
        q = deque()
        for u in left:
            if match[u] == -1:
                dist[u] = 0
                q.append(u)
            else:
                dist[u] = INF
        found = False
        while q:
            u = q.popleft()
            for v in adj[u]:
                w = match[v]
                if w == -1:
                    found = True
                elif dist[w] == INF:
                    dist[w] = dist[u] + 1
                    q.append(w)
        return found

    def dfs(u: int) -> bool:
        for v in adj[u]:
            w = match[v]
            if w == -1 or (dist[w] == dist[u] + 1 and dfs(w)):
                match[u] = v
                match[v] = u
                return True
        dist[u] = INF
        return False

    while bfs():
        for u in left:
            if match[u] == -1:
                dfs(u)
    return match


def _mate_to_result(match: list[int]) -> ExactMatchingResult:
    witness = frozenset(
        (v, match[v]) for v in range(len(match)) if match[v] > v
    )
    return ExactMatchingResult(len(witness), witness)


def max_matching_exact(
    n: int,
    edges: Iterable[EdgeKey],
    *,
    limit: int = DEFAULT_ORACLE_LIMIT,
) -> ExactMatchingResult:
    """Exact maximum matching size mu plus a witness.

    Bipartite inputs are detected by 2-coloring and served by the layered
    BFS path; anything else goes through blossom search.
    """
    if n > limit:
        raise OracleLimitError(f"graph size {n} exceeds oracle limit {limit}")
    adj: list[list[int]] = [[] for _ in range(n)]
    for u, v in edges:
        key = edge_key(u, v)
        adj[key[0]].append(key[1])
        adj[key[1]].append(key[0])
    color = _two_color(adj)
    if color is not None:
        match = hopcroft_karp(adj, [v for v in range(n) if color[v] == 0])
    else:
        match = _blossom_matching(adj)
    return _mate_to_result(match)


class IncrementalMatching:
    """A maximum matching maintained across single edge updates.

    Each update changes mu by at most one, so maximality is restored with at
    most one augmenting-path search: deletions search from the two freed
    endpoints only, insertions search from free roots until one succeeds.
    """

    def __init__(self, n: int):
        self.n = n
        self.adj: list[set[int]] = [set() for _ in range(n)]
        self.match = [-1] * n

    @property
    def size(self) -> int:
        return sum(1 for v in self.match if v != -1) // 2

    def matching(self) -> set[EdgeKey]:
        return {(v, m) for v, m in enumerate(self.match) if m > v}

    def insert(self, u: int, v: int) -> None:
        self.adj[u].add(v)
        self.adj[v].add(u)
        match = self.match
        if match[u] == -1 and match[v] == -1:
            match[u] = v
            match[v] = u
            return
        # The matching was maximum before, so any new augmenting path must
        # run through the new edge and starts at some free vertex.
        for root in range(self.n):
            if match[root] == -1 and self.adj[root]:
                exposed, p = _find_path(self.adj, match, root)
                if exposed != -1:
                    _augment(match, p, exposed)
                    return

    def delete(self, u: int, v: int) -> None:
        self.adj[u].discard(v)
        self.adj[v].discard(u)
        match = self.match
        if match[u] != v:
            return  # removing a non-witness edge cannot raise mu
        match[u] = -1
        match[v] = -1
        # Any augmenting path for the reduced matching ends at u or v.
        for root in (u, v):
            if match[root] == -1:
                exposed, p = _find_path(self.adj, match, root)
                if exposed != -1:
                    _augment(match, p, exposed)
