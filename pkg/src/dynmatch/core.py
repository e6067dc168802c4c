"""Dynamic graph storage: fixed vertex universe, edge identity, random tapes, ranks.

Every piece of per-edge and per-vertex randomness used anywhere in the engine
is drawn here, exactly once per edge arrival (or once per vertex at instance
construction), so that replaying the same update stream with the same seed
reproduces the identical execution bit for bit.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Iterator, NamedTuple

from .errors import (
    CapacityError,
    ConfigError,
    DuplicateEdgeError,
    EdgeNotFoundError,
    LoopEdgeError,
)

# Rank values live in [0, 2^64) and are read as value / 2^64, i.e. a fixed-point
# fraction in [0, 1).  Ties between equal values are broken by the edge key, so
# the order over distinct edges is always total.
RANK_SCALE = 2**64

# Tiebreak component larger than any real vertex id; used by sentinel ranks and
# interval thresholds so that a threshold never compares equal to a real rank.
_TIE_MAX = 2**63

EdgeKey = tuple[int, int]


class Rank(NamedTuple):
    """A 64-bit fractional rank with an edge-key tiebreak.

    Compares lexicographically: value first, then tiebreak.  `value / 2**64`
    is the fraction of [0, 1) the rank denotes.
    """

    value: int
    lo: int
    hi: int

    def as_float(self) -> float:
        return self.value / RANK_SCALE


#: Sentinel matched-rank for unmatched / absent vertices ("k(v) = 1").
UNMATCHED_RANK = Rank(RANK_SCALE - 1, _TIE_MAX, _TIE_MAX)

#: Threshold below every real rank (used as "alpha = 0").
ZERO_RANK = Rank(0, -1, -1)


def edge_key(u: int, v: int) -> EdgeKey:
    """Canonical unordered pair (lo, hi).  Rejects self-loops."""
    if u == v:
        raise LoopEdgeError(f"self-loop at vertex {u}")
    return (u, v) if u < v else (v, u)


def threshold_rank(fraction: float) -> Rank:
    """A rank boundary at `fraction`, floored into 64-bit rank space.

    The tiebreak is maximal, so `r > threshold` holds exactly when r's value
    is strictly larger -- real ranks equal to the boundary value fall below
    it, matching the half-open interval convention of the level partition.
    """
    value = min(int(fraction * RANK_SCALE), RANK_SCALE)
    return Rank(value, _TIE_MAX, _TIE_MAX)


def thresholds_for(delta_cap: int, levels: int) -> list[Rank]:
    """Level boundaries t_0 = 1 > t_1 > ... > t_L, with t_i = delta^(-i/L)."""
    return [threshold_rank(delta_cap ** (-i / levels)) for i in range(levels + 1)]


def level_of_rank(rank: Rank, thresholds: list[Rank]) -> int:
    """Level index in [1..L] whose rank interval contains `rank`.

    Level i < L owns (t_i, t_{i-1}]; level L owns [0, t_{L-1}].
    """
    levels = len(thresholds) - 1
    for i in range(1, levels):
        if rank > thresholds[i]:
            return i
    return levels


@dataclass(frozen=True)
class EdgeRecord:
    """All randomness attached to one arrival of an edge.

    `ranks[i]` is the edge's rank in ranking pi_i (0 = base graph, 1..L =
    second-stage graphs); `sampled[i-1]` is the level-i sampling coin.
    Re-inserting a deleted edge produces a fresh record.
    """

    key: EdgeKey
    ranks: tuple[Rank, ...]
    sampled: tuple[bool, ...]


@dataclass(frozen=True)
class InstanceConfig:
    """Static parameters of one engine instance.

    delta_cap is a declared capacity: insertions that would push a degree
    beyond it are rejected, and the level thresholds are computed once from
    it.  levels = L sets the granularity eps = 1/L.
    """

    n: int
    delta_cap: int
    levels: int
    sample_p: float = 0.03
    final_eps: float | None = None
    algo_seed: int = 0

    def validate(self) -> None:
        if self.n <= 0:
            raise ConfigError("vertex count must be positive")
        if self.delta_cap < 1:
            raise ConfigError("delta_cap must be at least 1")
        if self.levels < 1:
            raise ConfigError("levels must be at least 1")
        if not 0.0 < self.sample_p < 0.125:
            raise ConfigError("sample_p must lie in (0, 1/8)")
        if self.final_eps is not None and self.final_eps <= 0:
            raise ConfigError("final_eps must be positive")

    @property
    def eps(self) -> float:
        return 1.0 / self.levels

    def answer_depth(self) -> int:
        """Augmenting-path search depth k of the final matcher."""
        if self.final_eps is None:
            return self.levels + 1
        return max(1, math.ceil(1.0 / self.final_eps))


class Instance:
    """A dynamic graph over a fixed vertex universe plus its random tapes.

    Single-writer: all mutating calls must come from one thread of control.
    """

    def __init__(self, config: InstanceConfig):
        config.validate()
        self.config = config
        self.thresholds = thresholds_for(config.delta_cap, config.levels)
        self._rng = random.Random(config.algo_seed)
        # Vertex tapes are static, so they are drawn up front in index order:
        # tapes[v][i-1] is the level-i partition coin (0 = A, 1 = B).
        self.tapes: list[tuple[int, ...]] = [
            tuple(self._rng.getrandbits(1) for _ in range(config.levels))
            for _ in range(config.n)
        ]
        self.records: dict[EdgeKey, EdgeRecord] = {}
        self.adj: list[set[int]] = [set() for _ in range(config.n)]

    # -- queries ---------------------------------------------------------

    @property
    def n(self) -> int:
        return self.config.n

    @property
    def levels(self) -> int:
        return self.config.levels

    def partition(self, v: int, level: int) -> int:
        """Level-`level` partition coin of vertex v (0 = A, 1 = B)."""
        return self.tapes[v][level - 1]

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return edge_key(u, v) in self.records

    def edges(self) -> Iterator[EdgeRecord]:
        return iter(self.records.values())

    def level_of_rank(self, rank: Rank) -> int:
        return level_of_rank(rank, self.thresholds)

    def alpha_for_level(self, level: int) -> Rank:
        """Lower rank bound of partition S_level (zero for the last level)."""
        if level >= self.config.levels:
            return ZERO_RANK
        return self.thresholds[level]

    # -- updates ---------------------------------------------------------

    def admit_edge(self, u: int, v: int) -> EdgeRecord:
        """Insert edge {u, v}, drawing its randomness upon arrival."""
        key = edge_key(u, v)
        self._check_vertex(u)
        self._check_vertex(v)
        if key in self.records:
            raise DuplicateEdgeError(f"edge {key} already present")
        cap = self.config.delta_cap
        if len(self.adj[u]) >= cap or len(self.adj[v]) >= cap:
            raise CapacityError(
                f"inserting {key} would exceed the declared degree bound {cap}"
            )
        lo, hi = key
        ranks = tuple(
            Rank(self._rng.getrandbits(64), lo, hi)
            for _ in range(self.config.levels + 1)
        )
        sampled = tuple(
            self._rng.random() < self.config.sample_p
            for _ in range(self.config.levels)
        )
        record = EdgeRecord(key, ranks, sampled)
        self.records[key] = record
        self.adj[lo].add(hi)
        self.adj[hi].add(lo)
        return record

    def retire_edge(self, u: int, v: int) -> EdgeRecord:
        """Remove edge {u, v} and hand back its record for the update cascade."""
        key = edge_key(u, v)
        record = self.records.pop(key, None)
        if record is None:
            raise EdgeNotFoundError(f"edge {key} not present")
        lo, hi = key
        self.adj[lo].discard(hi)
        self.adj[hi].discard(lo)
        return record

    def _check_vertex(self, v: int) -> None:
        if not 0 <= v < self.config.n:
            raise ConfigError(f"vertex {v} outside universe [0, {self.config.n})")
