import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dynmatch.core import (
    RANK_SCALE,
    Instance,
    InstanceConfig,
    Rank,
    UNMATCHED_RANK,
    ZERO_RANK,
    edge_key,
    level_of_rank,
    thresholds_for,
)
from dynmatch.errors import (
    CapacityError,
    ConfigError,
    DuplicateEdgeError,
    EdgeNotFoundError,
    LoopEdgeError,
)

from helpers import rank_at


def make_instance(n=4, delta=4, levels=2, seed=7, **kw):
    return Instance(InstanceConfig(n, delta, levels, algo_seed=seed, **kw))


class TestConfig:
    def test_tape_shape_forced_by_config(self):
        inst = make_instance(n=4, delta=4, levels=2, seed=7)
        assert len(inst.tapes) == 4
        assert all(len(t) == 2 for t in inst.tapes)
        assert all(bit in (0, 1) for t in inst.tapes for bit in t)

    def test_same_config_gives_identical_tapes(self):
        a = make_instance(seed=7)
        b = make_instance(seed=7)
        assert a.tapes == b.tapes

    @pytest.mark.parametrize(
        "kw",
        [
            {"levels": 0},
            {"n": 0},
            {"delta": 0},
            {"sample_p": 0.0},
            {"sample_p": 0.2},
        ],
    )
    def test_invalid_config_rejected(self, kw):
        with pytest.raises(ConfigError):
            make_instance(**kw)

    def test_answer_depth_defaults_to_levels_plus_one(self):
        assert InstanceConfig(4, 4, 3).answer_depth() == 4
        assert InstanceConfig(4, 4, 3, final_eps=0.25).answer_depth() == 4
        assert InstanceConfig(4, 4, 3, final_eps=0.5).answer_depth() == 2


class TestEdgeLifecycle:
    def test_admit_draws_fresh_ranks(self):
        inst = make_instance()
        rec = inst.admit_edge(1, 2)
        assert rec.key == (1, 2)
        assert len(rec.ranks) == inst.levels + 1
        assert len(rec.sampled) == inst.levels
        assert all(r.lo == 1 and r.hi == 2 for r in rec.ranks)

    def test_duplicate_rejected_after_canonicalization(self):
        inst = make_instance()
        inst.admit_edge(1, 2)
        with pytest.raises(DuplicateEdgeError):
            inst.admit_edge(2, 1)

    def test_self_loop_rejected(self):
        inst = make_instance()
        with pytest.raises(LoopEdgeError):
            inst.admit_edge(1, 1)

    def test_capacity_enforced(self):
        inst = make_instance(n=5, delta=2)
        inst.admit_edge(0, 1)
        inst.admit_edge(0, 2)
        with pytest.raises(CapacityError):
            inst.admit_edge(0, 3)

    def test_retire_returns_record_and_decrements_degree(self):
        inst = make_instance()
        rec = inst.admit_edge(1, 2)
        assert inst.degree(1) == 1
        out = inst.retire_edge(1, 2)
        assert out == rec
        assert inst.degree(1) == 0

    def test_retire_absent_edge(self):
        inst = make_instance()
        with pytest.raises(EdgeNotFoundError):
            inst.retire_edge(1, 2)

    def test_reinsert_draws_new_randomness(self):
        inst = make_instance()
        first = inst.admit_edge(1, 2)
        inst.retire_edge(1, 2)
        second = inst.admit_edge(1, 2)
        assert first.ranks != second.ranks
        third = inst.retire_edge(1, 2)
        assert third == second

    def test_replay_determinism(self):
        stream = [("ins", 0, 1), ("ins", 1, 2), ("del", 0, 1), ("ins", 0, 3), ("ins", 0, 1)]
        outs = []
        for _ in range(2):
            inst = make_instance(seed=99)
            recs = []
            for op, u, v in stream:
                if op == "ins":
                    recs.append(inst.admit_edge(u, v))
                else:
                    inst.retire_edge(u, v)
            outs.append(recs)
        assert outs[0] == outs[1]


class TestRankLevels:
    def test_rank_order_is_total(self):
        a = Rank(5, 0, 1)
        b = Rank(5, 0, 2)
        assert a < b and not a == b
        assert ZERO_RANK < a < UNMATCHED_RANK

    def test_threshold_example_delta16_l2(self):
        # t_1 = 16^(-1/2) = 0.25
        th = thresholds_for(16, 2)
        assert th[1].value == RANK_SCALE // 4
        assert level_of_rank(rank_at(0.5), th) == 1
        # the interval is half-open: a rank exactly at the boundary value
        # falls in [0, t_1], i.e. level 2
        assert level_of_rank(Rank(RANK_SCALE // 4, 0, 1), th) == 2
        assert level_of_rank(rank_at(0.1), th) == 2

    def test_thresholds_monotone(self):
        th = thresholds_for(32, 4)
        assert all(th[i] > th[i + 1] for i in range(4))
        assert th[0].value == RANK_SCALE

    @given(
        value=st.integers(min_value=0, max_value=RANK_SCALE - 1),
        delta=st.integers(min_value=2, max_value=64),
        levels=st.integers(min_value=1, max_value=6),
    )
    @settings(max_examples=300, deadline=None)
    def test_levels_partition_rank_space(self, value, delta, levels):
        th = thresholds_for(delta, levels)
        r = Rank(value, 3, 7)
        lvl = level_of_rank(r, th)
        assert 1 <= lvl <= levels
        # membership matches the defining interval exactly
        if lvl < levels:
            assert th[lvl] < r <= th[lvl - 1]
        else:
            assert r <= th[levels - 1]

    def test_alpha_for_level(self):
        inst = make_instance(delta=16, levels=2)
        assert inst.alpha_for_level(1) == inst.thresholds[1]
        assert inst.alpha_for_level(2) == ZERO_RANK


def test_edge_key_canonicalizes():
    assert edge_key(5, 2) == (2, 5)
    with pytest.raises(LoopEdgeError):
        edge_key(3, 3)
