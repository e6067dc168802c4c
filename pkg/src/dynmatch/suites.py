"""Named validation suites behind the CLI and the acceptance tests.

Each suite returns a report dict with a boolean "passed"; the CLI maps that
to the exit status.
"""

from __future__ import annotations

import random
from collections import defaultdict
from typing import Callable

from .core import EdgeKey, Instance, InstanceConfig
from .errors import ConsistencyError, DynMatchError
from .exact import max_matching_exact
from .pipeline import Pipeline
from .reference import static_reference
from .streams import StreamSpec, generate_stream
from .validators import (
    audit_sparsification,
    augmentation_gadget,
    find_pivot_level,
    validate_partition_augmentation,
    validate_vertex_sampling,
)


def has_short_augmenting_path(
    edges: set[EdgeKey], matching: set[EdgeKey], max_len: int
) -> bool:
    """Exhaustive check for an augmenting path of at most `max_len` edges.

    Enumerates every simple alternating path from every free vertex by
    backtracking, so it is reliable on non-bipartite graphs (no global
    visited marks).
    """
    adj: dict[int, set[int]] = defaultdict(set)
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    mate: dict[int, int] = {}
    for u, v in matching:
        mate[u] = v
        mate[v] = u

    def grow(v: int, remaining: int, visited: set[int]) -> bool:
        for x in sorted(adj[v]):
            if x in visited or mate.get(v) == x:
                continue
            if x not in mate:
                return True
            w = mate[x]
            if remaining >= 3 and w not in visited:
                visited.add(x)
                visited.add(w)
                if grow(w, remaining - 2, visited):
                    return True
                visited.discard(x)
                visited.discard(w)
        return False

    return any(
        grow(f, max_len, {f}) for f in adj if f not in mate and adj[f]
    )


def run_equivalence_stream(
    n: int,
    delta: int,
    levels: int,
    updates: int,
    stream_seed: int,
    algo_seed: int,
    *,
    target_edges: int | None = None,
    check_stability: bool = False,
    check_final: bool = False,
) -> dict:
    """Replay one random stream, comparing the pipeline against the static
    reference after every update.  Optionally also checks level stability
    (graphs above the trigger level stay bitwise identical) and the final
    matcher contract (no short augmenting path; k/(k+1) of the union's mu)."""
    params = {}
    if target_edges is not None:
        params["target_edges"] = target_edges
    events = generate_stream(
        StreamSpec("erdos-churn", n, delta, updates, stream_seed, params)
    )
    config = InstanceConfig(n, delta, levels, algo_seed=algo_seed)
    inst = Instance(config)
    pipe = Pipeline(inst)
    k = config.answer_depth()
    mismatches = 0
    stability_violations = 0
    final_violations = 0
    answer_below_m0 = 0
    checked = 0
    for ev in events:
        before = None
        if check_stability:
            before = {
                i: (dict(ls.state.rank_of), set(ls.state.matching))
                for i, ls in pipe.levels.items()
            }
        report = pipe.handle_update(ev.op, ev.u, ev.v)
        checked += 1
        snap = pipe.snapshot()
        ref = static_reference(inst.records.values(), inst.tapes, config)
        if snap != ref:
            mismatches += 1
        if check_stability and report.trigger_level is not None:
            for i in range(report.trigger_level + 1, levels + 1):
                after = (dict(pipe.levels[i].state.rank_of), set(pipe.levels[i].state.matching))
                if before[i] != after:
                    stability_violations += 1
        if check_final:
            union_edges = pipe.union.edges()
            mu_union = max_matching_exact(n, union_edges).size
            answer = pipe.union.size()
            if answer * (k + 1) < mu_union * k:
                final_violations += 1
            if has_short_augmenting_path(
                union_edges, pipe.current_answer(), 2 * k - 1
            ):
                final_violations += 1
            if answer < len(pipe.base.matching):
                answer_below_m0 += 1
    return {
        "events": checked,
        "mismatches": mismatches,
        "stability_violations": stability_violations,
        "final_violations": final_violations,
        "answer_below_m0": answer_below_m0,
    }


def suite_equivalence(
    n: int = 32,
    delta: int = 16,
    levels: int = 2,
    updates: int = 200,
    seeds: int = 10,
) -> dict:
    per_seed = []
    total_mismatch = 0
    for s in range(seeds):
        res = run_equivalence_stream(
            n, delta, levels, updates, stream_seed=1000 + s, algo_seed=2000 + s
        )
        per_seed.append(res)
        total_mismatch += res["mismatches"]
    return {
        "suite": "equivalence",
        "seeds": seeds,
        "updates": updates,
        "mismatches": total_mismatch,
        "passed": total_mismatch == 0,
    }


def suite_sparsification(
    n: int = 2000,
    m: int = 20000,
    trials: int = 30,
    seeds: int = 1,
    gate: float = 4.0,
) -> dict:
    report = audit_sparsification(n=n, m=m, trials=trials, seed=7, gate=gate)
    return {
        "suite": "sparsification",
        "max_degree": {str(p): d for p, d in report.max_degree.items()},
        "fitted_c": report.fitted_c,
        "gate": gate,
        "passed": report.passed,
    }


def suite_sampling_lemma(trials: int = 10000, seeds: int = 1, instances: int = 20) -> dict:
    results = []
    # Complete bipartite K_{8,8} with a perfect matching, p = 0.25.
    edges = [(v, u) for v in range(8) for u in range(8)]
    matching = [(i, i) for i in range(8)]
    stats = validate_vertex_sampling(8, 8, edges, matching, 0.25, trials, seed=11)
    results.append(
        {"case": "K88", "mean": stats.mean, "se": stats.std_error, "bound": stats.bound,
         "passed": stats.passed}
    )
    rng = random.Random(23)
    for idx in range(instances):
        vc = rng.randint(4, 32)
        uc = rng.randint(4, 32)
        density = rng.uniform(0.1, 0.5)
        inst_edges = [
            (v, u)
            for v in range(vc)
            for u in range(uc)
            if rng.random() < density
        ]
        if not inst_edges:
            inst_edges = [(0, 0)]
        combined = {(v, vc + u) for v, u in inst_edges}
        witness = max_matching_exact(vc + uc, combined).witness
        matching = [(a, b - vc) if a < vc else (b, a - vc) for a, b in witness]
        p = 0.1 if idx % 2 == 0 else 0.3
        stats = validate_vertex_sampling(
            vc, uc, inst_edges, matching, p, trials, seed=100 + idx
        )
        results.append(
            {"case": f"random-{idx}", "p": p, "mean": stats.mean,
             "se": stats.std_error, "bound": stats.bound, "passed": stats.passed}
        )
    return {
        "suite": "sampling-lemma",
        "cases": results,
        "passed": all(r["passed"] for r in results),
    }


def suite_partition_augmentation(
    size: int = 5000, trials: int = 200, noise: int = 2500, seeds: int = 1
) -> dict:
    gadget = augmentation_gadget(size, noise=noise, seed=5)
    stats = validate_partition_augmentation(gadget, p=0.03, trials=trials, seed=6)
    return {
        "suite": "partition-augmentation",
        "size": size,
        "mean": stats.mean,
        "se": stats.std_error,
        "bound": stats.bound,
        "passed": stats.passed,
    }


def suite_pivot_level(vectors: int = 10000, seeds: int = 1) -> dict:
    rng = random.Random(17)
    failures = 0
    for levels in (2, 3, 4):
        for _ in range(vectors):
            style = rng.randrange(3)
            if style == 0:
                sizes = [rng.randint(0, 1000) for _ in range(levels)]
            elif style == 1:
                sizes = [rng.choice([0, 0, 1, rng.randint(0, 10**6)]) for _ in range(levels)]
            else:
                sizes = [rng.randint(0, 10**9) for _ in range(levels)]
            if sum(sizes) == 0:
                sizes[rng.randrange(levels)] = 1
            try:
                find_pivot_level(sizes)
            except (ConsistencyError, ValueError):
                failures += 1
    return {
        "suite": "pivot-level",
        "vectors": vectors,
        "failures": failures,
        "passed": failures == 0,
    }


def suite_level_stability(
    n: int = 32,
    delta: int = 16,
    levels: int = 3,
    updates: int = 200,
    seeds: int = 5,
) -> dict:
    violations = 0
    for s in range(seeds):
        res = run_equivalence_stream(
            n, delta, levels, updates,
            stream_seed=3000 + s, algo_seed=4000 + s,
            check_stability=True,
        )
        violations += res["stability_violations"] + res["mismatches"]
    return {
        "suite": "level-stability",
        "seeds": seeds,
        "violations": violations,
        "passed": violations == 0,
    }


def suite_final_approx(
    n: int = 32,
    delta: int = 16,
    levels: int = 2,
    updates: int = 150,
    seeds: int = 3,
) -> dict:
    violations = 0
    for s in range(seeds):
        res = run_equivalence_stream(
            n, delta, levels, updates,
            stream_seed=5000 + s, algo_seed=6000 + s,
            check_final=True,
        )
        violations += res["final_violations"]
    return {
        "suite": "final-approx",
        "seeds": seeds,
        "violations": violations,
        "passed": violations == 0,
    }


SUITES: dict[str, Callable[..., dict]] = {
    "equivalence": suite_equivalence,
    "sparsification": suite_sparsification,
    "sampling-lemma": suite_sampling_lemma,
    "partition-augmentation": suite_partition_augmentation,
    "pivot-level": suite_pivot_level,
    "level-stability": suite_level_stability,
    "final-approx": suite_final_approx,
}


def run_validation(suite: str, **params) -> dict:
    if suite not in SUITES:
        raise DynMatchError(
            f"unknown suite {suite!r}; choose from {sorted(SUITES)}"
        )
    return SUITES[suite](**params)
