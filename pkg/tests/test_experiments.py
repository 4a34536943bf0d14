import math

import pytest

from bijumble.errors import ParameterError
from bijumble.graphs import Graph, TripartiteSystem, VertexSet
from bijumble.experiments import (
    ExperimentPlan,
    bad_pair_bounds_audit,
    gen_bipartite,
    gen_tripartite,
    one_sided_experiment,
    plant_irregular_block,
    sparsify,
    two_sided_experiment,
)
from bijumble.regularity import exact_regularity, sampled_regularity


def build(n, p, d, seed):
    return sparsify(gen_tripartite(n, n, n, p, seed=seed), d, seed=seed + 1000)


def complete_tripartite(n):
    parts = [range(0, n), range(n, 2 * n), range(2 * n, 3 * n)]
    edges = [
        (u, v)
        for i in range(3)
        for j in range(i + 1, 3)
        for u in parts[i]
        for v in parts[j]
    ]
    g = Graph.from_edges(3 * n, edges)
    return TripartiteSystem(g, g, VertexSet.of(parts[0]), VertexSet.of(parts[1]), VertexSet.of(parts[2]))


def test_plan_validation():
    with pytest.raises(ParameterError):
        ExperimentPlan("one_sided", 0, 5, 5, 0.5, 0.5, 0.3, seed=1)
    with pytest.raises(ParameterError):
        ExperimentPlan("one_sided", 5, 5, 5, 1.5, 0.5, 0.3, seed=1)
    plan = ExperimentPlan("one_sided", 5, 5, 5, 0.5, 0.5, 0.3, seed=1)
    assert plan.trials == 12


def test_gen_tripartite_golden_and_determinism():
    s = gen_tripartite(2, 2, 2, 0.5, seed=1)
    assert sorted(s.host.edges()) == [(0, 4), (0, 5), (1, 2), (1, 5), (2, 5)]
    assert gen_tripartite(2, 2, 2, 0.5, seed=1).host == s.host
    assert s.sub == s.host
    # no intra-part edges ever
    big = gen_tripartite(20, 20, 20, 0.4, seed=9)
    for part in (big.x, big.y, big.z):
        for u in part:
            assert big.host.rows[u] & part.mask == 0


def test_gen_tripartite_edge_concentration():
    n, p = 500, 0.3
    s = gen_tripartite(n, n, n, p, seed=123)
    for a, b in (("X", "Y"), ("X", "Z"), ("Y", "Z")):
        e = s.pair(a, b, "host").edge_count()
        mean = p * n * n
        sigma = math.sqrt(n * n * p * (1 - p))
        assert abs(e - mean) <= 5 * sigma


def test_sparsify_identity_and_golden():
    s = gen_tripartite(4, 4, 4, 0.5, seed=2)
    assert sparsify(s, 1.0, seed=77).sub == s.host
    h = Graph.from_edges(4, [(0, 2), (1, 3)])
    sys2 = TripartiteSystem(h, h, VertexSet.of([0]), VertexSet.of([1, 2]), VertexSet.of([3]))
    kept = sorted(sparsify(sys2, 0.5, seed=3).sub.edges())
    assert kept == [(0, 2), (1, 3)]  # frozen draw for seed 3
    with pytest.raises(ParameterError):
        sparsify(s, 0.0, seed=1)


def test_sparsify_edge_concentration():
    s = gen_tripartite(500, 500, 500, 0.2, seed=5)
    d = 0.5
    sp = sparsify(s, d, seed=6)
    e_host = s.host.edge_count()
    e_sub = sp.sub.edge_count()
    sigma = math.sqrt(e_host * d * (1 - d))
    assert abs(e_sub - d * e_host) <= 5 * sigma
    assert sp.sub.is_subgraph_of(sp.host)


def test_plant_block_noop_and_errors():
    s = build(20, 0.5, 0.5, 4)
    assert plant_irregular_block(s, ("Y", "Z"), 0.5, 0.0, seed=3).sub == s.sub
    with pytest.raises(ParameterError):
        plant_irregular_block(s, ("Y", "Z"), 0.5, 1.5, seed=3)
    with pytest.raises(ParameterError):
        plant_irregular_block(s, ("Y", "Z"), 0.0, 0.5, seed=3)


def test_plant_block_flagged_by_sampled_and_confirmed_exact():
    # 200-scale: sampled regularity flags the planted pair, not the clean one
    s = build(200, 0.4, 0.5, 42)
    planted = plant_irregular_block(s, ("Y", "Z"), 0.5, 1.0, seed=43)
    flagged = sampled_regularity(planted.pair("Y", "Z"), 0.25, 0.4, trials=80, seed=5)
    clean = sampled_regularity(s.pair("Y", "Z"), 0.25, 0.4, trials=80, seed=5)
    assert not flagged.regular and clean.regular
    # 16-scale exact confirmation: the planted construction deviates more
    s16 = build(16, 0.5, 0.5, 7)
    p16 = plant_irregular_block(s16, ("Y", "Z"), 0.5, 1.0, seed=8)
    dev_planted = exact_regularity(p16.pair("Y", "Z"), 0.3, 0.5).deviation
    dev_clean = exact_regularity(s16.pair("Y", "Z"), 0.3, 0.5).deviation
    assert dev_planted > dev_clean


def test_complete_host_no_exceptions():
    s = complete_tripartite(12)
    for run in (one_sided_experiment, two_sided_experiment):
        out = run(s, 0.3, 1.0, 0.999, method="sampled", trials=4, seed=1)
        assert out.exceptional_fraction == 0.0
        assert out.threshold_reference == pytest.approx(0.3 * 12)


def test_emptied_yz_all_exceptional_via_density_floor():
    s = complete_tripartite(10)
    rows = list(s.sub.rows)
    for y in s.y:
        rows[y] &= ~s.z.mask
    for z in s.z:
        rows[z] &= ~s.y.mask
    emptied = TripartiteSystem(s.host, Graph(30, tuple(rows)), s.x, s.y, s.z)
    out = one_sided_experiment(emptied, 0.2, 0.9, 0.999, method="sampled", trials=4, seed=2)
    assert out.exceptional_fraction == 1.0
    assert all(v.reason == "density floor" for v in out.per_x)


def test_empty_neighborhood_counts_exceptional():
    # x = vertex 0 has no host neighbours in Y at all
    n = 6
    s = complete_tripartite(n)
    rows = list(s.host.rows)
    for y in s.y:
        rows[y] &= ~(1 << 0)
    rows[0] &= ~s.y.mask
    host = Graph(3 * n, tuple(rows))
    sub = host
    sys2 = TripartiteSystem(host, sub, s.x, s.y, s.z)
    out = one_sided_experiment(sys2, 0.3, 1.0, 0.999, method="sampled", trials=4, seed=3)
    reasons = {v.x: v.reason for v in out.per_x}
    assert reasons[0] == "empty neighborhood"
    assert out.exceptional_count == 1


def test_monotone_eps_prime_exact_method():
    s = build(14, 0.5, 0.9, 21)
    counts = []
    for eps_prime in (0.3, 0.45, 0.6, 0.75):
        out = one_sided_experiment(s, eps_prime, 0.9, 0.5, method="exact", seed=5)
        counts.append(out.exceptional_count)
    assert counts == sorted(counts, reverse=True)


def test_monotone_eps_prime_sampled_same_seeds():
    s = build(60, 0.4, 0.5, 31)
    counts = []
    for eps_prime in (0.2, 0.35, 0.5):
        out = one_sided_experiment(s, eps_prime, 0.5, 0.4, method="sampled", trials=10, seed=8)
        counts.append(out.exceptional_count)
    assert counts == sorted(counts, reverse=True)


def test_worker_count_independence():
    s = build(40, 0.4, 0.5, 11)
    out1 = two_sided_experiment(s, 0.4, 0.5, 0.4, method="sampled", trials=6, seed=13, workers=1)
    out4 = two_sided_experiment(s, 0.4, 0.5, 0.4, method="sampled", trials=6, seed=13, workers=4)
    assert out1.to_record() == out4.to_record()


def test_outcome_embeds_hypothesis_evidence():
    s = build(30, 0.4, 0.5, 17)
    out = one_sided_experiment(s, 0.4, 0.5, 0.4, method="sampled", trials=4, seed=19)
    names = [h.name for h in out.evidence]
    assert "yz_regular_in_G" in names and "bijumbled_XY" in names and "bijumbled_YZ" in names
    out2 = two_sided_experiment(s, 0.4, 0.5, 0.4, method="sampled", trials=4, seed=19)
    assert "bijumbled_XZ" in [h.name for h in out2.evidence]


def test_negative_control_planted_fraction_higher():
    # n=500 keeps the clean baseline at ~0 while the plant saturates
    for seed in (11, 12, 13):
        base = build(500, 0.3, 0.5, seed)
        planted = plant_irregular_block(base, ("Y", "Z"), 0.6, 0.9, seed + 77)
        out_b = one_sided_experiment(base, 0.3, 0.5, 0.3, method="sampled", trials=10, seed=900 + seed)
        out_p = one_sided_experiment(planted, 0.3, 0.5, 0.3, method="sampled", trials=10, seed=900 + seed)
        assert out_p.exceptional_fraction > out_b.exceptional_fraction


def test_bad_pairs_complete_bipartite_none():
    # q=1 thresholds exceed the maximum codegree: zero bad pairs
    n = 12
    parts = [range(0, n), range(n, 2 * n), range(2 * n, 3 * n)]
    edges = [(u, v) for u in parts[1] for v in parts[2]]
    g = Graph.from_edges(3 * n, edges)
    s = TripartiteSystem(g, g, VertexSet.of(parts[0]), VertexSet.of(parts[1]), VertexSet.of(parts[2]))
    report = bad_pair_bounds_audit(
        s, 1.0, 0.25, 0.5, 0.25, direction="many", p=0.999, mode="relaxed", relaxed_coeff=0.0, seed=3
    )
    assert report.measured == 0


def test_bad_pairs_planted_exceeds_unplanted_baseline():
    planted_counts, clean_counts = [], []
    for seed in range(10):
        s = build(80, 0.4, 0.5, 500 + seed)
        planted = plant_irregular_block(s, ("Y", "Z"), 0.5, 1.0, seed=600 + seed)
        rep_p = bad_pair_bounds_audit(
            planted, 0.5, 0.25, 0.5, 0.25, direction="many", p=0.4, mode="relaxed",
            relaxed_coeff=1e-4, seed=seed,
        )
        rep_c = bad_pair_bounds_audit(
            s, 0.5, 0.25, 0.5, 0.25, direction="many", p=0.4, mode="relaxed",
            relaxed_coeff=1e-4, seed=seed,
        )
        planted_counts.append(rep_p.measured)
        clean_counts.append(rep_c.measured)
    assert min(planted_counts) > max(clean_counts)
    assert all(c > 0 for c in planted_counts)


def test_few_bad_pairs_relaxed_holds_on_regular_system():
    s = build(100, 0.35, 0.5, 71)
    report = bad_pair_bounds_audit(
        s, 0.5, 0.25, 0.6, 0.3, direction="few", p=0.35, mode="relaxed", seed=7
    )
    assert report.verdict == "pass"
    assert report.measured <= report.bound


def test_bad_pairs_strict_mode_honesty():
    s = build(60, 0.3, 0.5, 81)
    for direction in ("many", "few"):
        report = bad_pair_bounds_audit(
            s, 0.5, 0.25, 0.5, 0.25, direction=direction, p=0.3, mode="strict", seed=5
        )
        assert report.verdict == "hypotheses-not-met"
