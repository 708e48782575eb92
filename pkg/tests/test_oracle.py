import random

import pytest

from netcon import (
    GuardExceededError,
    Instance,
    Job,
    Network,
    RelevantPair,
    evaluate_sequence,
    generate,
    interleaving_oracle,
    permutation_oracle,
    subset_dp,
)


def _inst(edges, pairs, objective="wct"):
    n = max(x for e in edges for x in e[:2]) + 1
    return Instance(Network(n, tuple(edges)), tuple(RelevantPair(*p) for p in pairs), objective)


def test_single_edge():
    inst = _inst([(0, 1, 5)], [(0, 1, 2)])
    assert subset_dp(inst) == (10, (0,))
    assert permutation_oracle(inst) == 10


def test_three_vertex_path():
    inst = _inst([(0, 1, 1), (1, 2, 2)], [(0, 1, 3), (1, 2, 1), (0, 2, 1)])
    value, seq = subset_dp(inst)
    assert value == 9
    assert permutation_oracle(inst) == 9
    assert evaluate_sequence(inst, seq).objective == 9


def test_single_pair_is_a_shortest_path():
    inst = _inst([(0, 1, 1), (1, 2, 1), (0, 2, 3)], [(0, 2, 1)])
    value, seq = subset_dp(inst)
    assert value == 2
    assert evaluate_sequence(inst, seq).objective == 2
    assert len(seq) == 3  # full schedule: leftover edges are appended


def test_sequence_always_replays_to_the_dp_value():
    rng = random.Random(41)
    for _ in range(100):
        n = rng.randint(2, 6)
        inst = generate(
            "random_graph",
            n,
            seed=rng.randrange(1 << 30),
            pair_count=rng.randint(1, min(3, n * (n - 1) // 2)),
            objective=rng.choice(("wct", "maxlat")),
        )
        value, seq = subset_dp(inst)
        assert sorted(seq) == list(range(inst.network.edge_count))
        assert evaluate_sequence(inst, seq).objective == value


def test_oracles_agree_on_random_instances():
    rng = random.Random(43)
    for _ in range(100):
        n = rng.randint(2, 5)
        m_max = n * (n - 1) // 2
        inst = generate(
            "random_graph",
            n,
            seed=rng.randrange(1 << 30),
            edge_count=rng.randint(n - 1, min(7, m_max)),
            pair_count=rng.randint(1, min(3, m_max)),
        )
        assert subset_dp(inst)[0] == permutation_oracle(inst)


def test_objective_invariant_under_relabeling():
    rng = random.Random(47)
    for _ in range(30):
        n = rng.randint(3, 6)
        inst = generate("random_graph", n, seed=rng.randrange(1 << 30), pair_count=2)
        relabel = list(range(n))
        rng.shuffle(relabel)
        edges = tuple((relabel[u], relabel[v], c) for u, v, c in inst.network.edges)
        pairs = tuple(
            RelevantPair(relabel[p.u], relabel[p.v], p.weight) for p in inst.pairs
        )
        shuffled = Instance(Network(n, edges), pairs)
        assert subset_dp(inst)[0] == subset_dp(shuffled)[0]


def test_max_lateness_subset_dp():
    inst = _inst([(0, 1, 4), (1, 2, 1)], [(0, 1, 1, 3), (0, 2, 2, 9)], "maxlat")
    value, seq = subset_dp(inst)
    assert value == evaluate_sequence(inst, seq).objective
    assert value == permutation_oracle(inst)


def test_interleaving_oracle_basics():
    c2 = [Job(2, 5), Job(1, 1)]
    # one empty chain: cost of the other in its own order
    assert interleaving_oracle([], c2) == 5 * 2 + 1 * 3
    assert interleaving_oracle([Job(1, 3)], [Job(2, 1)]) == 6
    assert interleaving_oracle([], []) == 0


def test_guards_raise_without_force():
    big = generate("path", 11, pair_count=2)  # 10 edges
    with pytest.raises(GuardExceededError):
        permutation_oracle(big)
    with pytest.raises(GuardExceededError):
        subset_dp(big, max_edges=5)
    assert subset_dp(big, max_edges=5, force=True)[0] == subset_dp(big)[0]
    with pytest.raises(GuardExceededError):
        interleaving_oracle([Job(1, 1)] * 10, [Job(1, 1)] * 10)
