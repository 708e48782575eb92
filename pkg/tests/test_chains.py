import random
from fractions import Fraction

import pytest

from netcon import Job, density_decomposition, interleaving_oracle, merge_two_chains, rho_factor
from netcon.chains import block_summaries, merge_value


def jobs(*pw):
    return [Job(p, w) for p, w in pw]


def test_job_validation():
    with pytest.raises(ValueError):
        Job(0, 1)
    with pytest.raises(ValueError):
        Job(1, -1)
    Job(1, 0)  # zero weights are legal


def test_empty_chain_decomposes_to_nothing():
    assert density_decomposition([]) == []


def test_rising_weights_fuse_into_one_block():
    blocks = density_decomposition(jobs((1, 1), (1, 3)))
    assert len(blocks) == 1
    assert (blocks[0].weight, blocks[0].processing) == (4, 2)


def test_falling_weights_split():
    blocks = density_decomposition(jobs((1, 3), (1, 1)))
    assert [(b.weight, b.processing) for b in blocks] == [(3, 1), (1, 1)]
    assert blocks[0].density == Fraction(3)


def test_equal_density_segments_fuse_into_longest_block():
    blocks = density_decomposition(jobs((1, 2), (2, 4), (3, 6)))
    assert len(blocks) == 1
    assert blocks[0].end == 3


def test_rho_factor():
    assert rho_factor([]) == 0
    assert rho_factor(jobs((1, 3), (1, 1))) == Fraction(3, 1)
    assert rho_factor(jobs((2, 1), (1, 5))) == Fraction(6, 3) == 2


def _brute_decomposition_ok(chain):
    blocks = density_decomposition(chain)
    assert [j for b in blocks for j in chain[b.start : b.end]] == list(chain)
    for left, right in zip(blocks, blocks[1:]):
        assert left.density > right.density
    for block in blocks:
        x = y = 0
        for job in chain[block.start :]:
            x += job.processing
            y += job.weight
            assert Fraction(y, x) <= block.density


def test_decomposition_property_random():
    rng = random.Random(3)
    for _ in range(200):
        chain = jobs(*[(rng.randint(1, 9), rng.randint(0, 9)) for _ in range(rng.randint(0, 12))])
        _brute_decomposition_ok(chain)


def test_merge_single_chain_passthrough():
    order, objective = merge_two_chains([Job(1, 3, "a")], [])
    assert order == ["a"]
    assert objective == 3


def test_merge_two_singletons():
    order, objective = merge_two_chains([Job(1, 3, "a")], [Job(2, 1, "b")])
    assert order == ["a", "b"]
    assert objective == 6  # reverse order would cost 11


def test_merge_rho_tie_prefers_first_chain():
    c1 = [Job(2, 1, "x"), Job(1, 5, "y")]
    c2 = [Job(1, 2, "z")]
    order, objective = merge_two_chains(c1, c2)
    assert order == ["x", "y", "z"]
    assert objective == 25
    assert interleaving_oracle(c1, c2) == 25


def test_wspt_degeneration_on_singletons():
    first = [Job(2, 3, "hi")]  # density 3/2
    second = [Job(3, 4, "lo")]  # density 4/3 < 3/2
    order, _ = merge_two_chains(first, second)
    assert order == ["hi", "lo"]
    tie1, tie2 = [Job(2, 3, "c1")], [Job(4, 6, "c2")]
    assert merge_two_chains(tie1, tie2)[0] == ["c1", "c2"]


def test_merge_matches_interleaving_oracle_random():
    rng = random.Random(17)
    for _ in range(200):
        total = rng.randint(0, 12)
        split = rng.randint(0, total)
        c1 = [Job(rng.randint(1, 9), rng.randint(0, 9), ("a", i)) for i in range(split)]
        c2 = [Job(rng.randint(1, 9), rng.randint(0, 9), ("b", i)) for i in range(total - split)]
        order, objective = merge_two_chains(c1, c2)
        assert objective == interleaving_oracle(c1, c2)
        # the emitted order preserves both chains and realizes the objective
        assert [t for t in order if t[0] == "a"] == [j.tag for j in c1]
        assert [t for t in order if t[0] == "b"] == [j.tag for j in c2]


def test_merge_value_agrees_with_expanded_walk():
    rng = random.Random(29)
    for _ in range(200):
        c1 = jobs(*[(rng.randint(1, 9), rng.randint(0, 9)) for _ in range(rng.randint(0, 8))])
        c2 = jobs(*[(rng.randint(1, 9), rng.randint(0, 9)) for _ in range(rng.randint(0, 8))])
        s1 = block_summaries([j.processing for j in c1], [j.weight for j in c1])
        s2 = block_summaries([j.processing for j in c2], [j.weight for j in c2])
        assert merge_value(s1, s2) == merge_two_chains(c1, c2)[1]


def test_scaling_weights_preserves_order():
    rng = random.Random(31)
    for _ in range(50):
        c1 = [Job(rng.randint(1, 9), rng.randint(0, 9), i) for i in range(rng.randint(0, 6))]
        c2 = [Job(rng.randint(1, 9), rng.randint(0, 9), 100 + i) for i in range(rng.randint(0, 6))]
        order, objective = merge_two_chains(c1, c2)
        scaled1 = [Job(j.processing, 7 * j.weight, j.tag) for j in c1]
        scaled2 = [Job(j.processing, 7 * j.weight, j.tag) for j in c2]
        order7, objective7 = merge_two_chains(scaled1, scaled2)
        assert order7 == order
        assert objective7 == 7 * objective
