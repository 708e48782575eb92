import random

import pytest

from netcon import (
    Instance,
    InstanceFormatError,
    InvalidInstanceError,
    Network,
    Objective,
    OlaInput,
    RelevantPair,
    generate,
    parse_instance,
    reduce_ola,
    subset_dp,
    write_instance,
)

MINIMAL = """\
netcon 1
objective wct
vertices 2
edge 0 1 4
pair 0 1 2
"""

PATH4 = """\
netcon 1
objective wct
vertices 4
edge 0 1 1
edge 1 2 2
edge 2 3 3
pair 0 3 2
pair 1 2 5
"""


def test_parse_minimal_instance():
    inst = parse_instance(MINIMAL)
    assert inst.network.vertex_count == 2
    assert inst.network.edges == ((0, 1, 4),)
    assert inst.pairs == (RelevantPair(0, 1, 2),)
    assert inst.objective is Objective.WEIGHTED_SUM


def test_parse_accepts_comments_and_blank_lines():
    text = "# a comment\nnetcon 1\n\nobjective wct  # inline\nvertices 2\nedge 0 1 4\npair 0 1 2\n"
    assert parse_instance(text) == parse_instance(MINIMAL)


def test_round_trip_is_identity_on_canonical_text():
    assert write_instance(parse_instance(PATH4)) == PATH4
    inst = parse_instance(PATH4)
    assert parse_instance(write_instance(inst)) == inst


def test_writer_orients_and_sorts_edges():
    net = Network(4, ((3, 1, 2), (1, 0, 1), (2, 1, 5)))
    assert net.edges == ((0, 1, 1), (1, 2, 5), (1, 3, 2))
    inst = Instance(net, (RelevantPair(3, 0, 1),))
    assert "edge 1 3 2" in write_instance(inst)
    assert "pair 0 3 1" in write_instance(inst)


@pytest.mark.parametrize(
    "line, fragment",
    [
        ("edge 0 0 5", "self-loop"),
        ("edge 0 1 0", "non-positive edge length"),
        ("edge 0 1 2\nedge 1 0 3", "duplicate edge"),
        ("edge 0 1 2\npair 0 1 0", "non-positive pair weight"),
        ("edge 0 1 2\npair 0 1 1\npair 1 0 2", "duplicate pair"),
        ("edge 0 1 x", "must be an integer"),
        ("edge 0 5 1", "out of range"),
        ("bogus 1 2", "unknown directive"),
    ],
)
def test_parse_errors_carry_line_numbers(line, fragment):
    text = f"netcon 1\nobjective wct\nvertices 2\n{line}\npair 0 1 1\n"
    with pytest.raises(InstanceFormatError) as err:
        parse_instance(text)
    assert fragment in str(err.value)
    assert "line" in str(err.value)


def test_parse_rejects_disconnected_network():
    text = "netcon 1\nobjective wct\nvertices 4\nedge 0 1 1\nedge 2 3 1\npair 0 1 1\n"
    with pytest.raises(InstanceFormatError, match="not connected"):
        parse_instance(text)


def test_parse_due_date_rules():
    with_due = "netcon 1\nobjective maxlat\nvertices 2\nedge 0 1 4\npair 0 1 2 7\n"
    inst = parse_instance(with_due)
    assert inst.pairs[0].due == 7
    missing = with_due.replace("pair 0 1 2 7", "pair 0 1 2")
    with pytest.raises(InstanceFormatError, match="missing due date"):
        parse_instance(missing)
    stray = MINIMAL.replace("pair 0 1 2", "pair 0 1 2 7")
    with pytest.raises(InstanceFormatError):
        parse_instance(stray)


def test_parse_requires_header_and_sections():
    with pytest.raises(InstanceFormatError, match="header"):
        parse_instance("vertices 2\n")
    with pytest.raises(InstanceFormatError, match="objective"):
        parse_instance("netcon 1\nvertices 2\nedge 0 1 1\n")
    with pytest.raises(InstanceFormatError, match="no relevant pairs"):
        parse_instance("netcon 1\nobjective wct\nvertices 2\nedge 0 1 1\n")


def test_round_trip_fixpoint_on_random_instances():
    rng = random.Random(5)
    for _ in range(100):
        kind = rng.choice(("random_tree", "star", "path", "random_graph"))
        n = rng.randint(2, 10)
        inst = generate(
            kind,
            n,
            seed=rng.randrange(1 << 30),
            pair_count=rng.randint(1, n * (n - 1) // 2),
            objective=rng.choice(("wct", "maxlat")),
        )
        assert parse_instance(write_instance(inst)) == inst


def test_generate_path_with_explicit_pair():
    inst = generate("path", 3, length_range=(1, 1), pairs=[(0, 2, 1)])
    assert inst.network.edges == ((0, 1, 1), (1, 2, 1))
    assert inst.pairs == (RelevantPair(0, 2, 1),)


def test_generate_star_shape():
    inst = generate("star", 4, length_range=(1, 1), pairs=[(1, 2, 1)])
    assert inst.network.edges == ((0, 1, 1), (0, 2, 1), (0, 3, 1))
    assert inst.network.degrees[0] == 3


def test_generate_is_deterministic_per_seed():
    a = generate("random_tree", 9, seed=7, pair_count=4)
    b = generate("random_tree", 9, seed=7, pair_count=4)
    assert a == b
    c = generate("random_tree", 9, seed=8, pair_count=4)
    assert a != c


def test_generate_validates_params():
    with pytest.raises(InvalidInstanceError):
        generate("random_graph", 4, edge_count=2)  # below n - 1
    with pytest.raises(InvalidInstanceError):
        generate("random_graph", 4, edge_count=7)  # above n(n-1)/2
    with pytest.raises(InvalidInstanceError):
        generate("path", 4, pair_count=0)
    with pytest.raises(InvalidInstanceError):
        generate("blob", 4)


def test_generators_always_produce_valid_instances():
    # constructors re-validate every invariant, so surviving them is the check
    rng = random.Random(99)
    kinds = ("random_tree", "star", "path", "random_graph")
    for trial in range(1000):
        n = rng.randint(2, 12)
        inst = generate(
            kinds[trial % 4],
            n,
            seed=trial,
            pair_count=rng.randint(1, n * (n - 1) // 2),
            objective="maxlat" if trial % 5 == 0 else "wct",
        )
        assert inst.network.vertex_count == n
        assert parse_instance(write_instance(inst)) == inst


def test_reduce_ola_triangle():
    instance, threshold = reduce_ola(OlaInput(3, ((0, 1), (0, 2), (1, 2)), 4))
    assert threshold == 22
    assert instance.network.edges == ((0, 1, 1), (0, 2, 1), (0, 3, 1))
    center = [p for p in instance.pairs if p.u == 0]
    leaf = [p for p in instance.pairs if p.u != 0]
    assert [p.weight for p in center] == [1, 1, 1]
    assert [p.weight for p in leaf] == [2, 2, 2]
    assert subset_dp(instance)[0] == 22


def test_reduce_ola_edgeless_graph():
    instance, threshold = reduce_ola(OlaInput(2, (), 0))
    assert threshold == 6
    assert [p.weight for p in instance.pairs] == [2, 2]
    assert subset_dp(instance)[0] == 6  # optimum meets the threshold exactly


def test_reduce_ola_equivalence_small():
    # arrangement optimum + |V|^2(|V|+1)/2 = reduced-star optimum, |V| <= 4
    import itertools

    for n in range(1, 5):
        vertex_pairs = list(itertools.combinations(range(n), 2))
        for mask in range(1 << len(vertex_pairs)):
            edges = tuple(vertex_pairs[i] for i in range(len(vertex_pairs)) if mask >> i & 1)
            best = min(
                sum(abs(perm[u] - perm[v]) for u, v in edges)
                for perm in itertools.permutations(range(1, n + 1))
            )
            instance, _ = reduce_ola(OlaInput(n, edges, 0))
            assert subset_dp(instance)[0] == best + n * n * (n + 1) // 2


def test_network_invariants():
    with pytest.raises(InvalidInstanceError):
        Network(2, ((0, 0, 1),))
    with pytest.raises(InvalidInstanceError):
        Network(3, ((0, 1, 1),))  # vertex 2 unreachable
    with pytest.raises(InvalidInstanceError):
        Network(2, ((0, 1, 1), (1, 0, 2)))
    assert Network(1, ()).is_tree  # zero edges, one vertex


def test_ola_input_invariants():
    with pytest.raises(InvalidInstanceError):
        OlaInput(2, ((0, 0),), 1)
    with pytest.raises(InvalidInstanceError):
        OlaInput(2, ((0, 1), (1, 0)), 1)
    ola = OlaInput(3, ((2, 0), (1, 0)), 0)
    assert ola.edges == ((0, 1), (0, 2))


def test_instance_helpers():
    inst = parse_instance(PATH4)
    assert inst.terminals == (0, 1, 2, 3)
    assert inst.common_pair_vertex() is None
    depot = Instance(inst.network, (RelevantPair(0, 1, 1), RelevantPair(0, 3, 1)))
    assert depot.common_pair_vertex() == 0
