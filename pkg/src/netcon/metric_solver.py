"""Exact solver for few relevant pairs on general networks.

Strategy: compute all shortest-path distances (the metric closure), then
enumerate every candidate forest over the pair endpoints plus a bounded set
of extra junction vertices, score each candidate by trying all pair orders,
and map the winner back to original edges.  Any objective that never
decreases when connection times grow is supported.

A candidate forest must connect every pair, use every edge on some pair's
path, and give every non-endpoint junction degree at least 3 (a degree-2
junction could be contracted away).  At most 2r - 2 junctions are needed in
general and r - 1 when all pairs share a vertex, so candidates are found by
choosing the junction set, splitting pairs into components, and enumerating
the labeled trees of each component with the junction-degree constraint.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from heapq import heapify, heappop, heappush
from typing import Iterator, Mapping, Sequence

from .errors import (
    GuardExceededError,
    InvalidInstanceError,
    NetconError,
    UnsupportedInstanceError,
)
from .evaluator import BuildSequence, ConnectionReport, evaluate_sequence
from .model import Instance, Network, Objective, RelevantPair
from .unionfind import UnionFind

PAIR_BOUND = 4
PAIR_BOUND_DEPOT = 6

_INF = 1 << 60

Edge = tuple[int, int]


@dataclass(frozen=True)
class MetricClosure:
    """All-pairs shortest distances with next-hop data for path recovery."""

    network: Network
    dist: tuple[tuple[int, ...], ...]
    next_hop: tuple[tuple[int, ...], ...]


def build_metric_closure(network: Network) -> MetricClosure:
    """Floyd-Warshall over the network; O(n^3), exact integer distances."""
    n = network.vertex_count
    dist = [[_INF] * n for _ in range(n)]
    nxt = [[-1] * n for _ in range(n)]
    for i in range(n):
        dist[i][i] = 0
        nxt[i][i] = i
    for u, v, c in network.edges:
        dist[u][v] = c
        dist[v][u] = c
        nxt[u][v] = v
        nxt[v][u] = u
    for k in range(n):
        dist_k = dist[k]
        for i in range(n):
            dist_i = dist[i]
            d_ik = dist_i[k]
            if d_ik == _INF:
                continue
            nxt_i = nxt[i]
            n_ik = nxt_i[k]
            for j in range(n):
                alt = d_ik + dist_k[j]
                if alt < dist_i[j]:
                    dist_i[j] = alt
                    nxt_i[j] = n_ik
    return MetricClosure(
        network=network,
        dist=tuple(tuple(row) for row in dist),
        next_hop=tuple(tuple(row) for row in nxt),
    )


def path_vertices(closure: MetricClosure, u: int, v: int) -> list[int]:
    hops = [u]
    nxt = closure.next_hop
    while u != v:
        u = nxt[u][v]
        hops.append(u)
    return hops


def extract_path(closure: MetricClosure, u: int, v: int) -> list[int]:
    """Edge ids of one shortest path between u and v in the original network."""
    if u == v:
        raise InvalidInstanceError("path endpoints must differ")
    hops = path_vertices(closure, u, v)
    index = closure.network.edge_index
    return [index[(a, b) if a < b else (b, a)] for a, b in zip(hops, hops[1:])]


@dataclass(frozen=True)
class RForest:
    """Acyclic edge set connecting every pair, with every edge on a pair path.

    Edges are canonical (u < v) vertex pairs sorted ascending; ``lengths``
    aligns with ``edges`` and carries host lengths (closure distances or
    original edge lengths).  ``pair_paths[i]`` is pair i's unique path.
    """

    host: str  # "metric_closure" or "original_graph"
    edges: tuple[Edge, ...]
    lengths: tuple[int, ...]
    pair_paths: tuple[tuple[Edge, ...], ...]

    @property
    def total_length(self) -> int:
        return sum(self.lengths)

    def length_of(self, edge: Edge) -> int:
        return self.lengths[self.edges.index(edge)]


def make_rforest(
    host: str,
    edges: Sequence[Edge],
    lengths: Mapping[Edge, int],
    pairs: Sequence[RelevantPair],
) -> RForest:
    """Build and validate a forest from an edge set; raises if not an r-forest."""
    canon = tuple(sorted((u, v) if u < v else (v, u) for u, v in edges))
    paths = tuple(_forest_path(canon, p.u, p.v) for p in pairs)
    forest = RForest(
        host=host,
        edges=canon,
        lengths=tuple(lengths[e] for e in canon),
        pair_paths=paths,
    )
    validate_rforest(forest, pairs)
    return forest


def _forest_path(edges: Sequence[Edge], source: int, target: int) -> tuple[Edge, ...]:
    adjacency: dict[int, list[tuple[int, Edge]]] = {}
    for u, v in edges:
        adjacency.setdefault(u, []).append((v, (u, v)))
        adjacency.setdefault(v, []).append((u, (u, v)))
    parent: dict[int, tuple[int, Edge] | None] = {source: None}
    stack = [source]
    while stack:
        x = stack.pop()
        if x == target:
            break
        for y, edge in adjacency.get(x, ()):
            if y not in parent:
                parent[y] = (x, edge)
                stack.append(y)
    if target not in parent:
        raise InvalidInstanceError(f"forest does not connect ({source}, {target})")
    path = []
    at = target
    while parent[at] is not None:
        at, edge = parent[at]
        path.append(edge)
    path.reverse()
    return tuple(path)


def validate_rforest(forest: RForest, pairs: Sequence[RelevantPair]) -> None:
    vertices = sorted({x for e in forest.edges for x in e})
    index = {v: i for i, v in enumerate(vertices)}
    uf = UnionFind(len(vertices))
    for u, v in forest.edges:
        if not uf.union(index[u], index[v]):
            raise InvalidInstanceError("forest contains a cycle")
    if len(forest.pair_paths) != len(pairs):
        raise InvalidInstanceError("forest pair paths do not match the pair list")
    covered: set[Edge] = set()
    for pair, path in zip(pairs, forest.pair_paths):
        endpoints = {pair.u, pair.v}
        for edge in path:
            if edge not in forest.edges:
                raise InvalidInstanceError(f"path edge {edge} not in forest")
            endpoints ^= set(edge)
        if endpoints:
            raise InvalidInstanceError(f"stored path does not join ({pair.u}, {pair.v})")
        covered.update(path)
    if covered != set(forest.edges):
        raise InvalidInstanceError("forest has an edge on no pair path")


@dataclass(frozen=True)
class ForestEvaluation:
    """Best value achievable with a forest as the essential edge set."""

    value: int
    edge_order: tuple[Edge, ...]
    pair_order: tuple[int, ...]


def evaluate_rforest(forest: RForest, instance: Instance) -> ForestEvaluation:
    """Try all pair orders, building each pair's remaining path edges in turn.

    A pair is charged at the completion of its own path block even if an
    earlier block already connected it; some order charges every pair at its
    true connection time, so the minimum over orders is exact.
    """
    length_of = dict(zip(forest.edges, forest.lengths))
    pairs = instance.pairs
    weighted = instance.objective is Objective.WEIGHTED_SUM
    best: ForestEvaluation | None = None
    for perm in itertools.permutations(range(len(pairs))):
        built: set[Edge] = set()
        order: list[Edge] = []
        elapsed = 0
        value = 0 if weighted else -_INF
        for idx in perm:
            for edge in forest.pair_paths[idx]:
                if edge not in built:
                    built.add(edge)
                    order.append(edge)
                    elapsed += length_of[edge]
            if weighted:
                value += pairs[idx].weight * elapsed
            else:
                value = max(value, elapsed - pairs[idx].due)
        if best is None or value < best.value:
            best = ForestEvaluation(value, tuple(order), perm)
    assert best is not None
    return best


# --- candidate enumeration ---------------------------------------------------


def _pair_atoms(pairs: Sequence[RelevantPair]) -> list[tuple[int, ...]]:
    """Group pair indices that share a vertex (transitively); such pairs can
    never sit in different forest components."""
    uf = UnionFind(len(pairs))
    owner: dict[int, int] = {}
    for i, pair in enumerate(pairs):
        for x in pair.key:
            if x in owner:
                uf.union(owner[x], i)
            else:
                owner[x] = i
    groups: dict[int, list[int]] = {}
    for i in range(len(pairs)):
        groups.setdefault(uf.find(i), []).append(i)
    return sorted(tuple(g) for g in groups.values())


def _set_partitions(items: Sequence) -> Iterator[list[list]]:
    if not items:
        yield []
        return
    head, rest = items[0], items[1:]
    for partition in _set_partitions(rest):
        for i in range(len(partition)):
            yield partition[:i] + [[head] + partition[i]] + partition[i + 1 :]
        yield [[head]] + partition


def _constrained_sequences(k: int, min_count: Sequence[int]) -> Iterator[tuple[int, ...]]:
    """All length k-2 sequences over 0..k-1 meeting per-symbol minimum counts."""
    length = k - 2
    deficits = list(min_count)
    total_deficit = sum(deficits)
    seq = [0] * length

    def rec(pos: int, total: int) -> Iterator[tuple[int, ...]]:
        if total > length - pos:
            return
        if pos == length:
            yield tuple(seq)
            return
        for v in range(k):
            seq[pos] = v
            if deficits[v] > 0:
                deficits[v] -= 1
                yield from rec(pos + 1, total - 1)
                deficits[v] += 1
            else:
                yield from rec(pos + 1, total)

    yield from rec(0, total_deficit)


def _decode_tree(seq: Sequence[int], k: int) -> list[tuple[int, int]]:
    """Decode a Prufer-style sequence into the edge list of a labeled tree."""
    degree = [1] * k
    for v in seq:
        degree[v] += 1
    leaves = [v for v in range(k) if degree[v] == 1]
    heapify(leaves)
    edges = []
    for v in seq:
        leaf = heappop(leaves)
        edges.append((leaf, v) if leaf < v else (v, leaf))
        degree[v] -= 1
        if degree[v] == 1:
            heappush(leaves, v)
    a = heappop(leaves)
    b = heappop(leaves)
    edges.append((a, b) if a < b else (b, a))
    return edges


def _component_trees(
    vertices: tuple[int, ...],
    junctions: frozenset[int],
    component_pairs: Sequence[tuple[int, RelevantPair]],
) -> Iterator[tuple[list[Edge], dict[int, tuple[Edge, ...]]]]:
    """Labeled trees on ``vertices`` where junction degrees are >= 3 and the
    pair paths cover every edge; yields (edges, paths by pair index)."""
    k = len(vertices)
    if k - 2 < 2 * len(junctions):
        return  # not enough total degree to give each junction degree >= 3
    index = {v: i for i, v in enumerate(vertices)}
    minimum = [2 if v in junctions else 0 for v in vertices]
    for seq in _constrained_sequences(k, minimum):
        local_edges = _decode_tree(seq, k)
        adjacency: list[list[tuple[int, int]]] = [[] for _ in range(k)]
        for eid, (a, b) in enumerate(local_edges):
            adjacency[a].append((b, eid))
            adjacency[b].append((a, eid))
        covered = 0
        paths: dict[int, tuple[Edge, ...]] = {}
        ok = True
        for pair_idx, pair in component_pairs:
            path_ids = _tree_path_ids(adjacency, index[pair.u], index[pair.v], k)
            if path_ids is None:
                ok = False
                break
            for eid in path_ids:
                covered |= 1 << eid
            paths[pair_idx] = tuple(
                _global_edge(local_edges[eid], vertices) for eid in path_ids
            )
        if not ok or covered != (1 << (k - 1)) - 1:
            continue
        yield [_global_edge(e, vertices) for e in local_edges], paths


def _global_edge(local: tuple[int, int], vertices: tuple[int, ...]) -> Edge:
    a, b = vertices[local[0]], vertices[local[1]]
    return (a, b) if a < b else (b, a)


def _tree_path_ids(
    adjacency: list[list[tuple[int, int]]], source: int, target: int, k: int
) -> list[int] | None:
    parent: list[tuple[int, int] | None] = [None] * k
    seen = [False] * k
    seen[source] = True
    stack = [source]
    while stack:
        x = stack.pop()
        if x == target:
            break
        for y, eid in adjacency[x]:
            if not seen[y]:
                seen[y] = True
                parent[y] = (x, eid)
                stack.append(y)
    if not seen[target]:
        return None
    ids = []
    at = target
    while parent[at] is not None:
        at, eid = parent[at]
        ids.append(eid)
    ids.reverse()
    return ids


def enumerate_candidate_forests(
    instance: Instance,
    closure: MetricClosure,
    *,
    depot_mode: bool = False,
    max_pairs: int | None = None,
    force: bool = False,
) -> Iterator[RForest]:
    """Stream every candidate closure forest exactly once, in a fixed order.

    Candidates are scanned by junction-set size, then lexicographically by
    junction set, pair partition, junction assignment, and tree shape.
    """
    pairs = instance.pairs
    r = len(pairs)
    bound = max_pairs if max_pairs is not None else (PAIR_BOUND_DEPOT if depot_mode else PAIR_BOUND)
    if r > bound and not force:
        raise GuardExceededError(
            f"{r} pairs exceeds the bound {bound}; candidate count grows like "
            "n^(2r-2), pass force=True to run anyway"
        )
    if depot_mode and instance.common_pair_vertex() is None:
        raise UnsupportedInstanceError("depot mode needs a vertex common to all pairs")

    dist = closure.dist
    n = instance.network.vertex_count
    terminals = set(instance.terminals)
    non_terminals = [v for v in range(n) if v not in terminals]
    max_junctions = (r - 1) if depot_mode else (2 * r - 2)

    atoms = _pair_atoms(pairs)
    partitions: list[list[list[tuple[int, ...]]]] = list(_set_partitions(atoms))
    # each partition is a list of groups; flatten atoms to pair index tuples
    flat_partitions: list[list[tuple[int, ...]]] = []
    for partition in partitions:
        groups = sorted(tuple(sorted(i for atom in group for i in atom)) for group in partition)
        flat_partitions.append(groups)
    flat_partitions.sort()

    for size in range(min(max_junctions, len(non_terminals)) + 1):
        for junction_set in itertools.combinations(non_terminals, size):
            for groups in flat_partitions:
                for assignment in itertools.product(range(len(groups)), repeat=size):
                    per_group_junctions: list[set[int]] = [set() for _ in groups]
                    for vertex, g in zip(junction_set, assignment):
                        per_group_junctions[g].add(vertex)
                    options = []
                    feasible = True
                    for group, extra in zip(groups, per_group_junctions):
                        group_pairs = [(i, pairs[i]) for i in group]
                        vertices = tuple(
                            sorted({x for _, p in group_pairs for x in p.key} | extra)
                        )
                        trees = list(
                            _component_trees(vertices, frozenset(extra), group_pairs)
                        )
                        if not trees:
                            feasible = False
                            break
                        options.append(trees)
                    if not feasible:
                        continue
                    for combo in itertools.product(*options):
                        edges: list[Edge] = []
                        paths: dict[int, tuple[Edge, ...]] = {}
                        for tree_edges, tree_paths in combo:
                            edges.extend(tree_edges)
                            paths.update(tree_paths)
                        edges.sort()
                        yield RForest(
                            host="metric_closure",
                            edges=tuple(edges),
                            lengths=tuple(dist[u][v] for u, v in edges),
                            pair_paths=tuple(paths[i] for i in range(r)),
                        )


# --- projection and the full solve -------------------------------------------


def project_to_graph(
    forest: RForest,
    evaluation: ForestEvaluation,
    closure: MetricClosure,
    instance: Instance,
) -> tuple[RForest, ForestEvaluation]:
    """Replace closure edges by shortest paths, skipping edges that close cycles.

    Closure edges are expanded in the evaluation's build order; every original
    edge along a path is kept unless it would join two already-connected
    vertices.  Edges that end up on no pair path are pruned before the
    projected forest is re-validated and re-scored.
    """
    network = instance.network
    uf = UnionFind(network.vertex_count)
    chosen: list[int] = []
    for a, b in evaluation.edge_order:
        for eid in extract_path(closure, a, b):
            u, v, _ = network.edges[eid]
            if uf.union(u, v):
                chosen.append(eid)
    kept = tuple(
        (network.edges[eid][0], network.edges[eid][1]) for eid in chosen
    )
    paths = tuple(_forest_path(kept, p.u, p.v) for p in instance.pairs)
    covered = {edge for path in paths for edge in path}
    pruned = tuple(sorted(e for e in kept if e in covered))
    lengths = {
        (u, v): c for u, v, c in network.edges
    }
    projected = RForest(
        host="original_graph",
        edges=pruned,
        lengths=tuple(lengths[e] for e in pruned),
        pair_paths=paths,
    )
    validate_rforest(projected, instance.pairs)
    return projected, evaluate_rforest(projected, instance)


@dataclass(frozen=True)
class FixedRSolution:
    sequence: BuildSequence
    report: ConnectionReport
    metric_forest: RForest
    metric_evaluation: ForestEvaluation
    projected_forest: RForest
    projected_evaluation: ForestEvaluation


def solve_fixed_r_detailed(
    instance: Instance,
    *,
    depot_mode: bool = False,
    max_pairs: int | None = None,
    force: bool = False,
) -> FixedRSolution:
    """Full solve keeping the winning closure forest and its projection."""
    closure = build_metric_closure(instance.network)
    best_forest: RForest | None = None
    best_eval: ForestEvaluation | None = None
    for candidate in enumerate_candidate_forests(
        instance, closure, depot_mode=depot_mode, max_pairs=max_pairs, force=force
    ):
        evaluation = evaluate_rforest(candidate, instance)
        if (
            best_eval is None
            or (evaluation.value, candidate.edges) < (best_eval.value, best_forest.edges)
        ):
            best_forest = candidate
            best_eval = evaluation
    if best_forest is None:
        raise NetconError("no candidate forest found")  # unreachable on valid instances

    projected, projected_eval = project_to_graph(best_forest, best_eval, closure, instance)
    index = instance.network.edge_index
    essential = [index[e] for e in projected_eval.edge_order]
    used = set(essential)
    sequence = tuple(
        essential + [e for e in range(instance.network.edge_count) if e not in used]
    )
    report = evaluate_sequence(instance, sequence)
    if report.objective > projected_eval.value:
        raise NetconError(
            f"internal inconsistency: replay {report.objective} exceeds "
            f"forest value {projected_eval.value}"
        )
    return FixedRSolution(
        sequence=sequence,
        report=report,
        metric_forest=best_forest,
        metric_evaluation=best_eval,
        projected_forest=projected,
        projected_evaluation=projected_eval,
    )


def solve_fixed_r(
    instance: Instance,
    depot_mode: bool = False,
    *,
    max_pairs: int | None = None,
    force: bool = False,
) -> tuple[BuildSequence, ConnectionReport]:
    """Exact optimum for an instance with few pairs; any monotone objective."""
    solution = solve_fixed_r_detailed(
        instance, depot_mode=depot_mode, max_pairs=max_pairs, force=force
    )
    return solution.sequence, solution.report
