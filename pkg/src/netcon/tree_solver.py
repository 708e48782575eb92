"""Exact solver on trees: dynamic programming over all subtrees.

Every connected edge subset (subtree) gets an optimal build order, computed
bottom-up by edge count: for each subtree and each candidate last edge, the
orders of the two remaining components are interleaved as a two-chain
scheduling problem (one job per edge, processing time = edge length, weight =
pair weight connected when that edge completes), then the last edge picks up
the weight of every pair whose path crosses it.  Subtrees are keyed by edge
bitmask; the two components left by deleting an edge are obtained with O(1)
mask intersections against the edge's precomputed sides in the full tree.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from . import chains
from .errors import GuardExceededError, NetconError, UnsupportedInstanceError
from .evaluator import BuildSequence, ConnectionReport, evaluate_sequence
from .model import Instance, Network, Objective, RelevantPair

LEAF_BOUND = 6

_EMPTY_BLOCKS: tuple[chains.BlockSummary, ...] = ()


@dataclass(frozen=True)
class SubtreeCatalog:
    """Every connected edge subset of a tree, grouped by edge count.

    ``levels[p]`` lists the edge bitmasks of all subtrees with p edges in
    ascending order (``levels[0]`` is empty).  ``split`` yields the keys of
    the two components left after deleting one edge, 0 marking a component
    that is a single vertex.
    """

    network: Network
    levels: tuple[tuple[int, ...], ...]
    vertex_masks: Mapping[int, int]
    sides: tuple[tuple[int, int], ...]
    growth: Mapping[int, tuple[int, int]]  # mask -> (parent mask, vertex added)

    def split(self, key: int, edge_id: int) -> tuple[int, int]:
        side_u, side_v = self.sides[edge_id]
        return key & side_u, key & side_v

    def all_keys(self) -> Iterable[int]:
        for level in self.levels:
            yield from level

    @property
    def subtree_count(self) -> int:
        return sum(len(level) for level in self.levels)


@dataclass(frozen=True)
class SubtreeRecord:
    """Optimal solution of one subtree.

    ``seq`` and ``connect`` are aligned: ``connect[i]`` is the total weight of
    the subtree's pairs first connected when ``seq[i]`` completes.  ``blocks``
    memoizes the density decomposition of the job chain induced by ``seq``,
    reused by every merge this record participates in.
    """

    key: int
    pair_weight: int
    seq: tuple[int, ...]
    connect: tuple[int, ...]
    value: int
    blocks: tuple[chains.BlockSummary, ...]

    @property
    def connect_weights(self) -> dict[int, int]:
        return dict(zip(self.seq, self.connect))


def _edge_side_masks(network: Network) -> tuple[tuple[int, int], ...]:
    """For each tree edge (u, v): bitmasks of the edges on u's and v's side."""
    adjacency = network.adjacency
    sides = []
    full = (1 << network.edge_count) - 1
    for eid, (u, v, _) in enumerate(network.edges):
        mask = 0
        stack = [u]
        seen = {u, v}
        while stack:
            x = stack.pop()
            for y, through in adjacency[x]:
                if through != eid and y not in seen:
                    seen.add(y)
                    mask |= 1 << through
                    stack.append(y)
        # edges reachable from u without crossing (u, v) vs. everything else
        sides.append((mask, full ^ mask ^ (1 << eid)))
    return tuple(sides)


def enumerate_subtrees(network: Network) -> SubtreeCatalog:
    """Catalog all connected edge subsets, growing them one pendant edge at a time."""
    if not network.is_tree:
        raise UnsupportedInstanceError("subtree enumeration needs a tree network")
    m = network.edge_count
    incident: list[list[int]] = [[] for _ in range(network.vertex_count)]
    for eid, (u, v, _) in enumerate(network.edges):
        incident[u].append(eid)
        incident[v].append(eid)

    vertex_masks: dict[int, int] = {}
    growth: dict[int, tuple[int, int]] = {}
    levels: list[list[int]] = [[]]
    current: list[int] = []
    for eid, (u, v, _) in enumerate(network.edges):
        key = 1 << eid
        vertex_masks[key] = (1 << u) | (1 << v)
        current.append(key)
    levels.append(current)

    for _ in range(2, m + 1):
        grown: list[int] = []
        for key in current:
            vmask = vertex_masks[key]
            probe = vmask
            while probe:
                vlow = probe & -probe
                probe ^= vlow
                for eid in incident[vlow.bit_length() - 1]:
                    bit = 1 << eid
                    if key & bit:
                        continue
                    new_key = key | bit
                    if new_key in vertex_masks:
                        continue
                    u, v, _ = network.edges[eid]
                    new_vertex = v if vmask >> u & 1 else u
                    vertex_masks[new_key] = vmask | (1 << new_vertex)
                    growth[new_key] = (key, new_vertex)
                    grown.append(new_key)
        grown.sort()
        levels.append(grown)
        current = grown
        if not current:
            break
    while len(levels) < m + 1:
        levels.append([])

    return SubtreeCatalog(
        network=network,
        levels=tuple(tuple(level) for level in levels),
        vertex_masks=vertex_masks,
        sides=_edge_side_masks(network),
        growth=growth,
    )


def pair_weight_tables(
    network: Network, pairs: Iterable[RelevantPair], catalog: SubtreeCatalog
) -> dict[int, int]:
    """Total weight of pairs lying inside each subtree, keyed by subtree mask.

    Computed incrementally: a subtree grown by one pendant vertex v gains the
    weight of every pair {v, x} with x already inside.
    """
    by_vertex: list[list[tuple[int, int]]] = [[] for _ in range(network.vertex_count)]
    pair_of_edge: dict[tuple[int, int], int] = {}
    for pair in pairs:
        by_vertex[pair.u].append((pair.v, pair.weight))
        by_vertex[pair.v].append((pair.u, pair.weight))
        pair_of_edge[(pair.u, pair.v)] = pair.weight

    weights: dict[int, int] = {0: 0}
    for key in catalog.levels[1]:
        u, v, _ = network.edges[key.bit_length() - 1]
        weights[key] = pair_of_edge.get((u, v), 0)
    for level in catalog.levels[2:]:
        for key in level:
            parent, vertex = catalog.growth[key]
            inside = catalog.vertex_masks[parent]
            gained = sum(w for other, w in by_vertex[vertex] if inside >> other & 1)
            weights[key] = weights[parent] + gained
    return weights


def crossing_weight(
    catalog: SubtreeCatalog, weights: Mapping[int, int], key: int, edge_id: int
) -> int:
    """Weight of the pairs inside the subtree whose path uses edge_id."""
    part_a, part_b = catalog.split(key, edge_id)
    return weights[key] - weights[part_a] - weights[part_b]


def _merged_jobs(
    rec_a: SubtreeRecord | None, rec_b: SubtreeRecord | None
) -> tuple[list[int], list[int]]:
    """Interleave two records' job chains optimally; empty records allowed."""
    blocks_a = rec_a.blocks if rec_a else _EMPTY_BLOCKS
    blocks_b = rec_b.blocks if rec_b else _EMPTY_BLOCKS
    seq: list[int] = []
    connect: list[int] = []
    i = j = 0
    for src in chains.merge_plan(blocks_a, blocks_b):
        if src == 0:
            _, _, _, a, b = blocks_a[i]
            i += 1
            seq.extend(rec_a.seq[a:b])
            connect.extend(rec_a.connect[a:b])
        else:
            _, _, _, a, b = blocks_b[j]
            j += 1
            seq.extend(rec_b.seq[a:b])
            connect.extend(rec_b.connect[a:b])
    return seq, connect


def merge_for_edge(
    network: Network,
    catalog: SubtreeCatalog,
    weights: Mapping[int, int],
    key: int,
    edge_id: int,
    rec_a: SubtreeRecord | None,
    rec_b: SubtreeRecord | None,
) -> tuple[tuple[int, ...], int]:
    """Best order for a subtree forced to finish with edge_id, plus its value."""
    blocks_a = rec_a.blocks if rec_a else _EMPTY_BLOCKS
    blocks_b = rec_b.blocks if rec_b else _EMPTY_BLOCKS
    cross = crossing_weight(catalog, weights, key, edge_id)
    total_length = 0
    probe = key
    while probe:
        low = probe & -probe
        probe ^= low
        total_length += network.edges[low.bit_length() - 1][2]
    value = chains.merge_value(blocks_a, blocks_b) + total_length * cross
    seq, _ = _merged_jobs(rec_a, rec_b)
    seq.append(edge_id)
    return tuple(seq), value


def solve_tree(
    instance: Instance, *, leaf_bound: int = LEAF_BOUND, force: bool = False
) -> tuple[BuildSequence, ConnectionReport]:
    """Exact optimum for a tree instance under the weighted-sum objective.

    Work grows like n^(leaves + 2), so trees with more than ``leaf_bound``
    leaves are refused unless ``force`` is set.
    """
    network = instance.network
    if not network.is_tree:
        raise UnsupportedInstanceError("tree solver needs a tree network")
    if instance.objective is not Objective.WEIGHTED_SUM:
        raise UnsupportedInstanceError("tree solver only handles the wct objective")
    leaves = network.leaf_count
    if leaves > leaf_bound and not force:
        raise GuardExceededError(
            f"tree has {leaves} leaves (bound {leaf_bound}); runtime grows like "
            "n^(leaves+2), pass force=True to run anyway"
        )

    catalog = enumerate_subtrees(network)
    weights = pair_weight_tables(network, instance.pairs, catalog)
    edges = network.edges
    sides = catalog.sides
    merge_value = chains.merge_value

    lengths: dict[int, int] = {0: 0}
    records: dict[int, SubtreeRecord | None] = {0: None}
    for key in catalog.levels[1]:
        eid = key.bit_length() - 1
        c = edges[eid][2]
        w = weights[key]
        lengths[key] = c
        records[key] = SubtreeRecord(
            key=key,
            pair_weight=w,
            seq=(eid,),
            connect=(w,),
            value=c * w,
            blocks=chains.block_summaries((c,), (w,)),
        )

    for level in catalog.levels[2:]:
        for key in level:
            parent, _ = catalog.growth[key]
            new_edge = (key ^ parent).bit_length() - 1
            total_length = lengths[parent] + edges[new_edge][2]
            lengths[key] = total_length
            w_key = weights[key]

            best_value = None
            best_edge = -1
            best_parts = (0, 0)
            probe = key
            while probe:
                low = probe & -probe
                probe ^= low
                eid = low.bit_length() - 1
                side_u, side_v = sides[eid]
                part_a = key & side_u
                part_b = key & side_v
                rec_a = records[part_a]
                rec_b = records[part_b]
                # a lone component's merge cost is its own optimal value
                if rec_a is None:
                    value = rec_b.value if rec_b else 0
                elif rec_b is None:
                    value = rec_a.value
                else:
                    value = merge_value(rec_a.blocks, rec_b.blocks)
                value += total_length * (w_key - weights[part_a] - weights[part_b])
                if best_value is None or value < best_value:
                    best_value = value
                    best_edge = eid
                    best_parts = (part_a, part_b)

            seq, connect = _merged_jobs(records[best_parts[0]], records[best_parts[1]])
            seq.append(best_edge)
            connect.append(w_key - weights[best_parts[0]] - weights[best_parts[1]])
            ps = tuple(edges[eid][2] for eid in seq)
            records[key] = SubtreeRecord(
                key=key,
                pair_weight=w_key,
                seq=tuple(seq),
                connect=tuple(connect),
                value=best_value,
                blocks=chains.block_summaries(ps, tuple(connect)),
            )

    full = (1 << network.edge_count) - 1
    answer = records[full]
    report = evaluate_sequence(instance, answer.seq)
    if report.objective != answer.value:
        raise NetconError(
            f"internal inconsistency: dp value {answer.value} != replay {report.objective}"
        )
    return answer.seq, report
