"""Lossless reconstruction of a hypergraph from its weighted decompositions.

Works top-down over hyperedge sizes. At level k-1, after subtracting the
clique contributions of every already-recovered larger hyperedge, any edge
with positive residual weight joins two (k-1)-subsets whose union is a
size-k hyperedge; the residual weight is that hyperedge's multiplicity.
Size-1 hyperedges come from the level-1 self-loop counts.
"""

from __future__ import annotations

from itertools import combinations
from typing import Mapping

from .core import Hyperedge, Hypergraph, KSubset, ValidationError, WeightedDecomposedGraph

__all__ = ["RecoveryError", "recover"]


class RecoveryError(ValueError):
    """Input graphs are not the weighted decompositions of any hypergraph."""

    def __init__(self, level: int, message: str):
        super().__init__(f"level {level}: {message}")
        self.level = level


_PairKey = tuple[KSubset, KSubset]


def _pair_key(a: KSubset, b: KSubset) -> _PairKey:
    return (a, b) if a <= b else (b, a)


def _clique_pairs(members: KSubset, k: int):
    """Pairs of k-subsets of one hyperedge, i.e. its clique at level k."""
    return combinations(combinations(members, k), 2)


def _residual_weights(
    G: WeightedDecomposedGraph, recovered: list[tuple[KSubset, int]], level: int
) -> dict[_PairKey, int]:
    nodes = G.base.nodes
    weights: dict[_PairKey, int] = {}
    edge_array = G.base.edge_array
    for i in range(edge_array.shape[0]):
        u, v = int(edge_array[i, 0]), int(edge_array[i, 1])
        weights[_pair_key(nodes[u], nodes[v])] = int(G.weights[i])
    for members, mult in recovered:
        for a, b in _clique_pairs(members, level):
            key = _pair_key(a, b)
            left = weights.get(key, 0) - mult
            if left < 0:
                raise RecoveryError(
                    level,
                    f"edge {key} underflows while removing recovered hyperedge "
                    f"{members} (multiplicity {mult})",
                )
            weights[key] = left
    return weights


def recover(
    graphs: Mapping[int, WeightedDecomposedGraph], max_size: int | None = None
) -> Hypergraph:
    """Rebuild the hypergraph whose weighted decompositions are `graphs`.

    `graphs` maps level k to the uncapped weighted decomposition at k;
    levels 1 through max_size - 1 must be present. If max_size is omitted
    it is taken as one more than the highest provided level. Inconsistent
    inputs raise RecoveryError naming the level and offending edge.
    """
    if not graphs:
        raise ValidationError("no decomposed graphs provided")
    for level, G in graphs.items():
        if G.base.level != level:
            raise ValidationError(
                f"graph stored under level {level} reports level {G.base.level}"
            )
    if max_size is None:
        max_size = 1 + max(graphs)
    if max_size < 2:
        raise ValidationError("maximum hyperedge size must be at least 2")
    missing = [k for k in range(1, max_size) if k not in graphs]
    if missing:
        raise ValidationError(f"missing decomposition levels: {missing}")

    recovered: list[tuple[KSubset, int]] = []
    for size in range(max_size, 1, -1):
        level = size - 1
        G = graphs[level]
        larger = [(m, c) for m, c in recovered if len(m) > size]
        weights = _residual_weights(G, larger, level)
        for key in sorted(weights):
            mult = weights[key]
            if mult <= 0:
                continue
            a, b = key
            union = tuple(sorted(set(a) | set(b)))
            if len(union) != size:
                raise RecoveryError(
                    level,
                    f"residual edge {key} joins subsets whose union has "
                    f"{len(union)} nodes, expected {size}",
                )
            # Consume the whole clique of the identified hyperedge.
            for pa, pb in _clique_pairs(union, level):
                pk = _pair_key(pa, pb)
                left = weights.get(pk, 0) - mult
                if left < 0:
                    raise RecoveryError(
                        level,
                        f"edge {pk} underflows while peeling hyperedge {union} "
                        f"(multiplicity {mult})",
                    )
                weights[pk] = left
            recovered.append((union, mult))
        leftovers = {k: w for k, w in weights.items() if w != 0}
        if leftovers:
            key = min(leftovers)
            raise RecoveryError(
                level, f"unconsumed weight {leftovers[key]} on edge {key}"
            )

    level_one = graphs[1]
    singletons: list[tuple[KSubset, int]] = []
    for node_idx, count in sorted(level_one.self_loops.items()):
        if count < 1:
            raise RecoveryError(1, f"self-loop count {count} on node {node_idx}")
        singletons.append((level_one.base.nodes[node_idx], count))

    edges: list[Hyperedge] = []
    for members, mult in recovered + singletons:
        edges.extend(Hyperedge(members=members) for _ in range(mult))

    max_id = -1
    for G in graphs.values():
        for subset in G.base.nodes:
            if subset and subset[-1] > max_id:
                max_id = subset[-1]
    if max_id < 0:
        raise ValidationError("decompositions contain no nodes")
    return Hypergraph(n=max_id + 1, edges=tuple(edges))
