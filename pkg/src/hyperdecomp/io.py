"""Readers, writers, and report serialization.

Supports the three-file simplex format (sizes, member stream, timestamps),
a one-hyperedge-per-line text format, a weighted decomposed-graph format
that survives a recovery round trip, and JSON reports with TSV sidecars
for distributions. Parse errors carry the file and line they came from.
"""

from __future__ import annotations

import json
import math
from typing import Iterable, Mapping

import numpy as np

from .core import (
    DecomposedGraph,
    Hyperedge,
    Hypergraph,
    KSubset,
    ValidationError,
    WeightedDecomposedGraph,
    canonicalize,
)

__all__ = [
    "FormatError",
    "read_simplex_format",
    "read_line_format",
    "write_line_format",
    "read_weighted_graph",
    "write_weighted_graph",
    "write_report",
    "read_report",
    "write_histogram_tsv",
    "write_spectrum_tsv",
    "format_float",
]


class FormatError(ValueError):
    def __init__(self, path: str, line: int, message: str):
        super().__init__(f"{path}:{line}: {message}")
        self.path = path
        self.line = line


def _int_tokens(path: str) -> list[tuple[int, int]]:
    """(value, line_number) for every integer token; commas are separators."""
    out: list[tuple[int, int]] = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            for tok in line.replace(",", " ").split():
                try:
                    out.append((int(tok), lineno))
                except ValueError:
                    raise FormatError(path, lineno, f"expected an integer, got {tok!r}")
    return out


def read_simplex_format(
    nverts_path: str, simplices_path: str, times_path: str
) -> tuple[Hypergraph, dict[int, int]]:
    """Parse the size/member-stream/timestamp triple of files.

    Node ids are remapped densely in order of first appearance; the
    returned dict maps original id to dense id. Hyperedges keep their
    input order and may repeat.
    """
    sizes = _int_tokens(nverts_path)
    members = _int_tokens(simplices_path)
    times = _int_tokens(times_path)
    if len(times) != len(sizes):
        raise FormatError(
            times_path,
            times[-1][1] if times else 1,
            f"{len(times)} timestamps for {len(sizes)} hyperedges",
        )
    total = sum(s for s, _ in sizes)
    if total != len(members):
        raise FormatError(
            simplices_path,
            members[-1][1] if members else 1,
            f"member stream has {len(members)} entries, sizes sum to {total}",
        )

    id_map: dict[int, int] = {}
    raw_edges: list[list[int]] = []
    pos = 0
    for (size, lineno) in sizes:
        if size < 1:
            raise FormatError(nverts_path, lineno, f"hyperedge size {size} < 1")
        edge = []
        for value, member_line in members[pos : pos + size]:
            if value < 0:
                raise FormatError(simplices_path, member_line, f"negative node id {value}")
            if value not in id_map:
                id_map[value] = len(id_map)
            edge.append(id_map[value])
        raw_edges.append(edge)
        pos += size
    H = canonicalize(raw_edges, timestamps=[t for t, _ in times])
    return H, id_map


def read_line_format(path: str, n: int | None = None) -> Hypergraph:
    """One hyperedge per line: node ids, then an optional final t=<int>."""
    raw_edges: list[list[int]] = []
    timestamps: list[int | None] = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            toks = line.split()
            if not toks or toks[0].startswith("#"):
                continue
            ts: int | None = None
            if toks[-1].startswith("t="):
                try:
                    ts = int(toks[-1][2:])
                except ValueError:
                    raise FormatError(path, lineno, f"bad timestamp {toks[-1]!r}")
                toks = toks[:-1]
            if not toks:
                raise FormatError(path, lineno, "hyperedge has no members")
            edge = []
            for tok in toks:
                try:
                    v = int(tok)
                except ValueError:
                    raise FormatError(path, lineno, f"expected a node id, got {tok!r}")
                if v < 0:
                    raise FormatError(path, lineno, f"negative node id {v}")
                edge.append(v)
            raw_edges.append(edge)
            timestamps.append(ts)
    if any(t is not None for t in timestamps):
        if any(t is None for t in timestamps):
            raise FormatError(path, 1, "either all or no hyperedges may carry t=")
        return canonicalize(raw_edges, n=n, timestamps=timestamps)  # type: ignore[arg-type]
    return canonicalize(raw_edges, n=n)


def write_line_format(H: Hypergraph, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for e in H.edges:
            line = " ".join(str(v) for v in e.members)
            if e.timestamp is not None:
                line += f" t={e.timestamp}"
            fh.write(line + "\n")


def _subset_str(subset: KSubset) -> str:
    return "-".join(str(v) for v in subset)


def _parse_subset(tok: str, path: str, lineno: int) -> KSubset:
    try:
        parts = tuple(int(p) for p in tok.split("-"))
    except ValueError:
        raise FormatError(path, lineno, f"bad subset token {tok!r}")
    if not parts or any(p < 0 for p in parts):
        raise FormatError(path, lineno, f"bad subset token {tok!r}")
    if tuple(sorted(set(parts))) != parts:
        raise FormatError(path, lineno, f"subset {tok!r} is not sorted and distinct")
    return parts


def write_weighted_graph(G: WeightedDecomposedGraph, path: str) -> None:
    """Level header, one weighted edge per line, then self-loop lines."""
    base = G.base
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"# level={base.level}\n")
        for i in range(base.edge_array.shape[0]):
            u = base.nodes[int(base.edge_array[i, 0])]
            v = base.nodes[int(base.edge_array[i, 1])]
            fh.write(f"{_subset_str(u)} {_subset_str(v)} {int(G.weights[i])}\n")
        for node_idx, count in sorted(G.self_loops.items()):
            fh.write(f"selfloop {_subset_str(base.nodes[node_idx])} {count}\n")


def read_weighted_graph(path: str) -> WeightedDecomposedGraph:
    level: int | None = None
    edges: list[tuple[KSubset, KSubset, int]] = []
    loops: list[tuple[KSubset, int]] = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            toks = line.split()
            if not toks:
                continue
            if toks[0] == "#":
                for tok in toks[1:]:
                    if tok.startswith("level="):
                        try:
                            level = int(tok[6:])
                        except ValueError:
                            raise FormatError(path, lineno, f"bad level {tok!r}")
                continue
            if toks[0] == "selfloop":
                if len(toks) != 3:
                    raise FormatError(path, lineno, "selfloop lines take subset and count")
                subset = _parse_subset(toks[1], path, lineno)
                try:
                    count = int(toks[2])
                except ValueError:
                    raise FormatError(path, lineno, f"bad count {toks[2]!r}")
                loops.append((subset, count))
                continue
            if len(toks) != 3:
                raise FormatError(path, lineno, "edge lines take two subsets and a weight")
            u = _parse_subset(toks[0], path, lineno)
            v = _parse_subset(toks[1], path, lineno)
            try:
                w = int(toks[2])
            except ValueError:
                raise FormatError(path, lineno, f"bad weight {toks[2]!r}")
            if w < 1:
                raise FormatError(path, lineno, f"weight must be positive, got {w}")
            edges.append((u, v, w))
    if level is None:
        raise FormatError(path, 1, "missing '# level=<k>' header")

    subsets: set[KSubset] = set()
    for u, v, _ in edges:
        subsets.add(u)
        subsets.add(v)
    for s, _ in loops:
        subsets.add(s)
    for s in subsets:
        if len(s) != level:
            raise FormatError(path, 1, f"subset {s} does not match level {level}")
    nodes = tuple(sorted(subsets))
    index = {s: i for i, s in enumerate(nodes)}

    rows = []
    weights = []
    for u, v, w in edges:
        iu, iv = index[u], index[v]
        if iu == iv:
            raise FormatError(path, 1, f"self pair {u} listed as an edge")
        rows.append((min(iu, iv), max(iu, iv)))
        weights.append(w)
    order = sorted(range(len(rows)), key=lambda i: rows[i])
    if len(set(rows)) != len(rows):
        raise FormatError(path, 1, "duplicate edge listed")
    edge_array = (
        np.array([rows[i] for i in order], dtype=np.int64).reshape(-1, 2)
        if rows
        else np.empty((0, 2), dtype=np.int64)
    )
    w_arr = np.array([weights[i] for i in order], dtype=np.int64)
    base = DecomposedGraph(level=level, nodes=nodes, edge_array=edge_array)
    self_loops: dict[int, int] = {}
    for s, count in loops:
        if level != 1:
            raise FormatError(path, 1, "self-loops only belong to level 1")
        if count < 1:
            raise FormatError(path, 1, f"self-loop count must be positive, got {count}")
        self_loops[index[s]] = self_loops.get(index[s], 0) + count
    return WeightedDecomposedGraph(base=base, weights=w_arr, self_loops=self_loops)


def format_float(x: float) -> float:
    """Round to 6 significant digits for stable report output."""
    if x == 0 or not math.isfinite(x):
        return x
    return float(f"{x:.6g}")


def _round_floats(obj):
    if isinstance(obj, float):
        return format_float(obj)
    if isinstance(obj, dict):
        return {k: _round_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round_floats(v) for v in obj]
    return obj


def write_report(obj, path: str) -> None:
    """Serialize a report dict (or object with to_dict) as stable JSON."""
    data = obj.to_dict() if hasattr(obj, "to_dict") else obj
    data = _round_floats(data)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(data, fh, indent=2, sort_keys=True)
        fh.write("\n")


def read_report(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def write_histogram_tsv(hist: Mapping[int, int], path: str) -> None:
    """Degree histogram sidecar: value <tab> count, ascending."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("value\tcount\n")
        for value in sorted(hist):
            fh.write(f"{value}\t{hist[value]}\n")


def write_spectrum_tsv(values: Iterable[float], path: str) -> None:
    """Singular-value sidecar: rank <tab> value, descending values."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("rank\tvalue\n")
        for rank, value in enumerate(values, start=1):
            fh.write(f"{rank}\t{format_float(float(value))}\n")
