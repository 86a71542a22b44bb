"""Command-line interface.

Subcommands: decompose, analyze, generate, evaluate, recover. All outputs
are written atomically (temp file plus rename); on failure partial outputs
are removed and the exit status is nonzero. Every random choice flows from
--seed, so identical invocations give identical files.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from concurrent.futures import ThreadPoolExecutor
from contextlib import contextmanager

from . import io as hio
from .core import Hypergraph, ValidationError, dedup
from .decompose import DecomposeConfig, decompose, decompose_weighted
from .generators import (
    GenParams,
    SamplingRule,
    evaluate,
    hyperpa_detailed,
    learn_params,
    naivepa,
    null_model,
    subset_sampling,
)
from .metrics import (
    MetricError,
    clustering_coefficient,
    connected_components,
    degree_histogram,
    effective_diameter,
    singular_values,
)
from .recovery import RecoveryError, recover
from .tailfit import FitError, heavy_tail_verdict

WORKERS_ENV = "HYPERDECOMP_WORKERS"


class _OutputTracker:
    """Remembers files written so far, for cleanup when a command fails."""

    def __init__(self) -> None:
        self.paths: list[str] = []

    def write_text(self, path: str, content: str) -> None:
        def writer(tmp: str) -> None:
            with open(tmp, "w", encoding="utf-8") as fh:
                fh.write(content)

        self.write_with(path, writer)

    def write_with(self, path: str, writer) -> None:
        """Run a path-taking writer against a temp file, then rename."""
        directory = os.path.dirname(os.path.abspath(path)) or "."
        fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-hyperdecomp-")
        os.close(fd)
        try:
            writer(tmp)
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
        self.paths.append(path)

    def cleanup(self) -> None:
        for path in self.paths:
            try:
                os.unlink(path)
            except OSError:
                pass


@contextmanager
def _tracked():
    tracker = _OutputTracker()
    try:
        yield tracker
    except BaseException:
        tracker.cleanup()
        raise


def _load_hypergraph(args) -> Hypergraph:
    if args.simplex:
        nverts, simplices, times = args.simplex
        H, _ = hio.read_simplex_format(nverts, simplices, times)
        return H
    if args.input is None:
        raise ValidationError("provide an input file or --simplex triple")
    return hio.read_line_format(args.input)


def _add_input_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("input", nargs="?", help="hyperedge-per-line input file")
    p.add_argument(
        "--simplex",
        nargs=3,
        metavar=("NVERTS", "SIMPLICES", "TIMES"),
        help="read the three-file simplex format instead",
    )


def _workers() -> int:
    raw = os.environ.get(WORKERS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def cmd_decompose(args) -> int:
    H = _load_hypergraph(args)
    with _tracked() as tracker:
        if args.weighted:
            G = decompose_weighted(H, args.level)
            tracker.write_with(args.out, lambda p: hio.write_weighted_graph(G, p))
            base = G.base
        else:
            cfg = DecomposeConfig.for_level(args.level, args.max_edge_size)
            base = decompose(H, cfg)
            lines = [f"# level={base.level}\n"]
            for i in range(base.edge_array.shape[0]):
                u = base.nodes[int(base.edge_array[i, 0])]
                v = base.nodes[int(base.edge_array[i, 1])]
                lines.append(
                    "-".join(map(str, u)) + " " + "-".join(map(str, v)) + "\n"
                )
            tracker.write_text(args.out, "".join(lines))
    print(f"level={base.level} nodes={base.num_nodes} edges={base.num_edges}")
    return 0


def _analyze_level(H: Hypergraph, level: int, args, tracker: _OutputTracker) -> dict:
    cfg = DecomposeConfig.for_level(level, args.max_edge_size)
    G = decompose(H, cfg)
    report = connected_components(G)
    summary: dict = {
        "level": level,
        "nodes": G.num_nodes,
        "edges": G.num_edges,
        "components": report.to_dict(),
    }
    hist = degree_histogram(G)
    prefix = os.path.join(args.out, f"level{level}")
    tracker.write_with(prefix + "-degrees.tsv", lambda p: hio.write_histogram_tsv(hist, p))
    if G.num_edges:
        try:
            summary["effective_diameter"] = effective_diameter(G, seed=args.seed)
        except MetricError as exc:
            summary["effective_diameter_error"] = str(exc)
        summary["clustering"] = clustering_coefficient(G)
        degrees = G.degrees()
        try:
            summary["degree_tail"] = heavy_tail_verdict(degrees).to_dict()
        except FitError as exc:  # degenerate degree samples stay reportable
            summary["degree_tail_error"] = str(exc)
        spectrum = singular_values(G, m=min(args.sv_count, G.num_nodes))
        tracker.write_with(
            prefix + "-spectrum.tsv",
            lambda p: hio.write_spectrum_tsv(spectrum.values, p),
        )
    tracker.write_with(prefix + ".json", lambda p: hio.write_report(summary, p))
    return summary


def cmd_analyze(args) -> int:
    H = dedup(_load_hypergraph(args))
    levels = _parse_levels(args.levels)
    os.makedirs(args.out, exist_ok=True)
    with _tracked() as tracker:
        workers = _workers()
        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                futures = [
                    pool.submit(_analyze_level, H, lv, args, tracker) for lv in levels
                ]
                summaries = [f.result() for f in futures]
        else:
            summaries = [_analyze_level(H, lv, args, tracker) for lv in levels]
    for s in summaries:
        comp = s["components"]
        line = (
            f"level={s['level']} nodes={s['nodes']} edges={s['edges']} "
            f"giant={comp['is_giant']}"
        )
        if "effective_diameter" in s:
            line += (
                f" diameter={s['effective_diameter']:.4g}"
                f" clustering={s['clustering']:.4g}"
            )
        print(line)
    return 0


def _parse_levels(raw: str) -> list[int]:
    try:
        levels = sorted({int(tok) for tok in raw.split(",") if tok})
    except ValueError:
        raise ValidationError(f"bad level list {raw!r}")
    if not levels:
        raise ValidationError("no levels requested")
    return levels


def _load_params(args, H: Hypergraph | None) -> GenParams:
    if args.params is not None:
        with open(args.params, "r", encoding="utf-8") as fh:
            return GenParams.from_dict(json.load(fh))
    if H is None:
        raise ValidationError("--params is required when no input data is given")
    return learn_params(dedup(H))


def cmd_generate(args) -> int:
    H = None
    if args.input is not None or args.simplex:
        H = _load_hypergraph(args)
    manifest: dict = {"model": args.model, "seed": args.seed}
    if args.model == "null":
        if H is None:
            raise ValidationError("the null model needs input data")
        out_H = null_model(H, seed=args.seed)
    else:
        params = _load_params(args, H)
        manifest["params"] = params.to_dict()
        if args.model == "hyperpa":
            out_H, stats = hyperpa_detailed(
                params, seed=args.seed, subset_cap=args.subset_cap
            )
            manifest["subset_cap"] = args.subset_cap
            manifest.update(stats.to_dict())
        elif args.model == "naivepa":
            out_H = naivepa(params, seed=args.seed)
        elif args.model == "subset":
            rule = SamplingRule(kind=args.rule, k=args.window, inner=args.inner)
            out_H = subset_sampling(params, p=args.p, rule=rule, seed=args.seed)
            manifest["p"] = args.p
            manifest["rule"] = rule.to_dict()
        else:
            raise ValidationError(f"unknown model {args.model!r}")
    with _tracked() as tracker:
        tracker.write_with(args.out, lambda p: hio.write_line_format(out_H, p))
        tracker.write_with(
            args.out + ".manifest.json", lambda p: hio.write_report(manifest, p)
        )
    print(f"model={args.model} nodes={out_H.n} hyperedges={out_H.num_edges}")
    return 0


def cmd_evaluate(args) -> int:
    real = dedup(hio.read_line_format(args.real))
    gen = dedup(hio.read_line_format(args.generated))
    card = evaluate(
        real,
        gen,
        levels=_parse_levels(args.levels),
        sv_count=args.sv_count,
        seed=args.seed,
    )
    with _tracked() as tracker:
        tracker.write_with(args.out, lambda p: hio.write_report(card, p))
    print(f"points={card.points} applicable={card.applicable}")
    return 0


def cmd_recover(args) -> int:
    graphs = {}
    for path in args.graphs:
        G = hio.read_weighted_graph(path)
        if G.level in graphs:
            raise ValidationError(f"level {G.level} provided twice")
        graphs[G.level] = G
    H = recover(graphs, max_size=args.max_size)
    with _tracked() as tracker:
        tracker.write_with(args.out, lambda p: hio.write_line_format(H, p))
    print(f"nodes={H.n} hyperedges={H.num_edges}")
    return 0


def _add_seed(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=42, help="seed for all randomness")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hyperdecomp",
        description="Multi-level hypergraph decomposition, pattern analysis, "
        "generation, and recovery.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("decompose", help="write one decomposition level")
    _add_seed(p)
    _add_input_args(p)
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--max-edge-size", type=int, default=None)
    p.add_argument("--weighted", action="store_true", help="uncapped, with weights")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("analyze", help="per-level structural reports")
    _add_seed(p)
    _add_input_args(p)
    p.add_argument("--levels", default="1,2,3,4")
    p.add_argument("--max-edge-size", type=int, default=None)
    p.add_argument("--sv-count", type=int, default=500)
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("generate", help="run a generator")
    _add_seed(p)
    _add_input_args(p)
    p.add_argument(
        "--model", required=True, choices=["hyperpa", "naivepa", "subset", "null"]
    )
    p.add_argument("--params", help="JSON file with generator parameters")
    p.add_argument("--subset-cap", type=int, default=6)
    p.add_argument("--p", type=float, default=0.8)
    p.add_argument("--rule", default="random", choices=["random", "recent", "k-most-recent"])
    p.add_argument("--window", type=int, default=None, help="window for k-most-recent")
    p.add_argument("--inner", default="random", choices=["random", "recent"])
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("evaluate", help="score generated against reference data")
    _add_seed(p)
    p.add_argument("real")
    p.add_argument("generated")
    p.add_argument("--levels", default="1,2,3,4")
    p.add_argument("--sv-count", type=int, default=100)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("recover", help="rebuild hyperedges from weighted levels")
    _add_seed(p)
    p.add_argument("graphs", nargs="+", help="weighted decomposition files")
    p.add_argument("--max-size", type=int, default=None)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_recover)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (
        ValidationError,
        hio.FormatError,
        MetricError,
        RecoveryError,
        FitError,
        OSError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
