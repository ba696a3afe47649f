"""Command-line benchmark driver.

Example::

    revolver-partition --input graph.txt --algorithm revolver --k 8 \\
        --runs 10 --metrics-out metrics.json --trace-out trace.csv
"""

import argparse
import csv
import json
import logging
import statistics
import sys
import warnings
from pathlib import Path

from . import engine, metrics
from .engine import ALGORITHMS, RunConfig
from .graph import DEGREE_MEASURES, EdgeListParseError, compute_stats, load_edge_list, write_id_map

log = logging.getLogger("revolver")

TRACE_HEADER = ("step", "score", "local_edges", "max_normalized_load")
_NUMERIC = ("local_edges", "edge_cuts", "max_load", "expected_load", "max_normalized_load",
            "steps_executed")


def build_parser():
    p = argparse.ArgumentParser(
        prog="revolver-partition",
        description="Balanced k-way graph partitioning (Revolver, Spinner, hash, range).",
    )
    p.add_argument("--input", required=True, help="edge list, optionally gzip-compressed")
    p.add_argument("--algorithm", choices=ALGORITHMS, default="revolver")
    p.add_argument("--k", type=int, required=True, help="number of partitions")
    p.add_argument("--epsilon", type=float, default=0.05)
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--beta", type=float, default=0.1)
    p.add_argument("--max-steps", type=int, default=290)
    p.add_argument("--halt-window", type=int, default=5)
    p.add_argument("--theta", type=float, default=0.001)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--runs", type=int, default=1)
    p.add_argument("--degree-measure", choices=DEGREE_MEASURES, default="out")
    p.add_argument("--metrics-out", help="JSON file with per-run and aggregate metrics")
    p.add_argument("--trace-out", help="per-step CSV trace; _runN is appended when --runs > 1")
    p.add_argument("--labels-out", help="write 'original_id partition' lines (first run)")
    p.add_argument("--idmap-out", help="write 'dense_id original_id' lines if ids were remapped")
    p.add_argument("--record-time", action="store_true",
                   help="include wall time in the metrics file (breaks byte-reproducibility)")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def emit_trace(result, sink):
    """Write the per-step trace of ``result`` as CSV to a path or text file object."""
    trace = result.trace
    if len(trace) == 0:
        raise ValueError("trace is empty; nothing to write")
    rows = zip(range(1, len(trace) + 1), trace.score, trace.local_edges, trace.max_normalized_load)
    if hasattr(sink, "write"):
        _write_trace(sink, rows)
        return
    try:
        with open(sink, "w", newline="") as fh:
            _write_trace(fh, rows)
    except OSError as exc:
        raise OSError(f"cannot write trace to {sink}: {exc.strerror or exc}") from exc


def _write_trace(fh, rows):
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(TRACE_HEADER)
    for step, score, local, mnl in rows:
        w.writerow([step, repr(float(score)), repr(float(local)), repr(float(mnl))])


def read_trace(path):
    with open(path, newline="") as fh:
        return [
            {"step": int(r["step"]), **{c: float(r[c]) for c in TRACE_HEADER[1:]}}
            for r in csv.DictReader(fh)
        ]


def run_record(index, seed, result, report, record_time=False):
    rec = {"run": index, "seed": seed, "steps_executed": result.steps_executed,
           "converged": result.converged, **report.to_dict()}
    if record_time:
        rec["wall_time"] = result.wall_time
    return rec


def aggregate(records):
    out = {"mean": {}, "stddev": {}}
    for key in _NUMERIC:
        vals = [float(r[key]) for r in records]
        out["mean"][key] = statistics.fmean(vals)
        out["stddev"][key] = statistics.pstdev(vals)
    return out


def read_metrics(path):
    """Load a metrics file; returns the parsed document and the per-run reports."""
    with open(path) as fh:
        doc = json.load(fh)
    return doc, [metrics.MetricsReport.from_dict(r) for r in doc["runs"]]


def _trace_path(base, index, runs):
    if runs == 1:
        return Path(base)
    base = Path(base)
    return base.with_name(f"{base.stem}_run{index}{base.suffix}")


def run_cli(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.runs < 1:
        parser.error("--runs must be at least 1")

    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            configs = [
                RunConfig(k=args.k, epsilon=args.epsilon, alpha=args.alpha, beta=args.beta,
                          max_steps=args.max_steps, halt_window=args.halt_window,
                          theta=args.theta, seed=args.seed + i, workers=args.workers,
                          algorithm=args.algorithm, degree_measure=args.degree_measure)
                for i in range(args.runs)
            ]
    except ValueError as exc:
        parser.error(str(exc))
    for w in {str(w.message) for w in caught}:
        print(f"warning: {w}", file=sys.stderr)

    try:
        g = load_edge_list(args.input)
    except (OSError, EdgeListParseError, UnicodeDecodeError) as exc:
        print(f"error: cannot read {args.input}: {exc}", file=sys.stderr)
        return 1
    log.info("loaded %r", g)
    if g.num_edges == 0:
        print(f"error: {args.input} has no edges after dropping self-loops", file=sys.stderr)
        return 1

    records = []
    for i, cfg in enumerate(configs):
        result = engine.run(g, cfg)
        report = metrics.evaluate(g, result.state)
        records.append(run_record(i, cfg.seed, result, report, args.record_time))
        print(f"run {i} seed={cfg.seed} steps={result.steps_executed} "
              f"local_edges={report.local_edges:.4f} "
              f"max_normalized_load={report.max_normalized_load:.4f}")
        try:
            if args.trace_out:
                if len(result.trace):
                    emit_trace(result, _trace_path(args.trace_out, i, args.runs))
                else:
                    log.warning("%s has no per-step trace; skipping", cfg.algorithm)
            if args.labels_out and i == 0:
                with open(args.labels_out, "w") as fh:
                    for orig, lab in zip(g.ids.tolist(), result.labels.tolist()):
                        fh.write(f"{orig} {lab}\n")
        except OSError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 1

    try:
        if args.idmap_out and g.remapped:
            write_id_map(g, args.idmap_out)
        if args.metrics_out:
            stats = compute_stats(g) if g.num_vertices >= 2 else None
            doc = {
                "input": str(args.input),
                "format": "edgelist",
                "config": {**configs[0].to_dict(), "seed": args.seed, "runs": args.runs},
                "graph": stats.__dict__ if stats else None,
                "runs": records,
                "aggregate": aggregate(records),
            }
            with open(args.metrics_out, "w") as fh:
                json.dump(doc, fh, indent=2)
                fh.write("\n")
    except OSError as exc:
        print(f"error: cannot write output: {exc}", file=sys.stderr)
        return 1
    return 0


def main():
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
