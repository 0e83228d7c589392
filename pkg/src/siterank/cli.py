"""Pipeline driver: each stage is a subcommand with file handoffs.

Exit codes: 0 success, 1 usage error, 2 data/processing error.
"""

from __future__ import annotations

import argparse
import os
import sys
import threading
from pathlib import Path

from . import engine, evalkit, graph, logparse, ranker, social, synthcorpus, textindex
from .errors import SiterankError
from .fusion import search
from .service import SearchService, make_server, parse_weights

USAGE_ERROR = 1
DATA_ERROR = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse defaults to exit code 2
        self.print_usage(sys.stderr)
        self.exit(USAGE_ERROR, f"{self.prog}: error: {message}\n")


def _build_parser() -> _Parser:
    parser = _Parser(prog="siterank",
                     description="Local-website search engine pipeline")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="parse logs into transition counts")
    p.add_argument("--logs", required=True, type=Path,
                   help="log file or directory of log files (gzip ok)")
    p.add_argument("--out", required=True, type=Path)
    p.add_argument("--timeout", type=float, default=logparse.DEFAULT_SESSION_TIMEOUT)
    p.add_argument("--referrer", action="store_true",
                   help="attach hits to their referrer when it differs "
                        "from the previous hit")
    p.add_argument("--keep-query", action="store_true")

    p = sub.add_parser("scan", help="index a corpus directory and extract links")
    p.add_argument("--corpus", required=True, type=Path)
    p.add_argument("--out-links", required=True, type=Path)
    p.add_argument("--out-index", required=True, type=Path)

    p = sub.add_parser("graph", help="build the probabilistic traffic graph")
    p.add_argument("--transitions", type=Path)
    p.add_argument("--links", type=Path)
    p.add_argument("--smoothing", type=float, default=0.1)
    p.add_argument("--out", required=True, type=Path)

    p = sub.add_parser("rank", help="compute page scores (graph or links input)")
    source = p.add_mutually_exclusive_group(required=True)
    source.add_argument("--graph", type=Path)
    source.add_argument("--links", type=Path)
    p.add_argument("--alpha", type=float, default=0.15)
    p.add_argument("--epsilon", type=float, default=1e-5)
    p.add_argument("--max-iterations", type=int, default=1000)
    p.add_argument("--out", required=True, type=Path)

    p = sub.add_parser("ssr", help="compute annotation/page similarity matrices")
    p.add_argument("--annotations", required=True, type=Path)
    p.add_argument("--ca", type=float, default=0.7)
    p.add_argument("--cp", type=float, default=0.7)
    p.add_argument("--iters", type=int, default=10)
    p.add_argument("--delta", type=float, default=1e-4)
    p.add_argument("--out", required=True, type=Path, help="output directory")

    p = sub.add_parser("query", help="run one query against a state directory")
    p.add_argument("--state", type=Path, default=None)
    p.add_argument("--q", required=True)
    p.add_argument("-k", type=int, default=10)
    p.add_argument("--weights", default=None, help="text,social,static")
    p.add_argument("--static", choices=("lpr", "pr"), default="lpr")

    p = sub.add_parser("eval", help="compare configurations over judgments")
    p.add_argument("--state", type=Path, default=None)
    p.add_argument("--judgments", required=True, type=Path)
    p.add_argument("--configs", required=True, type=Path)
    p.add_argument("--out", required=True, type=Path)
    p.add_argument("--csv", type=Path, default=None)
    p.add_argument("--depth", type=int, default=evalkit.DEFAULT_DEPTH)

    p = sub.add_parser("synth", help="generate the synthetic test site")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--pages", type=int, default=200)
    p.add_argument("--skew", type=float, default=0.75)
    p.add_argument("--sessions", type=int, default=500)
    p.add_argument("--out", required=True, type=Path)

    p = sub.add_parser("serve", help="serve the HTTP query API")
    p.add_argument("--state", type=Path, default=None)
    p.add_argument("--port", type=int, default=None)
    p.add_argument("--ui", type=Path, default=None,
                   help="directory of static UI files to serve at /")
    return parser


def _state_dir(args) -> Path:
    if args.state is not None:
        return args.state
    env = os.environ.get("SITERANK_STATE")
    if env:
        return Path(env)
    raise SiterankError("no state directory: pass --state or set SITERANK_STATE")


def _cmd_ingest(args) -> int:
    paths = ([args.logs] if args.logs.is_file()
             else sorted(p for p in args.logs.iterdir() if p.is_file()))
    if not paths:
        raise SiterankError(f"no log files under {args.logs}")
    records = []
    skipped = 0

    def _count_error(_line, _exc):
        nonlocal skipped
        skipped += 1

    for path in paths:
        records.extend(logparse.iter_log_records(
            path, keep_query=args.keep_query, on_error=_count_error))
    sessions = logparse.sessionize(records, timeout_s=args.timeout)
    counts = logparse.extract_transitions(sessions, use_referrer=args.referrer)
    logparse.write_transitions(counts, args.out,
                               meta={"timeout": args.timeout,
                                     "referrer": args.referrer})
    print(f"ingest: {len(records)} records, {skipped} skipped, "
          f"{len(sessions)} sessions, {len(counts.counts)} transitions "
          f"-> {args.out}", file=sys.stderr)
    return 0


def _cmd_scan(args) -> int:
    if not args.corpus.is_dir():
        raise SiterankError(f"corpus directory not found: {args.corpus}")
    docs, links = textindex.scan_corpus(args.corpus)
    if not docs:
        raise SiterankError(f"no indexable files under {args.corpus}")
    idx = textindex.build_index(docs)
    textindex.write_index(idx, args.out_index)
    textindex.write_links(links, args.out_links)
    print(f"scan: {idx.doc_count} documents, {len(idx.postings)} terms, "
          f"{sum(len(v) for v in links.values())} links", file=sys.stderr)
    return 0


def _cmd_graph(args) -> int:
    counts = (logparse.read_transitions(args.transitions)
              if args.transitions else None)
    links = textindex.read_links(args.links) if args.links else None
    g = graph.build_prob_graph(counts, links, smoothing=args.smoothing)
    graph.write_graph(g, args.out, meta={"smoothing": args.smoothing})
    print(f"graph: {len(g.pages)} pages, {g.edge_count} edges -> {args.out}",
          file=sys.stderr)
    return 0


def _cmd_rank(args) -> int:
    params = ranker.RankParams(alpha=args.alpha, epsilon=args.epsilon,
                               max_iterations=args.max_iterations)
    if args.graph is not None:
        g = graph.read_graph(args.graph)
        vector = ranker.lpagerank(g, params)
        ranker.write_rank_vector(vector, args.out, kind="lpr", params=params,
                                 source_checksum=g.fingerprint)
    else:
        links = textindex.read_links(args.links)
        vector = ranker.pagerank(links, params)
        ranker.write_rank_vector(vector, args.out, kind="pr", params=params)
    print(f"rank: {len(vector.scores)} pages in {vector.iterations_used} "
          f"iterations (residual {vector.final_residual:.3g}) -> {args.out}",
          file=sys.stderr)
    return 0


def _cmd_ssr(args) -> int:
    triples = social.read_annotations_tsv(args.annotations)
    store = social.load_annotations(triples)
    params = social.SsrParams(c_a=args.ca, c_p=args.cp, delta=args.delta,
                              max_iterations=args.iters)
    sim = social.social_sim_rank(store, params)
    social.write_sim_matrices(sim, args.out, params=params,
                              store_fingerprint=store.fingerprint)
    print(f"ssr: {store.num_annotations} annotations x {store.num_pages} pages, "
          f"{sim.iterations_used} sweeps (delta {sim.final_delta:.3g}) "
          f"-> {args.out}", file=sys.stderr)
    return 0


def _cmd_query(args) -> int:
    state = engine.load_state(_state_dir(args))
    weights = parse_weights(args.weights) if args.weights else None
    kwargs = {"weights": weights} if weights else {}
    results = search(state, args.q, k=args.k, static=args.static, **kwargs)
    print("position\tpage\tscore\ttext\tsocial\tstatic")
    for r in results:
        print(f"{r.position}\t{r.page}\t{r.score!r}\t{r.text!r}"
              f"\t{r.social!r}\t{r.static!r}")
    return 0


def _cmd_eval(args) -> int:
    state = engine.load_state(_state_dir(args))
    judgments = evalkit.read_judgments(args.judgments)
    configs = evalkit.read_configs(args.configs)
    report = evalkit.compare_configs(judgments, configs, state, depth=args.depth)
    csv_path = args.csv if args.csv else args.out.with_suffix(".csv")
    evalkit.write_report(report, args.out, csv_path)
    print(f"eval: {len(judgments)} queries x {len(configs)} configs "
          f"-> {args.out}", file=sys.stderr)
    return 0


def _cmd_synth(args) -> int:
    summary = synthcorpus.generate_corpus(args.out, seed=args.seed,
                                          pages=args.pages, skew=args.skew,
                                          sessions=args.sessions)
    print(f"synth: {summary['pages']} pages, {summary['log_lines']} log lines, "
          f"{summary['annotations']} annotations -> {args.out}", file=sys.stderr)
    return 0


def _cmd_serve(args) -> int:
    port = args.port
    if port is None:
        port = int(os.environ.get("SITERANK_PORT", "8080"))
    state_dir = _state_dir(args)
    service = SearchService(ui_dir=args.ui)
    server = make_server(service, port=port)

    def _load():
        service.set_state(engine.load_state(state_dir))

    loader = threading.Thread(target=_load, daemon=True)
    loader.start()
    print(f"serving on http://127.0.0.1:{server.server_address[1]} "
          f"(state: {state_dir})", file=sys.stderr)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
    return 0


_COMMANDS = {
    "ingest": _cmd_ingest,
    "scan": _cmd_scan,
    "graph": _cmd_graph,
    "rank": _cmd_rank,
    "ssr": _cmd_ssr,
    "query": _cmd_query,
    "eval": _cmd_eval,
    "synth": _cmd_synth,
    "serve": _cmd_serve,
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else USAGE_ERROR
    try:
        return _COMMANDS[args.command](args)
    except SiterankError as exc:
        print(f"siterank {args.command}: {exc}", file=sys.stderr)
        return DATA_ERROR
    except OSError as exc:
        print(f"siterank {args.command}: {exc}", file=sys.stderr)
        return DATA_ERROR


if __name__ == "__main__":
    sys.exit(main())
