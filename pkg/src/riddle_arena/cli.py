"""Command-line interface: dataset ingestion, splitting, book parsing,
indexing, simulation, evaluation, reports, and the HTTP server."""

from __future__ import annotations

import argparse
import json
import logging
import sys
import uuid

from . import agents as ag
from .bookparse import load_passages_jsonl, parse_book, segment_passages, write_passages_jsonl
from .data import load_riddle_csv, split_dataset
from .driver import run_match
from .engine import MatchConfig, write_transcript
from .evalrun import build_report, read_records, run_eval, write_records
from .metrics import EvalReport, render_report_table
from .retrieval import CorpusIndex, build_index, search
from .storage import DataDir, resolve_data_dir


def _data_dir(args) -> DataDir:
    return DataDir(resolve_data_dir(args.data_dir))


def cmd_ingest(args) -> int:
    riddles = load_riddle_csv(args.csv)
    data = _data_dir(args)
    path = data.save_riddles(riddles)
    print(f"ingested {len(riddles)} riddles -> {path}")
    return 0


def cmd_split(args) -> int:
    data = _data_dir(args)
    riddles = data.load_riddles()
    split = split_dataset(riddles, args.seed)
    path = data.save_split(split)
    print(
        f"seed {split.seed}: train={len(split.train)} test={len(split.test)} "
        f"dev={len(split.dev)} -> {path}"
    )
    return 0


def cmd_parse_book(args) -> int:
    with open(args.infile, "rb") as fp:
        tree = parse_book(fp, args.name)
    passages = segment_passages(tree, max_words=args.max_words)
    write_passages_jsonl(passages, args.out)
    print(f"parsed {args.name}: {len(passages)} passages -> {args.out}")
    return 0


def cmd_index(args) -> int:
    passages = load_passages_jsonl(args.passages)
    index = build_index(passages)
    out = args.out or _data_dir(args).index_json
    index.save(out)
    print(f"indexed {index.passage_count} passages, {len(index.vocabulary)} terms -> {out}")
    return 0


def cmd_search(args) -> int:
    index = CorpusIndex.load(args.index)
    for hit in search(index, args.query, k=args.k):
        heading = " / ".join(index.heading_paths[hit.passage_id])
        print(f"{hit.score:.4f}  {hit.passage_id}  [{heading}]")
    return 0


def cmd_simulate(args) -> int:
    with open(args.config, "r", encoding="utf-8") as fp:
        raw = json.load(fp)
    data = _data_dir(args)
    riddles_by_id = {r.id: r for r in data.load_riddles()}
    riddles = [riddles_by_id[rid] for rid in raw["riddle_ids"]]
    config = MatchConfig.from_dict(raw.get("config", {"team_ids": list(raw["agents"])}))

    agent_map = {}
    for team, spec in raw["agents"].items():
        agent_map[team] = _agent_from_string(spec, riddles, data)

    result, events = run_match(config, riddles, agent_map, full_contest=raw.get("full_contest"))
    out = args.out or data.match_transcript(uuid.uuid4().hex[:12])
    write_transcript(events, out)
    print(f"transcript ({len(events)} events) -> {out}")
    for team in sorted(result.scores):
        print(f"{team}: {result.scores[team]} points")
    return 0


def _agent_from_string(spec: str, riddles, data: DataDir) -> ag.Agent:
    """oracle:K | retrieval:THETA | remote:HOST:PORT"""
    kind, _, rest = spec.partition(":")
    if kind == "oracle":
        golds = {r.id: r.gold_answers[0] for r in riddles}
        return ag.OracleAgent(int(rest or 1), golds)
    if kind == "retrieval":
        index = CorpusIndex.load(data.index_json)
        return ag.RetrievalAgent(index, ag.BuzzPolicy(float(rest or 0.5)))
    if kind == "remote":
        return ag.RemoteAgent(rest)
    raise ValueError(f"unknown agent spec {spec!r}")


def cmd_eval(args) -> int:
    data = _data_dir(args)
    riddles = data.split_riddles(args.split)
    agent = _agent_from_string(args.agent, riddles, data)
    try:
        records = run_eval(riddles, agent, mode=args.mode)
    finally:
        agent.close()
    report = build_report(records)
    job_id = args.job or uuid.uuid4().hex[:12]
    write_records(records, data.job_records(job_id))
    data.write_json(
        data.job_meta(job_id),
        {
            "job_id": job_id,
            "split": args.split,
            "mode": args.mode,
            "agent": args.agent,
            "status": "finished",
            "progress": {"done": len(records), "total": len(records)},
            "report": report.to_dict(),
        },
    )
    print(f"job {job_id}: n={report.n} EM={report.em_pct:.2f}% FM={report.fm_pct:.2f}%")
    return 0


def cmd_report(args) -> int:
    data = _data_dir(args)
    meta = data.read_json(data.job_meta(args.job))
    report = EvalReport.from_dict(meta["report"])
    label = meta.get("agent", args.job)
    if isinstance(label, dict):
        label = label.get("type", args.job)
    print(render_report_table([(str(label), report)]))
    if args.verify:
        records = read_records(data.job_records(args.job))
        rebuilt = build_report(records)
        if rebuilt != report:
            print("WARNING: stored report does not match its records", file=sys.stderr)
            return 1
        print("(report verified against per-riddle records)")
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(resolve_data_dir(args.data_dir))
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="riddle-arena")
    parser.add_argument("--data-dir", default=None, help="data directory (env ARENA_DATA_DIR)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="validate a riddle CSV into the data directory")
    p.add_argument("csv")
    p.set_defaults(fn=cmd_ingest)

    p = sub.add_parser("split", help="write a seeded 60:20:20 split")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(fn=cmd_split)

    p = sub.add_parser("parse-book", help="parse book markup into passages")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--name", required=True)
    p.add_argument("--max-words", type=int, default=200)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=cmd_parse_book)

    p = sub.add_parser("index", help="build a TF-IDF index from passages")
    p.add_argument("--passages", required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(fn=cmd_index)

    p = sub.add_parser("search", help="query an index")
    p.add_argument("--index", required=True)
    p.add_argument("--query", required=True)
    p.add_argument("-k", type=int, default=3)
    p.set_defaults(fn=cmd_search)

    p = sub.add_parser("simulate", help="run a configured match on the virtual clock")
    p.add_argument("--config", required=True, help="JSON: riddle_ids, agents, config")
    p.add_argument("--out", default=None)
    p.set_defaults(fn=cmd_simulate)

    p = sub.add_parser("eval", help="evaluate an agent over a split")
    p.add_argument("--split", default="test", choices=("train", "test", "dev"))
    p.add_argument("--agent", required=True, help="oracle:K | retrieval:THETA | remote:HOST:PORT")
    p.add_argument("--mode", default="batch", choices=("batch", "live"))
    p.add_argument("--job", default=None)
    p.set_defaults(fn=cmd_eval)

    p = sub.add_parser("report", help="print a finished job's report table")
    p.add_argument("--job", required=True)
    p.add_argument("--verify", action="store_true", help="recompute from per-riddle records")
    p.set_defaults(fn=cmd_report)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8750)
    p.set_defaults(fn=cmd_serve)

    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
