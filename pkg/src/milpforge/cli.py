"""Command-line surface: generate / solve / run-agent / evaluate / audit / export-sft.

Exit codes: 0 success, 1 domain failure, 2 usage error. All commands are
deterministic under a fixed --seed. Configuration precedence is flags over
config file over defaults; credentials only ever come from an environment
variable named in the backend spec.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .evaluation import (
    AuditItem,
    EvalRecord,
    audit,
    choose_epsilon,
    execution_rate,
    solution_accuracy,
)
from .executors import BridgeExecutor, OracleExecutor
from .gateway import LiveBackend, ReplayBackend
from .generation import generate_one
from .instance_io import ParseError, from_text, to_text
from .model import Problem
from .sampler import SamplerConfig
from .solver import LimitError, SolverConfig, Status, solve_milp, verify_value
from .testing import CannedBackend
from .trajectory import assemble, export_sft
from .workflow import OK, TAGS, WorkflowTrace, run_pipeline

CLASS_KEYS = (
    "linear", "knapsack", "mdknapsack", "set_cover", "bin_packing",
    "tsp", "shift_scheduling", "transportation", "max_flow", "min_cost_flow",
)


def read_config(path: str | None) -> dict[str, str]:
    """Key-value config file: one `key = value` per line, # comments allowed."""
    if not path:
        return {}
    config: dict[str, str] = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected key = value")
        key, _, value = line.partition("=")
        config[key.strip()] = value.strip()
    return config


def sampler_config_from(config: dict[str, str]) -> SamplerConfig:
    kwargs = {}
    if "n_min" in config or "n_max" in config:
        kwargs["n_range"] = (int(config.get("n_min", 2)), int(config.get("n_max", 8)))
    if "m_min" in config or "m_max" in config:
        kwargs["m_range"] = (int(config.get("m_min", 2)), int(config.get("m_max", 8)))
    for key in ("keep_prob", "bound_prob", "integer_prob"):
        if key in config:
            kwargs[key] = float(config[key])
    if "retry_budget" in config:
        kwargs["retry_budget"] = int(config["retry_budget"])
    if "domains" in config:
        kwargs["domains"] = tuple(d.strip() for d in config["domains"].split(";") if d.strip())
    return SamplerConfig(**kwargs)


def class_sizes_from(config: dict[str, str]) -> dict[str, dict[str, int]]:
    sizes: dict[str, dict[str, int]] = {}
    for key, value in config.items():
        if "." in key:
            tag, _, param = key.partition(".")
            if tag in CLASS_KEYS:
                sizes.setdefault(tag, {})[param] = int(value)
    return sizes


def parse_counts(spec: str) -> dict[str, int]:
    counts: dict[str, int] = {}
    for part in spec.split(","):
        part = part.strip()
        if not part:
            continue
        tag, _, num = part.partition("=")
        tag = tag.strip()
        if tag not in CLASS_KEYS:
            raise ValueError(f"unknown class {tag!r}")
        counts[tag] = int(num)
        if counts[tag] < 0:
            raise ValueError(f"negative count for {tag}")
    return counts


def _gen_worker(args: tuple) -> tuple[str, str, str, float, str, int]:
    class_tag, seed, index, config, sizes = args
    inst = generate_one(class_tag, seed, index, config, sizes)
    return (
        inst.instance_id,
        inst.class_tag,
        to_text(inst.problem),
        inst.label,
        inst.description,
        inst.seed,
    )


def cmd_generate(args: argparse.Namespace) -> int:
    config = read_config(args.config)
    counts = parse_counts(args.counts if args.counts else config.get("counts", ""))
    if not counts:
        print("error: no counts given (use --counts 'linear=100,tsp=20')", file=sys.stderr)
        return 2
    sampler_config = sampler_config_from(config)
    sizes = class_sizes_from(config)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    jobs = [
        (tag, args.seed, index, sampler_config, sizes.get(tag))
        for tag in sorted(counts)
        for index in range(counts[tag])
    ]
    if args.workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=args.workers) as pool:
            results = list(pool.map(_gen_worker, jobs, chunksize=4))
    else:
        results = [_gen_worker(job) for job in jobs]

    manifest_path = out / "manifest.jsonl"
    with open(manifest_path, "w", encoding="utf-8") as manifest:
        for instance_id, class_tag, prob_text, label, description, seed in results:
            prob_file = out / f"{instance_id}.prob"
            prob_file.write_text(prob_text, encoding="utf-8")
            (out / f"{instance_id}.desc.txt").write_text(description, encoding="utf-8")
            manifest.write(
                json.dumps(
                    {
                        "id": instance_id,
                        "class": class_tag,
                        "path": prob_file.name,
                        "label": label,
                        "seed": seed,
                    },
                    sort_keys=True,
                )
                + "\n"
            )
    print(f"generated {len(results)} instances -> {manifest_path}")
    return 0


def cmd_solve(args: argparse.Namespace) -> int:
    path = Path(args.instance)
    if not path.is_file():
        print(f"error: no such instance file: {path}", file=sys.stderr)
        return 2
    try:
        problem = from_text(path.read_text(encoding="utf-8"))
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    try:
        outcome = solve_milp(problem, SolverConfig())
    except LimitError as exc:
        print(f"error: solver limit: {exc}", file=sys.stderr)
        return 1
    if outcome.status is Status.OPTIMAL:
        print(f"Optimal value: {outcome.value:g}")
        names = [v.name for v in problem.variables]
        point = ", ".join(f"{n}={v:g}" for n, v in zip(names, outcome.point))
        print(f"Point: {point}")
        print(f"Pivots: {outcome.stats.pivots}  Nodes: {outcome.stats.nodes}")
        return 0
    print(outcome.status.value.capitalize())
    return 1


def load_dataset(path: str) -> list[dict]:
    """Manifest rows ({id, class, path, label, seed}) or benchmark rows
    ({id, description, problem?, label}); returns unified dicts."""
    base = Path(path).parent
    items = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            row = json.loads(line)
            problem = None
            description = row.get("description", "")
            if "path" in row:
                text = (base / row["path"]).read_text(encoding="utf-8")
                problem = from_text(text)
                desc_file = base / (row["id"] + ".desc.txt")
                if not description and desc_file.is_file():
                    description = desc_file.read_text(encoding="utf-8")
            elif row.get("problem"):
                try:
                    problem = from_text(row["problem"])
                except ParseError:
                    problem = None
            items.append(
                {
                    "id": row["id"],
                    "description": description,
                    "problem": problem,
                    "label": row.get("label"),
                }
            )
    return items


def make_backend(spec: str):
    if spec == "canned":
        return CannedBackend()
    kind, _, rest = spec.partition(":")
    if kind == "replay":
        return ReplayBackend(Path(rest))
    if kind == "live":
        url, _, env = rest.partition(",")
        return LiveBackend(url, credential_env=env or "MILPFORGE_API_KEY")
    raise ValueError(f"unknown backend spec {spec!r} (use canned, replay:PATH, live:URL[,ENV])")


def make_executors(spec: str, problem: Problem | None):
    if spec == "oracle":
        if problem is None:
            raise ValueError("oracle executor needs a machine-readable problem")
        return {tag: OracleExecutor(problem) for tag in TAGS}
    kind, _, rest = spec.partition(":")
    if kind == "bridge":
        bridge = BridgeExecutor(tuple(rest.split()))
        return {tag: bridge for tag in TAGS}
    raise ValueError(f"unknown executor spec {spec!r} (use oracle or bridge:CMD)")


def cmd_run_agent(args: argparse.Namespace) -> int:
    items = load_dataset(args.dataset)
    if not items:
        print("error: empty dataset", file=sys.stderr)
        return 1
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    backend = make_backend(args.backend)
    failures = 0
    for item in items:
        record: dict = {"id": item["id"], "label": item["label"]}
        try:
            executors = make_executors(args.executor, item["problem"])
            answer, trace = run_pipeline(
                backend,
                executors,
                item["description"],
                max_debug_rounds=args.max_debug,
                timeout_s=args.timeout,
            )
            record["answer"] = answer
            record["trace"] = trace.to_dict()
        except Exception as exc:
            record["error"] = str(exc)
            failures += 1
        (out / f"{item['id']}.trace.json").write_text(
            json.dumps(record, ensure_ascii=False, sort_keys=True), encoding="utf-8"
        )
    print(f"ran {len(items)} instances ({failures} failed) -> {out}")
    return 0


def _load_traces(traces_dir: str) -> dict[str, dict]:
    traces = {}
    for path in sorted(Path(traces_dir).glob("*.trace.json")):
        record = json.loads(path.read_text(encoding="utf-8"))
        traces[record["id"]] = record
    return traces


def _label_text(label) -> str:
    return label if isinstance(label, str) else repr(float(label))


def cmd_evaluate(args: argparse.Namespace) -> int:
    items = load_dataset(args.labels)
    traces = _load_traces(args.traces)
    records = []
    per_tag_hits = {tag: 0 for tag in TAGS}
    per_tag_ok = {tag: 0 for tag in TAGS}
    for item in items:
        record = traces.get(item["id"])
        if record is None or "trace" not in record:
            records.append(EvalRecord(item["id"], None, False, _label_text(item["label"])))
            continue
        trace = WorkflowTrace.from_dict(record["trace"])
        any_ok = any(
            t.final_result is not None and t.final_result.status == OK
            for t in trace.tracks.values()
        )
        predicted = record.get("answer")
        label_text = _label_text(item["label"])
        records.append(EvalRecord(item["id"], predicted, any_ok or predicted is not None, label_text))
        eps = choose_epsilon(label_text)
        for tag, track in trace.tracks.items():
            final = track.final_result
            if final is not None and final.status == OK:
                per_tag_ok[tag] += 1
                if abs(final.value - float(label_text)) <= eps:
                    per_tag_hits[tag] += 1
    if not records:
        print("error: nothing to evaluate", file=sys.stderr)
        return 1
    acc = solution_accuracy(records)
    execr = execution_rate(records)
    print(f"solution accuracy: {acc.fraction:.2%} ({sum(b for _, b in acc.per_instance)}/{len(records)})")
    print(f"execution rate:    {execr.fraction:.2%}")
    print("per-tag correct/ok:")
    for tag in TAGS:
        print(f"  {tag:10s} {per_tag_hits[tag]}/{per_tag_ok[tag]}")
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            for r, (_, correct) in zip(records, acc.per_instance):
                fh.write(json.dumps({"id": r.instance_id, "predicted": r.predicted,
                                     "label": r.label_text, "correct": correct}) + "\n")
    return 0


def cmd_audit(args: argparse.Namespace) -> int:
    items = [
        AuditItem(row["id"], row["description"], row["problem"], _label_text(row["label"]))
        for row in load_dataset(args.dataset)
    ]
    if not items:
        print("error: empty dataset", file=sys.stderr)
        return 1
    report = audit(items, SolverConfig())
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            for f in report.findings:
                fh.write(
                    json.dumps(
                        {
                            "id": f.instance_id,
                            "stored_label": f.stored_label,
                            "solver_value": f.solver_value,
                            "verdict": f.verdict,
                            "reason": f.reason,
                        },
                        sort_keys=True,
                    )
                    + "\n"
                )
    print(f"{'id':24s} {'verdict':12s} {'stored':>12s} {'solver':>12s}")
    for f in report.findings:
        solver = f"{f.solver_value:g}" if f.solver_value is not None else "-"
        print(f"{f.instance_id:24s} {f.verdict:12s} {f.stored_label:>12s} {solver:>12s}")
    rate = report.error_rate
    rate_text = f"{rate:.2%}" if rate is not None else "n/a"
    print(
        f"confirmed={report.confirmed} mismatches={report.mismatches} "
        f"unsupported={report.unsupported} error_rate={rate_text}"
    )
    return 0


def cmd_export_sft(args: argparse.Namespace) -> int:
    items = {row["id"]: row for row in load_dataset(args.labels)}
    traces = _load_traces(args.traces)
    trajectories = []
    for instance_id, record in sorted(traces.items()):
        item = items.get(instance_id)
        if item is None or "trace" not in record or item["label"] is None:
            continue
        label_text = _label_text(item["label"])
        trace = WorkflowTrace.from_dict(record["trace"])
        trajectory = assemble(
            trace,
            float(label_text),
            choose_epsilon(label_text),
            instance_id=instance_id,
        )
        if trajectory is not None:
            trajectories.append(trajectory)
    count = export_sft(trajectories, args.out)
    print(f"exported {count} records from {len(trajectories)} trajectories -> {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="milpforge",
        description="Verifiable MILP data generation, solving, agent runs, and evaluation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--config", default=None, help="key = value config file")
        p.add_argument("--workers", type=int, default=os.cpu_count() or 1)

    g = sub.add_parser("generate", help="emit verified instances + manifest")
    common(g)
    g.add_argument("--counts", default="", help="e.g. 'linear=100,knapsack=20'")
    g.add_argument("--out", required=True)
    g.set_defaults(func=cmd_generate)

    s = sub.add_parser("solve", help="solve one instance file")
    s.add_argument("instance")
    s.set_defaults(func=cmd_solve)

    r = sub.add_parser("run-agent", help="run the agent pipeline over a dataset")
    common(r)
    r.add_argument("--dataset", required=True)
    r.add_argument("--backend", default="canned")
    r.add_argument("--executor", default="oracle")
    r.add_argument("--max-debug", type=int, default=6)
    r.add_argument("--timeout", type=float, default=60.0)
    r.add_argument("--out", required=True)
    r.set_defaults(func=cmd_run_agent)

    e = sub.add_parser("evaluate", help="accuracy + execution-rate report")
    e.add_argument("--traces", required=True)
    e.add_argument("--labels", required=True)
    e.add_argument("--out", default=None)
    e.set_defaults(func=cmd_evaluate)

    a = sub.add_parser("audit", help="re-solve stored labels and report mismatches")
    a.add_argument("--dataset", required=True)
    a.add_argument("--out", default=None)
    a.set_defaults(func=cmd_audit)

    x = sub.add_parser("export-sft", help="assemble + export verified trajectories")
    x.add_argument("--traces", required=True)
    x.add_argument("--labels", required=True)
    x.add_argument("--out", required=True)
    x.set_defaults(func=cmd_export_sft)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
