"""Command-line pipeline: generate, linearize, eval, report, capacity.

Stages communicate through files so any step can be rerun or audited
independently. Exit codes: 0 success, 1 validation failure, 2 partial
evaluation, 3 configuration error.
"""

from __future__ import annotations

import json
import os
import sys
from collections import Counter

import click

from . import harness
from .datasets import finalize_dataset, load_dataset, save_dataset
from .gateway import Gateway, GatewayError, ModelConfig, ResponseCache, resolve_model
from .generators import gen_graphqa, gen_graphwave
from .linearize import (Labeling, LinearizationSpec, Ordering, linearize,
                        render_edge_list)
from .prompts import Shots, max_edges_for_window

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_PARTIAL = 2
EXIT_CONFIG = 3

METHOD_TOKENS = {
    "corenumber": (Ordering.CORE_NUMBER, False),
    "degree": (Ordering.DEGREE, False),
    "pagerank": (Ordering.PAGERANK, False),
    "lg{corenumber}": (Ordering.CORE_NUMBER, True),
    "lg{degree}": (Ordering.DEGREE, True),
    "lg{pagerank}": (Ordering.PAGERANK, True),
    "random": (Ordering.RANDOM, False),
    "defaultordering": (Ordering.DEFAULT_ORDER, False),
}

DEFAULT_METHODS = ["CoreNumber", "Degree", "PageRank",
                   "LG{CoreNumber}", "LG{Degree}", "LG{PageRank}"]
DEFAULT_LABELINGS = ["random_labels", "node_relabeling"]


def _parse_method(token: str):
    try:
        return METHOD_TOKENS[token.strip().lower()]
    except KeyError:
        raise click.ClickException(
            f"unknown method {token!r}; choose from {sorted(METHOD_TOKENS)}")


@click.group()
def main():
    """Graph linearization benchmark pipeline."""


@main.command()
@click.option("--dataset", "name", type=click.Choice(["graphwave", "graphqa"]),
              required=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), required=True)
@click.option("--scale", type=float, default=1.0, show_default=True,
              help="Shrink factor for quick runs (1.0 = full dataset).")
def generate(name, seed, out, scale):
    """Generate a dataset JSONL with fixed task instances."""
    if name == "graphwave":
        per_combo = max(1, round(100 * scale))
        records = gen_graphwave(seed, graphs_per_combo=per_combo)
    else:
        records = gen_graphqa(seed, scale=scale)
    finalize_dataset(records, seed)
    manifest = save_dataset(records, name, seed, out)

    mean_n = sum(r.graph.n for r in records) / len(records)
    mean_m = sum(r.graph.m for r in records) / len(records)
    click.echo(f"wrote {manifest.count} graphs to {out}")
    click.echo(f"mean nodes {mean_n:.2f}, mean edges {mean_m:.2f}")
    click.echo(f"content hash {manifest.content_hash}")


@main.command("linearize")
@click.option("--dataset", "dataset_path", type=click.Path(exists=True), required=True)
@click.option("--method", default="Degree", show_default=True,
              help="CoreNumber | Degree | PageRank | LG{*} | Random | DefaultOrdering")
@click.option("--labeling", type=click.Choice([l.value for l in Labeling]),
              default=Labeling.NODE_RELABELING.value, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--seeds", "n_seeds", type=int, default=1, show_default=True,
              help="Emit one file per seed in [seed, seed+N).")
@click.option("--out", type=click.Path(dir_okay=False), required=True)
def linearize_cmd(dataset_path, method, labeling, seed, n_seeds, out):
    """Linearize every record; validates edge-multiset preservation."""
    ordering, via_lg = _parse_method(method)
    manifest, records = load_dataset(dataset_path)
    for s in range(seed, seed + n_seeds):
        spec = LinearizationSpec(ordering=ordering, labeling=labeling,
                                 via_linegraph=via_lg, seed=s)
        path = out if n_seeds == 1 else f"{out}.seed{s}"
        out_manifest = {"schema_version": 1, "method": spec.method_label(),
                        "labeling": labeling, "seed": s,
                        "input_hash": manifest.content_hash,
                        "count": len(records)}
        lines = []
        for rec in records:
            lg = linearize(rec.graph, spec, rec.default_edge_order)
            if Counter(lg.original_edges()) != Counter(rec.graph.sorted_edges()):
                click.echo(f"validation failure on {rec.id}", err=True)
                sys.exit(EXIT_VALIDATION)
            obj = lg.to_json()
            obj["id"] = rec.id
            obj["rendered"] = render_edge_list(lg)
            lines.append(json.dumps(obj, separators=(",", ":")))
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(json.dumps(out_manifest, separators=(",", ":")) + "\n")
            fh.write("\n".join(lines) + "\n")
        click.echo(f"wrote {len(records)} linearizations to {path}")


@main.command("eval")
@click.option("--dataset", "dataset_path", type=click.Path(exists=True))
@click.option("--model", "model_name", default=None,
              help="mock:oracle | mock:constant:<ans> | mock:random:<seed> | model name")
@click.option("--endpoint", default=None, help="Chat-completion endpoint URL.")
@click.option("--methods", default=",".join(DEFAULT_METHODS), show_default=True)
@click.option("--labelings", default=",".join(DEFAULT_LABELINGS), show_default=True)
@click.option("--shots", default="zero,one", show_default=True)
@click.option("--tasks", default=None, help="Comma list; default: all applicable.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--baseline-seeds", type=int, default=5, show_default=True,
              help="Number of random-baseline seeds to average (0 disables).")
@click.option("--out", "out_dir", type=click.Path(file_okay=False), required=True)
@click.option("--cache/--no-cache", default=True, show_default=True)
@click.option("--workers", type=int, default=1, show_default=True)
@click.option("--config", "config_path", type=click.Path(exists=True),
              help="JSON run config; command-line flags override it.")
def eval_cmd(dataset_path, model_name, endpoint, methods, labelings, shots,
             tasks, seed, baseline_seeds, out_dir, cache, workers, config_path):
    """Run the evaluation matrix and emit results files."""
    cfg = {}
    if config_path:
        with open(config_path, encoding="utf-8") as fh:
            cfg = json.load(fh)
    dataset_path = dataset_path or cfg.get("dataset")
    model_name = model_name or cfg.get("model")
    endpoint = endpoint or cfg.get("endpoint")
    if not dataset_path or not model_name:
        click.echo("error: --dataset and --model are required", err=True)
        sys.exit(EXIT_CONFIG)
    methods = cfg.get("methods", methods)
    labelings = cfg.get("labelings", labelings)
    shots = cfg.get("shots", shots)
    tasks = cfg.get("tasks", tasks)
    seed = cfg.get("seed", seed)
    baseline_seeds = cfg.get("baseline_seeds", baseline_seeds)

    if isinstance(methods, str):
        methods = [m for m in methods.split(",") if m.strip()]
    if isinstance(labelings, str):
        labelings = [l for l in labelings.split(",") if l.strip()]
    if isinstance(shots, str):
        shots = [s for s in shots.split(",") if s.strip()]

    try:
        model_cfg = ModelConfig(endpoint=endpoint or "", model=model_name)
        model = resolve_model(model_name, model_cfg)
    except GatewayError as err:
        click.echo(f"error: {err}", err=True)
        sys.exit(EXIT_CONFIG)

    _, records = load_dataset(dataset_path)
    specs = []
    for token in methods:
        ordering, via_lg = _parse_method(token)
        if ordering in (Ordering.RANDOM, Ordering.DEFAULT_ORDER):
            lab = (Labeling.RANDOM_LABELS if ordering is Ordering.RANDOM
                   else Labeling.DEFAULT_LABELS)
            specs.append(LinearizationSpec(ordering=ordering, labeling=lab,
                                           seed=seed))
            continue
        for lab in labelings:
            specs.append(LinearizationSpec(ordering=ordering, labeling=lab,
                                           via_linegraph=via_lg, seed=seed))

    os.makedirs(out_dir, exist_ok=True)
    response_cache = ResponseCache(os.path.join(out_dir, "responses.jsonl")) \
        if cache else None
    gw = Gateway(model, cache=response_cache, max_parallel=workers)

    from .tasks import TaskKind
    task_kinds = None
    if tasks:
        task_kinds = [TaskKind(t.strip()) for t in tasks.split(",")] \
            if isinstance(tasks, str) else [TaskKind(t) for t in tasks]

    try:
        table = harness.run_matrix(
            records, specs, model, shots=[Shots(s) for s in shots],
            tasks=task_kinds,
            baseline_seed=seed if baseline_seeds > 0 else None,
            baseline_runs=baseline_seeds, gateway=gw,
            checkpoint_dir=os.path.join(out_dir, "cells"))
    except GatewayError as err:
        click.echo(f"evaluation incomplete: {err}", err=True)
        sys.exit(EXIT_PARTIAL)

    csv_path, txt_path = harness.emit_report(table, os.path.join(out_dir, "results"))
    with open(os.path.join(out_dir, "run_manifest.json"), "w", encoding="utf-8") as fh:
        json.dump({"dataset": dataset_path, "model": model.name, "seed": seed,
                   "methods": [s.to_json() for s in specs],
                   "shots": shots, "metadata": table.metadata,
                   "network_calls": gw.network_calls}, fh, indent=2)
    click.echo(f"wrote {csv_path} and {txt_path}")
    click.echo(open(txt_path, encoding="utf-8").read())


@main.command()
@click.option("--results", "csv_path", type=click.Path(exists=True), required=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def report(csv_path, out):
    """Render a results CSV as an aligned text table."""
    table = harness.table_from_csv(harness.read_csv(csv_path))
    text = harness.format_table(table)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    click.echo(text)


@main.command()
@click.argument("window", type=int)
def capacity(window):
    """Max edges whose linearized prompt fits in WINDOW context tokens."""
    click.echo(str(max_edges_for_window(window)))


if __name__ == "__main__":
    main()
